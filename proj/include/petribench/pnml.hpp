#pragma once
// PNML (ISO 15909-2) reader/writer for the P/T-net subset:
// pnml / net / page / (place | transition | arc), with initialMarking
// token counts and inscription arc weights. Colored-net documents are
// rejected; graphics and tool-specific annotations are ignored.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "petribench/net.hpp"

namespace petribench {

struct pnml_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr char kDefaultPnmlNamespace[] =
    "http://www.pnml.org/version-2009/grammar/pnml";
inline constexpr char kPtNetType[] =
    "http://www.pnml.org/version-2009/grammar/ptnet";

// Parses a P/T net. Exactly one <net> is accepted; pages are flattened;
// a missing initialMarking means 0 tokens and a missing inscription
// weight 1. Throws pnml_error on malformed XML, colored net types,
// dangling arc endpoints, or structure failing validate().
PetriNet parse_pnml(std::istream& in);
PetriNet parse_pnml_string(const std::string& xml);
PetriNet parse_pnml_file(const std::string& path);

// Deterministic emission: places, then transitions, then arcs, each in
// declaration order; node ids are synthesized (p#, t#, a#) and the
// human-readable names travel in <name><text>. parse(write(n)) == n
// structurally for every net passing validate().
void write_pnml(const PetriNet& net, std::ostream& out,
                const std::string& xml_namespace = kDefaultPnmlNamespace);
std::string write_pnml_string(
    const PetriNet& net,
    const std::string& xml_namespace = kDefaultPnmlNamespace);
void write_pnml_file(
    const PetriNet& net, const std::string& path,
    const std::string& xml_namespace = kDefaultPnmlNamespace);

}  // namespace petribench

#pragma once
// Place/Transition Petri net data model and firing-rule semantics.
//
// A PetriNet is immutable after construction (build it, then share it
// freely across threads). Markings are independent dense token vectors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace petribench {

using PlaceId = std::uint32_t;
using TransitionId = std::uint32_t;
using TokenCount = std::uint64_t;

// Structural misuse (unknown ids, duplicate names, weight-0 arcs at build
// time) and firing-rule violations (firing a disabled transition).
struct net_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Arc {
    PlaceId place = 0;
    TokenCount weight = 1;
    friend bool operator==(const Arc&, const Arc&) = default;
};

struct Marking {
    std::vector<TokenCount> tokens;

    TokenCount operator[](PlaceId p) const { return tokens[p]; }
    std::size_t size() const { return tokens.size(); }
    friend bool operator==(const Marking&, const Marking&) = default;
};

class PetriNet {
public:
    std::string name = "net";

    PetriNet() = default;
    explicit PetriNet(std::string net_name) : name(std::move(net_name)) {}

    PlaceId add_place(std::string place_name, TokenCount initial = 0);
    TransitionId add_transition(std::string transition_name);
    // Adds (or merges, summing weights) one input/output arc.
    void add_pre(TransitionId t, PlaceId p, TokenCount weight = 1);
    void add_post(TransitionId t, PlaceId p, TokenCount weight = 1);

    // Convenience used by the model generators: create a transition with
    // all arcs at once, referring to places by name.
    TransitionId add_transition(
        std::string transition_name,
        const std::vector<std::pair<std::string, TokenCount>>& pre_arcs,
        const std::vector<std::pair<std::string, TokenCount>>& post_arcs);

    std::size_t place_count() const { return place_names_.size(); }
    std::size_t transition_count() const { return transition_names_.size(); }

    const std::string& place_name(PlaceId p) const { return place_names_.at(p); }
    const std::string& transition_name(TransitionId t) const {
        return transition_names_.at(t);
    }
    TokenCount initial_tokens(PlaceId p) const { return initial_tokens_.at(p); }

    std::optional<PlaceId> find_place(std::string_view place_name) const;
    std::optional<TransitionId> find_transition(std::string_view name) const;

    const std::vector<Arc>& pre(TransitionId t) const { return pre_.at(t); }
    const std::vector<Arc>& post(TransitionId t) const { return post_.at(t); }

    Marking initial_marking() const;

private:
    std::vector<std::string> place_names_;
    std::vector<TokenCount> initial_tokens_;
    std::vector<std::string> transition_names_;
    std::vector<std::vector<Arc>> pre_;
    std::vector<std::vector<Arc>> post_;
    std::unordered_map<std::string, PlaceId> place_index_;
    std::unordered_map<std::string, TransitionId> transition_index_;
};

// Standard P/T enabling rule: m(p) >= pre(t)(p) for every input place.
bool enabled(const PetriNet& net, const Marking& m, TransitionId t);

// Firing rule: m'(p) = m(p) - pre(t)(p) + post(t)(p). Throws net_error if
// t is disabled; token overflow past 2^64-1 is a hard error.
Marking fire(const PetriNet& net, const Marking& m, TransitionId t);

// One (t, fire(m, t)) entry per enabled transition, in transition order.
// Empty result means m is a dead marking.
std::vector<std::pair<TransitionId, Marking>> successors(const PetriNet& net,
                                                         const Marking& m);

// Empty list iff all structural invariants hold; each entry names the
// offending element. Problems are data, not failures.
std::vector<std::string> validate(const PetriNet& net);

}  // namespace petribench

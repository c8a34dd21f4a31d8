#pragma once
// Formula DSL: parser for the examination grammar, evaluator over the
// exploration engine, and the T/F/"." result-vector rendering.
//
//   set     := item (";" item)* ;
//   item    := ident ":" formula ;
//   formula := "DEADLOCK" | "SAFE" | "BOUND" "(" name ")" cmp int
//            | "DEAD" "(" name ")" | "QUASILIVE" "(" name ")"
//            | "LIVE" "(" name ")" | ("EF"|"AG") pred ;
//   pred    := pred "|" pred | pred "&" pred | "!" pred
//            | "(" pred ")" | atom ;
//   atom    := "tokens" "(" name ")" cmp ( int | "tokens" "(" name ")" )
//            | "fireable" "(" name ")" ;
//   cmp     := "<=" | "<" | "=" | ">=" | ">" | "!=" ;
//
// "|" binds loosest, then "&", then "!".

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "petribench/engine.hpp"
#include "petribench/net.hpp"

namespace petribench {

// Syntax errors and duplicate identifiers, pinpointing line/column.
struct formula_error : std::runtime_error {
    formula_error(const std::string& message, int line, int column);
    int line = 0;
    int column = 0;
};

enum class Cmp { Le, Lt, Eq, Ge, Gt, Ne };

bool compare(TokenCount lhs, Cmp cmp, TokenCount rhs);

// Boolean predicate over a marking (the EF/AG payload).
struct Pred {
    enum class Kind { And, Or, Not, TokensCmp, Fireable };
    Kind kind = Kind::Fireable;
    std::vector<Pred> children;  // And/Or: two, Not: one

    // TokensCmp: tokens(place) cmp (rhs_value | tokens(rhs_place))
    std::string place;
    Cmp cmp = Cmp::Eq;
    bool rhs_is_place = false;
    std::string rhs_place;
    std::uint64_t rhs_value = 0;

    std::string transition;  // Fireable
};

struct Formula {
    enum class Kind { Deadlock, Safe, Bound, Dead, Quasilive, Live, EF, AG };
    Kind kind = Kind::Deadlock;
    std::string name;          // Bound: place; Dead/Quasilive/Live: transition
    Cmp cmp = Cmp::Le;         // Bound comparison
    std::uint64_t bound = 0;   // Bound constant
    Pred pred;                 // EF/AG payload
};

struct FormulaItem {
    std::string id;
    Formula formula;
};

// Ordered by identifier (lexicographic), the order result vectors use.
struct FormulaSet {
    std::vector<FormulaItem> items;
};

enum class Outcome { True, False, Unknown };

struct ResultVector {
    std::vector<std::string> identifiers;  // defines the order
    std::vector<Outcome> outcomes;         // one per identifier
    std::vector<std::string> diagnostics;  // e.g. unresolvable names
};

// Maximum predicate nesting depth accepted by the parser.
inline constexpr int kMaxPredDepth = 64;

FormulaSet parse_formulae(const std::string& text);

// EF stops at the first witness; AG phi is evaluated as !EF !phi;
// structural forms delegate to the engine. A formula that exhausts the
// budget, or references a name the net lacks, comes back Unknown (the
// latter also records a diagnostic).
ResultVector evaluate(const PetriNet& net, const FormulaSet& set,
                      const ExploreOptions& opts = {});

// One character per formula: T, F, or "." for Unknown, e.g. "FFT.T".
std::string format_vector(const ResultVector& v);

// Renders a formula set back into DSL text (one item per line); the
// output re-parses to an equal set.
std::string format_formulae(const FormulaSet& set);

enum class FormulaCategory { Structural, Reachability };

// Seeded random formula sets over the net's own places/transitions, so
// formula examinations run end-to-end without the contest's (unpublished)
// formula files. Identifiers are "s01".."sNN" / "r01".."rNN", keeping
// lexicographic and numeric order aligned.
FormulaSet sample_formulae(const PetriNet& net, FormulaCategory category,
                           std::uint64_t seed, int count = 16);

}  // namespace petribench

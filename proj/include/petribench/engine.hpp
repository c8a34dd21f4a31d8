#pragma once
// Explicit state-space exploration: counting, deadlock detection, place
// bounds, transition liveness, and the reachability graph.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "petribench/net.hpp"

namespace petribench {

enum class Order { BFS, DFS };

struct ExploreOptions {
    // Desk-scale defaults; both CLI-overridable. nullopt = unlimited.
    std::optional<std::uint64_t> max_states = 10'000'000;
    std::optional<double> max_seconds = 300.0;
    bool store_graph = false;
    Order order = Order::BFS;
};

// Raised by the convenience wrappers when a budget ran out before the
// answer was decided ("unknown", never conflated with false).
struct incomplete_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpaceResult {
    // Arbitrary precision so the result type can be shared with symbolic
    // backends; the explicit engine itself never exceeds its state budget.
    mpz_class count = 0;
    bool exhausted = false;         // frontier emptied within budget
    bool stopped_by_visitor = false;
    std::optional<Marking> dead_marking;
    std::vector<TokenCount> place_bounds;  // max per place over visited
    std::set<TransitionId> fired;          // fired on >= 1 explored edge
    std::uint64_t peak_states_stored = 0;
};

struct Edge {
    std::uint32_t src = 0;
    std::uint32_t transition = 0;
    std::uint32_t dst = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct ReachabilityGraph {
    std::vector<Marking> states;  // indexed marking store
    std::vector<Edge> edges;
    std::uint32_t initial = 0;
};

// Visits every marking reachable from the initial marking. The optional
// visitor sees each state exactly once, in discovery order; returning
// false stops the exploration early (sets stopped_by_visitor).
StateSpaceResult explore(
    const PetriNet& net, const ExploreOptions& opts = {},
    const std::function<bool(const Marking&)>& visitor = nullptr);

// explore().count; throws incomplete_error if the budget ran out first.
mpz_class count_states(const PetriNet& net, const ExploreOptions& opts = {});

// A reachable dead marking if one exists. nullopt means none exists;
// throws incomplete_error when the budget ran out without a witness.
std::optional<Marking> find_deadlock(const PetriNet& net,
                                     const ExploreOptions& opts = {});

// Max tokens held in p over all reachable markings (exact on exhaustion,
// else incomplete_error).
TokenCount place_bound(const PetriNet& net, PlaceId p,
                       const ExploreOptions& opts = {});

enum class LivenessLevel { L0, L1, L4 };

// L0 (dead): t fires on no reachable edge. L1 (quasi-live): t fires on
// some edge. L4 (live): from every reachable marking some path enables t
// (backward reachability over the stored graph). Throws incomplete_error
// when exploration was not exhaustive.
bool transition_liveness(const PetriNet& net, TransitionId t,
                         LivenessLevel level,
                         const ExploreOptions& opts = {});

// Full reachability graph (implies store_graph); node count equals the
// explore count. Throws incomplete_error when the budget ran out.
ReachabilityGraph build_graph(const PetriNet& net,
                              const ExploreOptions& opts = {});

}  // namespace petribench

#include "petribench/engine.hpp"

#include <chrono>
#include <cstring>
#include <memory>
#include <unordered_set>

namespace petribench {

namespace {

// ---------------------------------------------------------------------
// Byte-packed marking storage. Each place gets a fixed little-endian
// width of 1/2/4/8 bytes chosen from the largest value seen so far; when
// a marking overflows its width the whole store is re-encoded with the
// offending place widened. States live in fixed-size chunks so slot
// pointers stay stable as the store grows.
// ---------------------------------------------------------------------

constexpr std::uint32_t kChunkShift = 12;  // 4096 states per chunk
constexpr std::uint32_t kChunkSize = 1u << kChunkShift;

int width_for(TokenCount v) {
    if (v <= 0xff) return 1;
    if (v <= 0xffff) return 2;
    if (v <= 0xffffffffull) return 4;
    return 8;
}

class StateCodec {
  public:
    explicit StateCodec(const Marking& m0) {
        widths_.reserve(m0.size());
        for (TokenCount v : m0.tokens) widths_.push_back(width_for(v));
        recompute_stride();
    }

    std::size_t stride() const { return stride_; }

    // Index of the first place that does not fit, or -1 if all fit.
    int first_misfit(const Marking& m) const {
        for (std::size_t p = 0; p < widths_.size(); ++p)
            if (width_for(m.tokens[p]) > widths_[p])
                return static_cast<int>(p);
        return -1;
    }

    void widen(std::size_t place, TokenCount needed) {
        widths_[place] = width_for(needed);
        recompute_stride();
    }

    void encode(const Marking& m, std::uint8_t* out) const {
        for (std::size_t p = 0; p < widths_.size(); ++p) {
            TokenCount v = m.tokens[p];
            int w = widths_[p];
            for (int b = 0; b < w; ++b) {
                *out++ = static_cast<std::uint8_t>(v & 0xff);
                v >>= 8;
            }
        }
    }

    void decode(const std::uint8_t* in, Marking& m) const {
        for (std::size_t p = 0; p < widths_.size(); ++p) {
            int w = widths_[p];
            TokenCount v = 0;
            for (int b = 0; b < w; ++b)
                v |= static_cast<TokenCount>(*in++) << (8 * b);
            m.tokens[p] = v;
        }
    }

  private:
    void recompute_stride() {
        stride_ = 0;
        for (int w : widths_) stride_ += static_cast<std::size_t>(w);
        if (stride_ == 0) stride_ = 1;  // zero-place nets still need a slot
    }

    std::vector<int> widths_;
    std::size_t stride_ = 0;
};

class StateStore {
  public:
    explicit StateStore(std::size_t stride) : stride_(stride) {}

    std::uint8_t* slot(std::uint64_t i) {
        std::uint64_t chunk = i >> kChunkShift;
        while (chunk >= chunks_.size())
            chunks_.push_back(
                std::make_unique<std::uint8_t[]>(stride_ * kChunkSize));
        return chunks_[chunk].get() + stride_ * (i & (kChunkSize - 1));
    }

    const std::uint8_t* slot(std::uint64_t i) const {
        return chunks_[i >> kChunkShift].get() +
               stride_ * (i & (kChunkSize - 1));
    }

    std::size_t stride() const { return stride_; }

  private:
    std::size_t stride_;
    std::vector<std::unique_ptr<std::uint8_t[]>> chunks_;
};

struct SlotHash {
    const StateStore* const* store;
    std::size_t operator()(std::uint32_t i) const {
        const StateStore& s = **store;
        return std::hash<std::string_view>{}(std::string_view(
            reinterpret_cast<const char*>(s.slot(i)), s.stride()));
    }
};

struct SlotEq {
    const StateStore* const* store;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
        const StateStore& s = **store;
        return std::memcmp(s.slot(a), s.slot(b), s.stride()) == 0;
    }
};

struct ExploreOutput {
    StateSpaceResult result;
    ReachabilityGraph graph;  // filled only when opts.store_graph
};

ExploreOutput explore_core(
    const PetriNet& net, const ExploreOptions& opts,
    const std::function<bool(const Marking&)>& visitor) {
    const std::size_t P = net.place_count();
    const std::size_t T = net.transition_count();
    const Marking m0 = net.initial_marking();

    StateCodec codec(m0);
    auto store = std::make_unique<StateStore>(codec.stride());
    StateStore* store_ptr = store.get();
    std::unordered_set<std::uint32_t, SlotHash, SlotEq> visited(
        1024, SlotHash{&store_ptr}, SlotEq{&store_ptr});

    std::uint64_t count = 0;  // states stored so far
    ExploreOutput out;
    StateSpaceResult& res = out.result;
    res.place_bounds.assign(P, 0);
    std::vector<char> fired_flag(T, 0);

    const std::uint64_t max_states =
        opts.max_states ? *opts.max_states : UINT64_MAX;
    const bool timed = opts.max_seconds.has_value();
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(
                timed ? *opts.max_seconds : 0.0));

    // Re-encode every stored state after a width change. Slot contents
    // move, so the hash set is rebuilt from scratch.
    auto rebuild = [&](std::size_t place, TokenCount needed) {
        StateCodec wider = codec;
        wider.widen(place, needed);
        auto bigger = std::make_unique<StateStore>(wider.stride());
        Marking tmp = m0;
        for (std::uint64_t i = 0; i < count; ++i) {
            codec.decode(store->slot(i), tmp);
            wider.encode(tmp, bigger->slot(i));
        }
        codec = wider;
        store = std::move(bigger);
        store_ptr = store.get();
        visited = decltype(visited)(visited.bucket_count(),
                                    SlotHash{&store_ptr}, SlotEq{&store_ptr});
        for (std::uint32_t i = 0; i < count; ++i) visited.insert(i);
    };

    // Store m (deduplicated); returns its index and whether it was new.
    // Caller must have room (count < max_states) before inserting.
    auto intern = [&](const Marking& m) -> std::pair<std::uint32_t, bool> {
        int misfit = codec.first_misfit(m);
        if (misfit >= 0)
            rebuild(static_cast<std::size_t>(misfit),
                    m.tokens[static_cast<std::size_t>(misfit)]);
        codec.encode(m, store->slot(count));
        auto [it, inserted] = visited.insert(static_cast<std::uint32_t>(count));
        if (!inserted) return {*it, false};
        ++count;
        for (std::size_t p = 0; p < P; ++p)
            res.place_bounds[p] = std::max(res.place_bounds[p], m.tokens[p]);
        return {static_cast<std::uint32_t>(count - 1), true};
    };

    bool budget_hit = false;
    bool visitor_stop = false;
    auto [root, root_new] = intern(m0);
    (void)root_new;
    if (visitor && !visitor(m0)) visitor_stop = true;

    // BFS frontier is the arena range [head, count); DFS keeps an
    // explicit stack of indices. Either way each state expands once.
    std::uint64_t head = 0;
    std::vector<std::uint32_t> stack;
    if (opts.order == Order::DFS) stack.push_back(root);

    Marking cur = m0;
    Marking succ = m0;
    std::uint64_t expanded = 0;

    while (!visitor_stop) {
        std::uint32_t cur_idx;
        if (opts.order == Order::BFS) {
            if (head >= count) break;
            cur_idx = static_cast<std::uint32_t>(head++);
        } else {
            if (stack.empty()) break;
            cur_idx = stack.back();
            stack.pop_back();
        }
        if (timed && (expanded++ & 1023) == 0 &&
            std::chrono::steady_clock::now() >= deadline) {
            budget_hit = true;
            break;
        }

        codec.decode(store->slot(cur_idx), cur);
        bool any_enabled = false;
        for (TransitionId t = 0; t < T; ++t) {
            if (!enabled(net, cur, t)) continue;
            any_enabled = true;
            fired_flag[t] = 1;
            succ = cur;
            for (const Arc& a : net.pre(t)) succ.tokens[a.place] -= a.weight;
            for (const Arc& a : net.post(t)) {
                TokenCount before = succ.tokens[a.place];
                succ.tokens[a.place] = before + a.weight;
                if (succ.tokens[a.place] < before)
                    throw net_error("token count overflow while firing '" +
                                    net.transition_name(t) + "'");
            }
            if (count >= max_states) {
                // The budget caps states *stored*. A known successor
                // still records its edge; only a genuinely new one
                // trips the budget (monotone in max_states).
                int misfit = codec.first_misfit(succ);
                if (misfit >= 0)
                    rebuild(static_cast<std::size_t>(misfit),
                            succ.tokens[static_cast<std::size_t>(misfit)]);
                codec.encode(succ, store->slot(count));
                auto it = visited.find(static_cast<std::uint32_t>(count));
                if (it == visited.end()) {
                    budget_hit = true;
                    break;
                }
                if (opts.store_graph)
                    out.graph.edges.push_back({cur_idx, t, *it});
                continue;
            }
            auto [idx, fresh] = intern(succ);
            if (opts.store_graph) out.graph.edges.push_back({cur_idx, t, idx});
            if (fresh) {
                if (opts.order == Order::DFS) stack.push_back(idx);
                if (visitor && !visitor(succ)) {
                    visitor_stop = true;
                    break;
                }
            }
        }
        if (budget_hit) break;
        if (!any_enabled && !res.dead_marking) res.dead_marking = cur;
    }

    res.count = mpz_class(std::to_string(count));
    res.exhausted = !budget_hit && !visitor_stop;
    res.stopped_by_visitor = visitor_stop;
    res.peak_states_stored = count;
    for (TransitionId t = 0; t < T; ++t)
        if (fired_flag[t]) res.fired.insert(t);

    if (opts.store_graph) {
        out.graph.initial = root;
        out.graph.states.resize(count, m0);
        for (std::uint64_t i = 0; i < count; ++i)
            codec.decode(store->slot(i), out.graph.states[i]);
    }
    return out;
}

}  // namespace

StateSpaceResult explore(const PetriNet& net, const ExploreOptions& opts,
                         const std::function<bool(const Marking&)>& visitor) {
    return explore_core(net, opts, visitor).result;
}

mpz_class count_states(const PetriNet& net, const ExploreOptions& opts) {
    StateSpaceResult r = explore(net, opts);
    if (!r.exhausted)
        throw incomplete_error("state count incomplete: budget exhausted");
    return r.count;
}

std::optional<Marking> find_deadlock(const PetriNet& net,
                                     const ExploreOptions& opts) {
    StateSpaceResult r = explore(net, opts);
    if (r.dead_marking) return r.dead_marking;
    if (!r.exhausted)
        throw incomplete_error(
            "deadlock search incomplete: budget exhausted");
    return std::nullopt;
}

TokenCount place_bound(const PetriNet& net, PlaceId p,
                       const ExploreOptions& opts) {
    if (p >= net.place_count())
        throw net_error("place id out of range");
    StateSpaceResult r = explore(net, opts);
    if (!r.exhausted)
        throw incomplete_error("place bound incomplete: budget exhausted");
    return r.place_bounds[p];
}

bool transition_liveness(const PetriNet& net, TransitionId t,
                         LivenessLevel level, const ExploreOptions& opts) {
    if (t >= net.transition_count())
        throw net_error("transition id out of range");
    if (level == LivenessLevel::L0 || level == LivenessLevel::L1) {
        StateSpaceResult r = explore(net, opts);
        if (!r.exhausted)
            throw incomplete_error(
                "liveness check incomplete: budget exhausted");
        bool fired = r.fired.count(t) > 0;
        return level == LivenessLevel::L0 ? !fired : fired;
    }
    // L4: from every reachable marking some path enables t. Compute the
    // backward closure of {states enabling t} over the edge relation and
    // require it to cover the whole graph.
    ReachabilityGraph g = build_graph(net, opts);
    std::size_t n = g.states.size();
    std::vector<std::vector<std::uint32_t>> rev(n);
    std::vector<char> good(n, 0);
    for (const Edge& e : g.edges) {
        rev[e.dst].push_back(e.src);
        if (e.transition == t) good[e.src] = 1;
    }
    std::vector<std::uint32_t> work;
    for (std::uint32_t i = 0; i < n; ++i)
        if (good[i]) work.push_back(i);
    while (!work.empty()) {
        std::uint32_t s = work.back();
        work.pop_back();
        for (std::uint32_t pred : rev[s])
            if (!good[pred]) {
                good[pred] = 1;
                work.push_back(pred);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!good[i]) return false;
    return true;
}

ReachabilityGraph build_graph(const PetriNet& net,
                              const ExploreOptions& opts) {
    ExploreOptions o = opts;
    o.store_graph = true;
    ExploreOutput out = explore_core(net, o, nullptr);
    if (!out.result.exhausted)
        throw incomplete_error(
            "reachability graph incomplete: budget exhausted");
    return std::move(out.graph);
}

}  // namespace petribench

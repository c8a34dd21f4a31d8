#include "petribench/net.hpp"

#include <algorithm>

namespace petribench {

PlaceId PetriNet::add_place(std::string place_name, TokenCount initial) {
    auto [it, inserted] = place_index_.try_emplace(
        place_name, static_cast<PlaceId>(place_names_.size()));
    if (!inserted)
        throw net_error("duplicate place name: " + place_name);
    place_names_.push_back(std::move(place_name));
    initial_tokens_.push_back(initial);
    return it->second;
}

TransitionId PetriNet::add_transition(std::string transition_name) {
    auto [it, inserted] = transition_index_.try_emplace(
        transition_name, static_cast<TransitionId>(transition_names_.size()));
    if (!inserted)
        throw net_error("duplicate transition name: " + transition_name);
    transition_names_.push_back(std::move(transition_name));
    pre_.emplace_back();
    post_.emplace_back();
    return it->second;
}

void PetriNet::add_pre(TransitionId t, PlaceId p, TokenCount weight) {
    if (t >= transition_count()) throw net_error("unknown transition id");
    if (p >= place_count()) throw net_error("unknown place id");
    if (weight == 0) throw net_error("arc weight must be >= 1");
    for (Arc& a : pre_[t])
        if (a.place == p) {
            a.weight += weight;
            return;
        }
    pre_[t].push_back({p, weight});
}

void PetriNet::add_post(TransitionId t, PlaceId p, TokenCount weight) {
    if (t >= transition_count()) throw net_error("unknown transition id");
    if (p >= place_count()) throw net_error("unknown place id");
    if (weight == 0) throw net_error("arc weight must be >= 1");
    for (Arc& a : post_[t])
        if (a.place == p) {
            a.weight += weight;
            return;
        }
    post_[t].push_back({p, weight});
}

TransitionId PetriNet::add_transition(
    std::string transition_name,
    const std::vector<std::pair<std::string, TokenCount>>& pre_arcs,
    const std::vector<std::pair<std::string, TokenCount>>& post_arcs) {
    TransitionId t = add_transition(std::move(transition_name));
    for (const auto& [pname, w] : pre_arcs) {
        auto p = find_place(pname);
        if (!p) throw net_error("unknown place name: " + pname);
        add_pre(t, *p, w);
    }
    for (const auto& [pname, w] : post_arcs) {
        auto p = find_place(pname);
        if (!p) throw net_error("unknown place name: " + pname);
        add_post(t, *p, w);
    }
    return t;
}

std::optional<PlaceId> PetriNet::find_place(std::string_view place_name) const {
    auto it = place_index_.find(std::string(place_name));
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<TransitionId> PetriNet::find_transition(
    std::string_view transition_name) const {
    auto it = transition_index_.find(std::string(transition_name));
    if (it == transition_index_.end()) return std::nullopt;
    return it->second;
}

Marking PetriNet::initial_marking() const {
    return Marking{initial_tokens_};
}

bool enabled(const PetriNet& net, const Marking& m, TransitionId t) {
    if (t >= net.transition_count()) throw net_error("unknown transition id");
    if (m.size() != net.place_count())
        throw net_error("marking does not conform to net");
    for (const Arc& a : net.pre(t))
        if (m.tokens[a.place] < a.weight) return false;
    return true;
}

Marking fire(const PetriNet& net, const Marking& m, TransitionId t) {
    if (!enabled(net, m, t))
        throw net_error("firing disabled transition: " +
                        net.transition_name(t));
    Marking out = m;
    for (const Arc& a : net.pre(t)) out.tokens[a.place] -= a.weight;
    for (const Arc& a : net.post(t)) {
        TokenCount& cell = out.tokens[a.place];
        if (cell + a.weight < cell)
            throw net_error("token overflow in place " +
                            net.place_name(a.place));
        cell += a.weight;
    }
    return out;
}

std::vector<std::pair<TransitionId, Marking>> successors(const PetriNet& net,
                                                         const Marking& m) {
    std::vector<std::pair<TransitionId, Marking>> out;
    for (TransitionId t = 0; t < net.transition_count(); ++t)
        if (enabled(net, m, t)) out.emplace_back(t, fire(net, m, t));
    return out;
}

std::vector<std::string> validate(const PetriNet& net) {
    std::vector<std::string> problems;
    // Name uniqueness is enforced at build time through the index maps, but
    // re-check here so hand-assembled nets get diagnosed too.
    {
        std::vector<std::string> names;
        for (PlaceId p = 0; p < net.place_count(); ++p)
            names.push_back(net.place_name(p));
        std::sort(names.begin(), names.end());
        for (std::size_t i = 1; i < names.size(); ++i)
            if (names[i] == names[i - 1])
                problems.push_back("duplicate place name: " + names[i]);
        names.clear();
        for (TransitionId t = 0; t < net.transition_count(); ++t)
            names.push_back(net.transition_name(t));
        std::sort(names.begin(), names.end());
        for (std::size_t i = 1; i < names.size(); ++i)
            if (names[i] == names[i - 1])
                problems.push_back("duplicate transition name: " + names[i]);
    }
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        for (const Arc& a : net.pre(t)) {
            if (a.place >= net.place_count())
                problems.push_back("transition " + net.transition_name(t) +
                                   ": input arc references unknown place id");
            if (a.weight == 0)
                problems.push_back("transition " + net.transition_name(t) +
                                   ": input arc weight 0");
        }
        for (const Arc& a : net.post(t)) {
            if (a.place >= net.place_count())
                problems.push_back("transition " + net.transition_name(t) +
                                   ": output arc references unknown place id");
            if (a.weight == 0)
                problems.push_back("transition " + net.transition_name(t) +
                                   ": output arc weight 0");
        }
    }
    return problems;
}

}  // namespace petribench

#include "soata/paths.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace soata {

bool operator<(const AttackPath& a, const AttackPath& b) {
    return std::tie(a.intruder, a.entry, a.elements, a.affected_topic, a.steps, a.asset_topic) <
           std::tie(b.intruder, b.entry, b.elements, b.affected_topic, b.steps, b.asset_topic);
}

void canonicalize(std::vector<AttackPath>& paths) {
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
}

PortOwners::PortOwners(const FactBase& facts) {
    for (const auto& a : facts) {
        switch (a.predicate) {
        case Predicate::public_:
            public_ports_.insert(a.args[1]);
            [[fallthrough]];
        case Predicate::ecui:
        case Predicate::ecuo:
        case Predicate::neti:
        case Predicate::neto:
        case Predicate::cpi:
        case Predicate::cpo:
            owner_[a.args[1]] = a.args[0];
            break;
        default:
            break;
        }
    }
}

const ElementId& PortOwners::owner(const ElementId& port) const {
    static const ElementId none;
    auto it = owner_.find(port);
    return it == owner_.end() ? none : it->second;
}

std::vector<ElementId> project_elements(std::span<const ElementId> steps, const PortOwners& owners) {
    std::vector<ElementId> out;
    for (const auto& port : steps) {
        const auto& el = owners.owner(port);
        if (out.empty() || out.back() != el) {
            out.push_back(el);
        }
    }
    return out;
}

InfluenceRelation::InfluenceRelation(const FactBase& facts) {
    std::map<ElementId, std::set<ElementId>> subs_of; // component -> subscribed topics
    std::map<ElementId, std::set<ElementId>> pubs_of;
    std::set<ElementId> topics;
    for (const auto& a : facts) {
        if (a.predicate == Predicate::sub) {
            subs_of[a.args[0]].insert(a.args[2]);
            topics.insert(a.args[2]);
        } else if (a.predicate == Predicate::pub) {
            pubs_of[a.args[0]].insert(a.args[2]);
            topics.insert(a.args[2]);
        } else if (a.predicate == Predicate::pro || a.predicate == Predicate::flow) {
            topics.insert(a.args.back());
        }
    }
    std::map<ElementId, std::set<ElementId>> step;
    for (const auto& [comp, ins] : subs_of) {
        auto it = pubs_of.find(comp);
        if (it == pubs_of.end()) {
            continue;
        }
        for (const auto& t1 : ins) {
            step[t1].insert(it->second.begin(), it->second.end());
        }
    }
    // BFS from every topic.
    for (const auto& t : topics) {
        std::set<ElementId> seen{t};
        std::deque<ElementId> queue{t};
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& nxt : step[cur]) {
                if (seen.insert(nxt).second) {
                    queue.push_back(nxt);
                }
            }
        }
        for (const auto& s : seen) {
            closure_.emplace(t, s);
        }
    }
}

bool InfluenceRelation::influences(const ElementId& from, const ElementId& to) const {
    return from == to || closure_.contains({from, to});
}

// ---------------------------------------------------------------- outsider

namespace {

// Predecessors in the flow graph: u -> v when wrt(u, v) or rd(v, u).
std::map<ElementId, std::vector<ElementId>> flow_predecessors(const FlowSet& flows, const std::set<ElementId>& reached) {
    std::map<ElementId, std::set<ElementId>> preds;
    for (const auto& a : flows.atoms()) {
        const auto& [from, to] = a.judgment == Judgment::wrt ? std::tie(a.args[0], a.args[1])
                                                              : std::tie(a.args[1], a.args[0]);
        if (reached.contains(from) && reached.contains(to)) {
            preds[to].insert(from);
        }
    }
    std::map<ElementId, std::vector<ElementId>> out;
    for (auto& [k, v] : preds) {
        out[k] = {v.begin(), v.end()};
    }
    return out;
}

class BackwardSearch {
public:
    BackwardSearch(const std::map<ElementId, std::vector<ElementId>>& preds, const PortOwners& owners)
        : preds_(preds), owners_(owners) {}

    // Every simple path from a public port to `target`, in forward order.
    std::vector<std::vector<ElementId>> paths_to(const ElementId& target) {
        found_.clear();
        stack_.assign(1, target);
        on_stack_ = {target};
        visit(target);
        return std::move(found_);
    }

private:
    void visit(const ElementId& port) {
        if (owners_.is_public(port)) {
            found_.emplace_back(stack_.rbegin(), stack_.rend());
        }
        auto it = preds_.find(port);
        if (it == preds_.end()) {
            return;
        }
        for (const auto& prev : it->second) {
            if (!on_stack_.insert(prev).second) {
                continue;
            }
            stack_.push_back(prev);
            visit(prev);
            stack_.pop_back();
            on_stack_.erase(prev);
        }
    }

    const std::map<ElementId, std::vector<ElementId>>& preds_;
    const PortOwners& owners_;
    std::vector<ElementId> stack_;
    std::set<ElementId> on_stack_;
    std::vector<std::vector<ElementId>> found_;
};

std::vector<ElementId> sorted_unique(std::vector<ElementId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

std::vector<AttackPath> enumerate_outsider_paths(const FactBase& facts, const ReachSet& reach,
                                                 const std::vector<ElementId>& asset_topics) {
    const auto assets = sorted_unique(asset_topics);
    const auto reached = reach.firsts(Judgment::reach, Intruder::outsider);
    const InfluenceRelation influence(facts);
    const PortOwners owners(facts);

    // Goal filter first: only if-ports whose topic reaches an asset are searched.
    std::map<ElementId, std::vector<std::pair<ElementId, ElementId>>> goals; // port -> (tp, asset)
    for (const auto& f : facts) {
        if (f.predicate != Predicate::flow || !reached.contains(f.args[1])) {
            continue;
        }
        for (const auto& a : assets) {
            if (influence.influences(f.args[2], a)) {
                goals[f.args[1]].emplace_back(f.args[2], a);
            }
        }
    }
    if (goals.empty()) {
        return {};
    }

    const auto preds = flow_predecessors(derive_flows(facts), reached);
    BackwardSearch search(preds, owners);
    std::vector<AttackPath> out;
    for (const auto& [port, targets] : goals) {
        for (auto& steps : search.paths_to(port)) {
            auto elements = project_elements(steps, owners);
            for (const auto& [tp, asset] : targets) {
                out.push_back(AttackPath{Intruder::outsider, elements.front(), steps, elements, tp, asset});
            }
        }
    }
    canonicalize(out);
    return out;
}

// ----------------------------------------------------------------- insider

namespace {

class ComponentChains {
public:
    explicit ComponentChains(const FactBase& facts) {
        std::map<ElementId, std::set<ElementId>> subscribers; // topic -> components
        for (const auto& a : facts) {
            if (a.predicate == Predicate::sub) {
                subscribers[a.args[2]].insert(a.args[0]);
            } else if (a.predicate == Predicate::pub) {
                publishers_[a.args[2]].insert(a.args[0]);
                published_[a.args[0]].insert(a.args[2]);
            }
        }
        for (const auto& [comp, topics] : published_) {
            for (const auto& t : topics) {
                auto it = subscribers.find(t);
                if (it != subscribers.end()) {
                    next_[comp].insert(it->second.begin(), it->second.end());
                }
            }
        }
        for (const auto& [from, tos] : next_) {
            for (const auto& to : tos) {
                prev_[to].insert(from);
            }
        }
    }

    // Shortest chain from `start` to any publisher of `asset`, least
    // lexicographically among equals; empty when none exists.
    std::vector<ElementId> chain(const ElementId& start, const ElementId& asset) {
        const auto& dist = distances(asset);
        auto it = dist.find(start);
        if (it == dist.end()) {
            return {};
        }
        std::vector<ElementId> out{start};
        std::size_t d = it->second;
        while (d > 0) {
            const auto& cur = out.back();
            for (const auto& n : next_[cur]) { // std::set: ascending
                auto dn = dist.find(n);
                if (dn != dist.end() && dn->second + 1 == d) {
                    out.push_back(n);
                    break;
                }
            }
            --d;
        }
        return out;
    }

private:
    const std::map<ElementId, std::size_t>& distances(const ElementId& asset) {
        auto [it, fresh] = dist_cache_.try_emplace(asset);
        if (!fresh) {
            return it->second;
        }
        auto& dist = it->second;
        std::deque<ElementId> queue;
        for (const auto& p : publishers_[asset]) {
            dist[p] = 0;
            queue.push_back(p);
        }
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& p : prev_[cur]) {
                if (!dist.contains(p)) {
                    dist[p] = dist[cur] + 1;
                    queue.push_back(p);
                }
            }
        }
        return dist;
    }

    std::map<ElementId, std::set<ElementId>> publishers_;
    std::map<ElementId, std::set<ElementId>> published_;
    std::map<ElementId, std::set<ElementId>> next_;
    std::map<ElementId, std::set<ElementId>> prev_;
    std::map<ElementId, std::map<ElementId, std::size_t>> dist_cache_;
};

} // namespace

std::vector<AttackPath> enumerate_insider_paths(const FactBase& facts, const ReachSet& reach,
                                                const std::vector<ElementId>& asset_topics) {
    const auto assets = sorted_unique(asset_topics);
    const ReachSet insider_reach = reach.restrict(Intruder::insider);
    const auto reached = insider_reach.firsts(Judgment::reach);
    const auto attacked = compute_attacks(facts, insider_reach, Intruder::insider).firsts(Judgment::attack);
    if (attacked.empty() || assets.empty()) {
        return {};
    }
    const InfluenceRelation influence(facts);
    ComponentChains chains(facts);

    // (publisher comp, subscriber comp, topic) -> least (co, ci) with both reached.
    std::map<std::tuple<ElementId, ElementId, ElementId>, std::pair<ElementId, ElementId>> pairs;
    std::map<ElementId, std::vector<std::pair<ElementId, ElementId>>> pubs; // topic -> (comp, port)
    for (const auto& a : facts) {
        if (a.predicate == Predicate::pub && attacked.contains(a.args[2]) && reached.contains(a.args[1])) {
            pubs[a.args[2]].emplace_back(a.args[0], a.args[1]);
        }
    }
    for (const auto& a : facts) {
        if (a.predicate != Predicate::sub || !reached.contains(a.args[1])) {
            continue;
        }
        const auto& tp = a.args[2];
        auto it = pubs.find(tp);
        if (it == pubs.end()) {
            continue;
        }
        for (const auto& [comp, co] : it->second) {
            auto key = std::make_tuple(comp, a.args[0], tp);
            auto candidate = std::make_pair(co, a.args[1]);
            auto [slot, fresh] = pairs.try_emplace(key, candidate);
            if (!fresh && candidate < slot->second) {
                slot->second = candidate;
            }
        }
    }

    std::vector<AttackPath> out;
    for (const auto& [key, ports] : pairs) {
        const auto& [pub_comp, sub_comp, tp] = key;
        for (const auto& asset : assets) {
            if (!influence.influences(tp, asset)) {
                continue;
            }
            std::vector<ElementId> chain = tp == asset ? std::vector<ElementId>{sub_comp} : chains.chain(sub_comp, asset);
            if (chain.empty()) {
                continue; // this subscriber's outputs never reach the asset topic
            }
            std::vector<ElementId> elements{pub_comp};
            for (const auto& c : chain) {
                if (elements.back() != c) {
                    elements.push_back(c);
                }
            }
            out.push_back(AttackPath{Intruder::insider, pub_comp, {ports.first, ports.second}, std::move(elements), tp,
                                     asset});
        }
    }
    canonicalize(out);
    return out;
}

std::vector<AttackPath> enumerate_paths(const FactBase& facts, Profile profile,
                                        const std::vector<ElementId>& asset_topics) {
    std::vector<AttackPath> out;
    for (auto i : intruders_of(profile)) {
        auto reach = compute_reach(facts, i);
        auto part = i == Intruder::outsider ? enumerate_outsider_paths(facts, reach, asset_topics)
                                            : enumerate_insider_paths(facts, reach, asset_topics);
        out.insert(out.end(), part.begin(), part.end());
    }
    canonicalize(out);
    return out;
}

std::string replay_path(const AttackPath& path, const FlowSet& flows, const ReachSet& reach,
                        const PortOwners& owners) {
    if (path.steps.empty()) {
        return "empty path";
    }
    std::set<ElementId> seen;
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
        const auto& p = path.steps[i];
        if (!seen.insert(p).second) {
            return "port " + p + " repeated";
        }
        if (!reach.contains(Judgment::reach, {p}, path.intruder)) {
            return "port " + p + " not reached";
        }
        if (i > 0) {
            const auto& prev = path.steps[i - 1];
            if (!flows.contains(Judgment::wrt, {prev, p}) && !flows.contains(Judgment::rd, {p, prev})) {
                return "no flow atom connects " + prev + " to " + p;
            }
        }
    }
    const auto& first = path.steps.front();
    if (path.intruder == Intruder::outsider && !owners.is_public(first)) {
        return "outsider path does not start at a public port";
    }
    if (owners.owner(first) != path.entry) {
        return "entry does not own the first port";
    }
    auto projected = project_elements(path.steps, owners);
    if (!std::equal(projected.begin(), projected.end(), path.elements.begin(),
                    path.elements.begin() + static_cast<std::ptrdiff_t>(std::min(projected.size(), path.elements.size()))) ||
        projected.size() > path.elements.size()) {
        return "element list does not extend the port projection";
    }
    return {};
}

} // namespace soata

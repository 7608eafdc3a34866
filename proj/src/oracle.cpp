#include "soata/oracle.hpp"

#include "soata/error.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace soata::oracle {

namespace {

using Pairs = std::set<std::pair<std::string, std::string>>;

bool has(const FactBase& facts, Predicate p, std::size_t col, const std::string& v) {
    for (const auto& a : facts) {
        if (a.predicate == p && a.args[col] == v) {
            return true;
        }
    }
    return false;
}

bool has2(const FactBase& facts, Predicate p, const std::string& a0, const std::string& a1) {
    for (const auto& a : facts) {
        if (a.predicate == p && a.args[0] == a0 && a.args[1] == a1) {
            return true;
        }
    }
    return false;
}

std::string owner_of(const FactBase& facts, const std::string& port, Predicate p) {
    for (const auto& a : facts) {
        if (a.predicate == p && a.args[1] == port) {
            return a.args[0];
        }
    }
    return {};
}

bool allocated_to(const FactBase& facts, Predicate comp_port, const std::string& platform_port) {
    for (const auto& al : facts) {
        if (al.predicate == Predicate::alloc && al.args[1] == platform_port && has(facts, comp_port, 1, al.args[0])) {
            return true;
        }
    }
    return false;
}

} // namespace

Pairs naive_wrt(const FactBase& facts) {
    Pairs out;
    for (const auto& c : facts) {
        if (c.predicate != Predicate::ch) {
            continue;
        }
        const auto& x = c.args[0];
        const auto& y = c.args[1];
        // write1
        if (has(facts, Predicate::ecuo, 1, x) && has(facts, Predicate::neti, 1, y) &&
            allocated_to(facts, Predicate::cpo, x)) {
            out.emplace(x, y);
        }
        // write2
        auto e = owner_of(facts, x, Predicate::ecui);
        if (!e.empty() && has2(facts, Predicate::ecuo, e, y)) {
            out.emplace(x, y);
        }
        // write3
        auto n = owner_of(facts, x, Predicate::neti);
        if (!n.empty() && has2(facts, Predicate::neto, n, y)) {
            out.emplace(x, y);
        }
        // write4
        if (has(facts, Predicate::public_, 1, x) && has(facts, Predicate::neti, 1, y)) {
            out.emplace(x, y);
        }
    }
    return out;
}

Pairs naive_rd(const FactBase& facts) {
    Pairs out;
    // read1
    for (const auto& s : facts) {
        if (s.predicate != Predicate::sub) {
            continue;
        }
        for (const auto& p : facts) {
            if (p.predicate == Predicate::pub && p.args[2] == s.args[2]) {
                out.emplace(s.args[1], p.args[1]);
            }
        }
    }
    // read2
    for (const auto& c : facts) {
        if (c.predicate != Predicate::ch) {
            continue;
        }
        const auto& no = c.args[0];
        const auto& ei = c.args[1];
        if (has(facts, Predicate::neto, 1, no) && has(facts, Predicate::ecui, 1, ei) &&
            allocated_to(facts, Predicate::cpi, ei)) {
            out.emplace(ei, no);
        }
    }
    return out;
}

std::set<std::string> naive_reach(const FactBase& facts, Intruder intruder) {
    std::set<std::string> reach;
    if (intruder == Intruder::outsider) {
        for (const auto& a : facts) {
            if (a.predicate == Predicate::public_) {
                reach.insert(a.args[1]);
            }
        }
        const auto wrt = naive_wrt(facts);
        const auto rd = naive_rd(facts);
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& [p1, p2] : wrt) {
                if (reach.contains(p1) && reach.insert(p2).second) {
                    changed = true;
                }
            }
            for (const auto& [p2, p1] : rd) {
                if (reach.contains(p1) && reach.insert(p2).second) {
                    changed = true;
                }
            }
        }
        return reach;
    }

    for (const auto& a : facts) {
        if (a.predicate == Predicate::pub) {
            reach.insert(a.args[1]);
        }
    }
    const auto rd = naive_rd(facts);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : facts) {
            if (p.predicate != Predicate::pub || !reach.contains(p.args[1])) {
                continue;
            }
            for (const auto& s : facts) {
                if (s.predicate != Predicate::sub || s.args[0] != p.args[0]) {
                    continue;
                }
                for (const auto& p1 : facts) {
                    if (p1.predicate == Predicate::pub && p1.args[2] == s.args[2] &&
                        rd.contains({s.args[1], p1.args[1]}) && reach.insert(s.args[1]).second) {
                        changed = true;
                    }
                }
            }
        }
    }
    return reach;
}

std::set<std::string> naive_attacks(const FactBase& facts, Intruder intruder) {
    const auto reach = naive_reach(facts, intruder);
    std::set<std::string> out;
    if (intruder == Intruder::outsider) {
        for (const auto& f : facts) {
            if (f.predicate == Predicate::flow && reach.contains(f.args[1])) {
                out.insert(f.args[2]);
            }
        }
        return out;
    }
    for (const auto& s : facts) {
        if (s.predicate != Predicate::sub || !reach.contains(s.args[1]) ||
            facts.contains(Atom{Predicate::pro, {s.args[2]}})) {
            continue;
        }
        for (const auto& p : facts) {
            if (p.predicate == Predicate::pub && p.args[2] == s.args[2] && reach.contains(p.args[1])) {
                out.insert(s.args[2]);
            }
        }
    }
    return out;
}

Pairs naive_influence(const FactBase& facts) {
    std::set<std::string> topics;
    for (const auto& a : facts) {
        if (a.predicate == Predicate::pub || a.predicate == Predicate::sub || a.predicate == Predicate::flow ||
            a.predicate == Predicate::pro) {
            topics.insert(a.args.back());
        }
    }
    Pairs rel;
    for (const auto& t : topics) {
        rel.emplace(t, t);
    }
    for (const auto& s : facts) {
        if (s.predicate != Predicate::sub) {
            continue;
        }
        for (const auto& p : facts) {
            if (p.predicate == Predicate::pub && p.args[0] == s.args[0]) {
                rel.emplace(s.args[2], p.args[2]);
            }
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        Pairs next = rel;
        for (const auto& [a, b] : rel) {
            for (const auto& [c, d] : rel) {
                if (b == c && next.emplace(a, d).second) {
                    changed = true;
                }
            }
        }
        rel = std::move(next);
    }
    return rel;
}

namespace {

class Budget {
public:
    explicit Budget(std::size_t limit) : limit_(limit) {}
    void spend() {
        if (++used_ > limit_) {
            throw ResourceError("oracle node budget of " + std::to_string(limit_) + " exceeded");
        }
    }

private:
    std::size_t limit_;
    std::size_t used_ = 0;
};

struct Outsider {
    const FactBase& facts;
    const Pairs& wrt;
    const Pairs& rd;
    const Pairs& influence;
    const std::vector<std::string>& assets;
    Budget& budget;
    std::vector<AttackPath>& out;
    std::vector<std::string> stack;

    std::string owner(const std::string& port) const {
        for (auto p : {Predicate::public_, Predicate::ecui, Predicate::ecuo, Predicate::neti, Predicate::neto,
                       Predicate::cpi, Predicate::cpo}) {
            auto o = owner_of(facts, port, p);
            if (!o.empty()) {
                return o;
            }
        }
        return {};
    }

    void record(const std::string& port) {
        for (const auto& f : facts) {
            if (f.predicate != Predicate::flow || f.args[1] != port) {
                continue;
            }
            for (const auto& asset : assets) {
                if (!influence.contains({f.args[2], asset})) {
                    continue;
                }
                AttackPath path;
                path.intruder = Intruder::outsider;
                path.steps = stack;
                for (const auto& s : stack) {
                    auto o = owner(s);
                    if (path.elements.empty() || path.elements.back() != o) {
                        path.elements.push_back(o);
                    }
                }
                path.entry = path.elements.front();
                path.affected_topic = f.args[2];
                path.asset_topic = asset;
                out.push_back(std::move(path));
            }
        }
    }

    void walk() {
        budget.spend();
        const auto cur = stack.back();
        record(cur);
        std::vector<std::string> next;
        for (const auto& [u, v] : wrt) {
            if (u == cur) {
                next.push_back(v);
            }
        }
        for (const auto& [v, u] : rd) {
            if (u == cur) {
                next.push_back(v);
            }
        }
        for (const auto& n : next) {
            if (std::find(stack.begin(), stack.end(), n) != stack.end()) {
                continue;
            }
            stack.push_back(n);
            walk();
            stack.pop_back();
        }
    }
};

// Best (shortest, then least) simple component chain from `from` ending at a
// publisher of `asset`.
struct ChainSearch {
    const FactBase& facts;
    const std::string& asset;
    Budget& budget;
    std::vector<std::string> stack;
    std::vector<std::string> best;

    bool publishes(const std::string& comp, const std::string& topic) const {
        for (const auto& a : facts) {
            if (a.predicate == Predicate::pub && a.args[0] == comp && a.args[2] == topic) {
                return true;
            }
        }
        return false;
    }

    void walk() {
        budget.spend();
        if (!best.empty() && stack.size() > best.size()) {
            return;
        }
        const auto cur = stack.back();
        if (publishes(cur, asset)) {
            if (best.empty() || stack.size() < best.size() || (stack.size() == best.size() && stack < best)) {
                best = stack;
            }
            return;
        }
        std::set<std::string> next;
        for (const auto& p : facts) {
            if (p.predicate != Predicate::pub || p.args[0] != cur) {
                continue;
            }
            for (const auto& s : facts) {
                if (s.predicate == Predicate::sub && s.args[2] == p.args[2]) {
                    next.insert(s.args[0]);
                }
            }
        }
        for (const auto& n : next) {
            if (std::find(stack.begin(), stack.end(), n) != stack.end()) {
                continue;
            }
            stack.push_back(n);
            walk();
            stack.pop_back();
        }
    }
};

} // namespace

std::vector<AttackPath> naive_paths(const FactBase& facts, Profile profile, const std::vector<std::string>& asset_topics,
                                    Options options) {
    std::vector<std::string> assets = asset_topics;
    std::sort(assets.begin(), assets.end());
    assets.erase(std::unique(assets.begin(), assets.end()), assets.end());
    const auto influence = naive_influence(facts);
    Budget budget(options.node_budget);
    std::vector<AttackPath> out;

    for (auto intruder : intruders_of(profile)) {
        if (intruder == Intruder::outsider) {
            const auto wrt = naive_wrt(facts);
            const auto rd = naive_rd(facts);
            Outsider search{facts, wrt, rd, influence, assets, budget, out, {}};
            for (const auto& a : facts) {
                if (a.predicate == Predicate::public_) {
                    search.stack = {a.args[1]};
                    search.walk();
                }
            }
            continue;
        }

        const auto reach = naive_reach(facts, intruder);
        const auto attacks = naive_attacks(facts, intruder);
        std::map<std::tuple<std::string, std::string, std::string>, std::pair<std::string, std::string>> pairs;
        for (const auto& p : facts) {
            if (p.predicate != Predicate::pub || !attacks.contains(p.args[2]) || !reach.contains(p.args[1])) {
                continue;
            }
            for (const auto& s : facts) {
                if (s.predicate != Predicate::sub || s.args[2] != p.args[2] || !reach.contains(s.args[1])) {
                    continue;
                }
                auto key = std::make_tuple(p.args[0], s.args[0], p.args[2]);
                auto ports = std::make_pair(p.args[1], s.args[1]);
                auto it = pairs.find(key);
                if (it == pairs.end() || ports < it->second) {
                    pairs[key] = ports;
                }
            }
        }
        for (const auto& [key, ports] : pairs) {
            const auto& [pc, sc, tp] = key;
            for (const auto& asset : assets) {
                if (!influence.contains({tp, asset})) {
                    continue;
                }
                std::vector<std::string> chain;
                if (tp == asset) {
                    chain = {sc};
                } else {
                    ChainSearch search{facts, asset, budget, {sc}, {}};
                    search.walk();
                    chain = search.best;
                }
                if (chain.empty()) {
                    continue;
                }
                AttackPath path{Intruder::insider, pc, {ports.first, ports.second}, {pc}, tp, asset};
                for (const auto& c : chain) {
                    if (path.elements.back() != c) {
                        path.elements.push_back(c);
                    }
                }
                out.push_back(std::move(path));
            }
        }
    }
    canonicalize(out);
    return out;
}

} // namespace soata::oracle

#include "support.hpp"

#include <algorithm>
#include <set>

namespace soata::test {

std::string fixture_path(const std::string& name) {
    return std::string(SOATA_FIXTURE_DIR) + "/" + name;
}

namespace {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t between(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[between(0, v.size() - 1)];
    }

private:
    std::mt19937_64 rng_;
};

std::vector<Channel> candidate_channels(const SystemModel& m) {
    std::vector<Channel> out;
    std::vector<ElementId> net_in;
    for (const auto& n : m.networks) {
        net_in.insert(net_in.end(), n.in_ports.begin(), n.in_ports.end());
        for (const auto& i : n.in_ports) {
            for (const auto& o : n.out_ports) {
                out.push_back({i, o});
            }
        }
    }
    for (const auto& p : m.publics) {
        for (const auto& o : p.out_ports) {
            for (const auto& i : net_in) {
                out.push_back({o, i});
            }
        }
    }
    for (const auto& e : m.ecus) {
        for (const auto& o : e.out_ports) {
            for (const auto& i : net_in) {
                out.push_back({o, i});
            }
        }
        for (const auto& i : e.in_ports) {
            for (const auto& o : e.out_ports) {
                out.push_back({i, o});
            }
        }
    }
    for (const auto& n : m.networks) {
        for (const auto& o : n.out_ports) {
            for (const auto& e : m.ecus) {
                for (const auto& i : e.in_ports) {
                    out.push_back({o, i});
                }
            }
        }
    }
    return out;
}

} // namespace

SystemModel random_model(std::uint64_t seed, const RandomModelShape& shape) {
    Gen g(seed);
    SystemModel m;
    std::size_t budget = shape.max_ports;
    auto take = [&](std::size_t want) {
        want = std::min(want, budget);
        budget -= want;
        return want;
    };

    const std::size_t topics = g.between(2, 7);
    for (std::size_t t = 0; t < topics; ++t) {
        m.topics.push_back({"t" + std::to_string(t), g.chance(shape.protect_probability)});
    }
    auto port_list = [&](const std::string& prefix, std::size_t n) {
        std::vector<ElementId> v;
        for (std::size_t k = 0, count = take(n); k < count; ++k) {
            v.push_back(prefix + std::to_string(k));
        }
        return v;
    };
    for (std::size_t e = 0, n = g.between(1, 4); e < n; ++e) {
        const auto id = "E" + std::to_string(e);
        m.ecus.push_back({id, port_list(id + ".i", g.between(1, 3)), port_list(id + ".o", g.between(1, 3))});
    }
    for (std::size_t k = 0, n = g.between(1, 3); k < n; ++k) {
        const auto id = "N" + std::to_string(k);
        m.networks.push_back({id, port_list(id + ".i", g.between(1, 3)), port_list(id + ".o", g.between(1, 3))});
    }
    for (std::size_t k = 0, n = g.between(0, 3); k < n; ++k) {
        const auto id = "P" + std::to_string(k);
        auto outs = port_list(id + ".o", g.between(1, 2));
        if (!outs.empty()) {
            m.publics.push_back({id, outs});
        }
    }
    for (std::size_t c = 0, n = g.between(2, 8); c < n; ++c) {
        LogicalComponent comp{"C" + std::to_string(c), {}, {}};
        for (std::size_t k = 0, np = take(g.between(0, 2)); k < np; ++k) {
            comp.pub_ports.push_back({comp.id + ".pub" + std::to_string(k), g.pick(m.topics).id});
        }
        for (std::size_t k = 0, ns = take(g.between(0, 3)); k < ns; ++k) {
            comp.sub_ports.push_back({comp.id + ".sub" + std::to_string(k), g.pick(m.topics).id});
        }
        // One host ECU per component, possibly none.
        if (g.chance(0.8)) {
            const auto& host = g.pick(m.ecus);
            for (const auto& b : comp.pub_ports) {
                if (!host.out_ports.empty() && g.chance(0.8)) {
                    m.allocations.push_back({b.port, g.pick(host.out_ports)});
                }
            }
            for (const auto& b : comp.sub_ports) {
                if (!host.in_ports.empty() && g.chance(0.8)) {
                    m.allocations.push_back({b.port, g.pick(host.in_ports)});
                }
            }
        }
        m.components.push_back(std::move(comp));
    }
    for (const auto& c : candidate_channels(m)) {
        if (g.chance(shape.channel_density)) {
            m.channels.push_back(c);
        }
    }
    for (const auto& e : m.ecus) {
        for (const auto& i : e.in_ports) {
            for (const auto& t : m.topics) {
                if (g.chance(0.3)) {
                    m.information_flows.push_back({e.id, i, t.id});
                }
            }
        }
    }
    return m;
}

std::vector<Channel> missing_channels(const SystemModel& model) {
    std::set<Channel> have(model.channels.begin(), model.channels.end());
    std::vector<Channel> out;
    for (const auto& c : candidate_channels(model)) {
        if (!have.contains(c)) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<ElementId> all_topics(const SystemModel& model) {
    std::vector<ElementId> out;
    for (const auto& t : model.topics) {
        out.push_back(t.id);
    }
    return out;
}

std::size_t port_count(const SystemModel& m) {
    std::size_t n = 0;
    for (const auto& c : m.components) {
        n += c.pub_ports.size() + c.sub_ports.size();
    }
    for (const auto& e : m.ecus) {
        n += e.in_ports.size() + e.out_ports.size();
    }
    for (const auto& e : m.networks) {
        n += e.in_ports.size() + e.out_ports.size();
    }
    for (const auto& p : m.publics) {
        n += p.out_ports.size();
    }
    return n;
}

} // namespace soata::test

#include "soata/analysis.hpp"
#include "soata/oracle.hpp"
#include "soata/report.hpp"
#include "soata/tara.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace soata;

namespace {

constexpr std::uint64_t kModels = 60;

std::set<std::pair<std::string, std::string>> pairs_of(const FlowSet& flows, Judgment j) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& a : flows.atoms()) {
        if (a.judgment == j) {
            out.emplace(a.args[0], a.args[1]);
        }
    }
    return out;
}

// Random hazards and loss scenarios over the model's components and topics.
SafetyModel random_safety(const SystemModel& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    SafetyModel sm;
    for (std::size_t h = 0, n = 1 + pick(4); h < n; ++h) {
        auto s = static_cast<Severity>(pick(4));
        auto e = static_cast<Exposure>(pick(5));
        auto c = static_cast<Controllability>(pick(4));
        sm.hazards.push_back({"H" + std::to_string(h), "", s, e, c, compute_asil(s, e, c)});
    }
    for (std::size_t k = 0, n = 1 + pick(5); k < n; ++k) {
        LossScenario ls;
        ls.id = "L" + std::to_string(k);
        ls.hazard_ids = {sm.hazards[pick(sm.hazards.size())].id};
        ls.source = m.components[pick(m.components.size())].id;
        ls.target = m.components[pick(m.components.size())].id;
        ls.message = m.topics[pick(m.topics.size())].id;
        ls.failure_mode = static_cast<FailureMode>(pick(5));
        sm.loss_scenarios.push_back(ls);
    }
    return sm;
}

std::vector<AttackPath> without_topic(const std::vector<AttackPath>& paths, const ElementId& topic) {
    std::vector<AttackPath> out;
    for (const auto& p : paths) {
        if (!(p.intruder == Intruder::insider && p.affected_topic == topic)) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace

TEST_CASE("random models are valid and bounded") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        auto m = test::random_model(seed);
        CAPTURE(seed);
        CHECK(validate(m).empty());
        CHECK(test::port_count(m) <= 200);
    }
}

TEST_CASE("engine equals oracle on random models") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto facts = to_facts(m);
        auto flows = derive_flows(facts);
        CHECK(pairs_of(flows, Judgment::wrt) == oracle::naive_wrt(facts));
        CHECK(pairs_of(flows, Judgment::rd) == oracle::naive_rd(facts));
        for (auto i : {Intruder::outsider, Intruder::insider}) {
            auto reach = compute_reach(facts, i);
            CHECK(reach.firsts(Judgment::reach) == oracle::naive_reach(facts, i));
            CHECK(compute_attacks(facts, reach, i).firsts(Judgment::attack) == oracle::naive_attacks(facts, i));
        }
        auto topics = test::all_topics(m);
        for (auto p : {Profile::outsider, Profile::insider, Profile::both}) {
            CHECK(enumerate_paths(facts, p, topics) == oracle::naive_paths(facts, p, topics));
        }
        CHECK(InfluenceRelation(facts).pairs() == oracle::naive_influence(facts));
    }
}

TEST_CASE("self check finds no difference on random models") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto m = test::random_model(seed);
        CHECK(self_check(to_facts(m), Profile::both, test::all_topics(m)).empty());
    }
}

TEST_CASE("every derivation replays") {
    for (std::uint64_t seed = 0; seed < kModels; seed += 3) {
        CAPTURE(seed);
        auto facts = to_facts(test::random_model(seed));
        CHECK(verify_intruder_derivations(facts, Intruder::outsider).empty());
        CHECK(verify_intruder_derivations(facts, Intruder::insider).empty());
    }
}

TEST_CASE("insider reach is publisher ports plus subscriber ports of publishers") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        std::set<ElementId> published;
        for (const auto& c : m.components) {
            for (const auto& b : c.pub_ports) {
                published.insert(b.topic);
            }
        }
        std::set<std::string> expected;
        for (const auto& c : m.components) {
            for (const auto& b : c.pub_ports) {
                expected.insert(b.port);
            }
            if (c.pub_ports.empty()) {
                continue;
            }
            for (const auto& b : c.sub_ports) {
                if (published.contains(b.topic)) {
                    expected.insert(b.port);
                }
            }
        }
        CHECK(compute_reach(to_facts(m), Intruder::insider).firsts(Judgment::reach) == expected);
    }
}

TEST_CASE("every path replays hop by hop") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto facts = to_facts(m);
        auto flows = derive_flows(facts);
        auto reach = compute_reach(facts, Profile::both);
        PortOwners owners(facts);
        for (const auto& p : enumerate_paths(facts, Profile::both, test::all_topics(m))) {
            CHECK(replay_path(p, flows, reach, owners) == "");
            CHECK(InfluenceRelation(facts).influences(p.affected_topic, p.asset_topic));
        }
    }
}

TEST_CASE("json round trip preserves facts") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        auto m = test::random_model(seed);
        auto again = load_model(to_json(m).dump());
        CHECK(to_facts(again) == to_facts(m));
        CHECK(to_json(again).dump() == to_json(m).dump());
    }
}

TEST_CASE("ASIL is monotone in every class") {
    for (int s = 0; s < 4; ++s) {
        for (int e = 0; e < 5; ++e) {
            for (int c = 0; c < 4; ++c) {
                auto here = compute_asil(static_cast<Severity>(s), static_cast<Exposure>(e),
                                         static_cast<Controllability>(c));
                if (s < 3) {
                    CHECK(here <= compute_asil(static_cast<Severity>(s + 1), static_cast<Exposure>(e),
                                               static_cast<Controllability>(c)));
                }
                if (e < 4) {
                    CHECK(here <= compute_asil(static_cast<Severity>(s), static_cast<Exposure>(e + 1),
                                               static_cast<Controllability>(c)));
                }
                if (c < 3) {
                    CHECK(here <= compute_asil(static_cast<Severity>(s), static_cast<Exposure>(e),
                                               static_cast<Controllability>(c + 1)));
                }
            }
        }
    }
}

TEST_CASE("grouping partitions paths and prefixes are maximal") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto paths = enumerate_paths(to_facts(m), Profile::both, test::all_topics(m));
        auto groups = group_by_entry(paths);
        std::size_t total = 0;
        for (const auto& g : groups) {
            total += g.path_count;
            std::vector<const std::vector<ElementId>*> members;
            for (const auto& p : paths) {
                if (p.entry == g.entry) {
                    members.push_back(&p.elements);
                }
            }
            CHECK(members.size() == g.path_count);
            for (const auto* l : members) {
                REQUIRE(l->size() >= g.common_prefix.size());
                CHECK(std::equal(g.common_prefix.begin(), g.common_prefix.end(), l->begin()));
            }
            const auto n = g.common_prefix.size();
            bool longer = std::all_of(members.begin(), members.end(), [&](const auto* l) {
                return l->size() > n && (*l)[n] == (*members.front())[n];
            });
            CHECK_FALSE(longer);
            CHECK_FALSE(g.common_prefix.empty());
            CHECK(g.common_prefix.front() == g.entry);
        }
        CHECK(total == paths.size());

        std::size_t hinted = 0;
        std::set<ElementId> covered;
        for (const auto& h : placement_hints(groups)) {
            hinted += h.covered_path_count;
            for (const auto& e : h.covered_entries) {
                CHECK(covered.insert(e).second);
            }
        }
        CHECK(hinted == total);
        CHECK(covered.size() == groups.size());
    }
}

TEST_CASE("TARA invariants on random safety models") {
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto sm = random_safety(m, seed);
        auto tara = derive_tara(m, sm);

        std::set<std::string> ids;
        for (const auto& a : tara.assets) {
            CHECK(ids.insert(a.id).second);
            CHECK(a.id == asset_id(a.kind, a.referent, a.property));
            CHECK(std::is_sorted(a.trace.begin(), a.trace.end()));
        }
        for (const auto& t : tara.threats) {
            CHECK(ids.insert(t.id).second);
        }
        CHECK(tara.damages.size() == sm.hazards.size());

        auto paths = enumerate_paths(to_facts(m), Profile::both, asset_topics(sm));
        auto rows = check_traceability(m, sm, tara.assets, tara.damages, tara.threats, paths);
        REQUIRE(rows.size() == sm.loss_scenarios.size());
        for (const auto& row : rows) {
            // Function assets for both ends and a topic asset for the message.
            CHECK(row.asset_ids.size() >= 2);
            CHECK_FALSE(row.damage_ids.empty());
            CHECK_FALSE(row.threat_ids.empty());
            CHECK(row.gap == (row.attack_path_count == 0));
            CHECK(row.attack_path_count <= paths.size());
        }
    }
}

TEST_CASE("protecting a topic removes exactly its insider paths") {
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto topics = test::all_topics(m);
        auto before = enumerate_paths(to_facts(m), Profile::both, topics);
        auto& t = m.topics[rng() % m.topics.size()];
        t.is_protected = true;
        auto after = enumerate_paths(to_facts(m), Profile::both, topics);
        CHECK(after == without_topic(before, t.id));
    }
}

TEST_CASE("adding a channel never removes reach") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        CAPTURE(seed);
        auto m = test::random_model(seed);
        auto missing = test::missing_channels(m);
        if (missing.empty()) {
            continue;
        }
        auto before = compute_reach(to_facts(m), Profile::both);
        m.channels.push_back(missing[rng() % missing.size()]);
        REQUIRE(validate(m).empty());
        auto after = compute_reach(to_facts(m), Profile::both);
        for (auto i : {Intruder::outsider, Intruder::insider}) {
            auto b = before.firsts(Judgment::reach, i);
            auto a = after.firsts(Judgment::reach, i);
            CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
        }
    }
}

TEST_CASE("declared flows only add attacks when derived flows are unioned in") {
    for (std::uint64_t seed = 0; seed < kModels; seed += 2) {
        auto m = test::random_model(seed);
        auto declared = analysis_facts(m, false);
        auto derived = analysis_facts(m, true);
        CHECK(std::includes(derived.begin(), derived.end(), declared.begin(), declared.end()));
        auto reach_d = compute_reach(declared, Intruder::outsider);
        auto reach_u = compute_reach(derived, Intruder::outsider);
        auto a = compute_attacks(declared, reach_d, Intruder::outsider).firsts(Judgment::attack);
        auto b = compute_attacks(derived, reach_u, Intruder::outsider).firsts(Judgment::attack);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
}

#include "soata/analysis.hpp"
#include "soata/report.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace soata;

namespace {

using Ids = std::vector<ElementId>;

AttackPath outsider(const ElementId& entry, Ids elements, const ElementId& asset = "t") {
    return AttackPath{Intruder::outsider, entry, {}, std::move(elements), asset, asset};
}

const EntryGroup& group(const std::vector<EntryGroup>& gs, const ElementId& entry) {
    auto it = std::find_if(gs.begin(), gs.end(), [&](const EntryGroup& g) { return g.entry == entry; });
    REQUIRE(it != gs.end());
    return *it;
}

struct ApolloRun {
    SystemModel model = load_model_file(test::fixture_path("mini_apollo.model.json"));
    std::vector<AttackPath> outsider_paths =
        enumerate_paths(to_facts(model), Profile::outsider,
                        asset_topics(load_safety_file(test::fixture_path("mini_apollo.safety.json"), model)));
};

const ApolloRun& apollo() {
    static const ApolloRun r;
    return r;
}

} // namespace

TEST_CASE("common prefix basics") {
    Ids a{"Cam", "GMSL", "VIU 1", "SW1", "MDC"};
    Ids b{"Cam", "GMSL", "VIU 1", "SW2", "MCU"};
    Ids c{"Radar", "CAN"};
    CHECK(common_prefix({&a, &b}) == Ids{"Cam", "GMSL", "VIU 1"});
    CHECK(common_prefix({&a}) == a);
    CHECK(common_prefix({&a, &c}).empty());
    CHECK(common_prefix({}).empty());
    Ids shorter{"Cam", "GMSL"};
    CHECK(common_prefix({&a, &shorter}) == shorter);
}

TEST_CASE("grouping by entry") {
    std::vector<AttackPath> paths{
        outsider("Cam", {"Cam", "GMSL", "VIU 1", "SW1"}),
        outsider("Cam", {"Cam", "GMSL", "VIU 1", "SW2"}),
        outsider("GPS", {"GPS", "Serial", "VIU 3"}),
        outsider("Radar", {"Radar", "CAN", "MDC"}),
        outsider("Radar", {"Radar", "ETH", "MDC"}),
    };
    auto gs = group_by_entry(paths);
    REQUIRE(gs.size() == 3);
    CHECK(gs[0].entry == "Cam");
    CHECK(gs[0].path_count == 2);
    CHECK(gs[0].common_prefix == Ids{"Cam", "GMSL", "VIU 1"});
    // A single path is its own prefix.
    CHECK(gs[1].common_prefix == Ids{"GPS", "Serial", "VIU 3"});
    // Diverging at the first hop leaves only the entry.
    CHECK(gs[2].common_prefix == Ids{"Radar"});
}

TEST_CASE("hints merge groups that end at the same element") {
    std::vector<EntryGroup> gs{
        {"FRC", 35, {"FRC", "GMSL", "VIU 3"}},
        {"GPS", 36, {"GPS", "Serial", "VIU 3"}},
        {"LiDAR", 55, {"LiDAR", "SW4"}},
        {"Lone", 3, {}},
    };
    auto hints = placement_hints(gs);
    REQUIRE(hints.size() == 2);
    CHECK(hints[0].location == "VIU 3");
    CHECK(hints[0].covered_path_count == 71);
    CHECK(hints[0].incoming == Ids{"GMSL", "Serial"});
    CHECK(hints[0].covered_entries == Ids{"FRC", "GPS"});
    CHECK(hints[1].location == "SW4");
    CHECK(hints[1].incoming == Ids{"LiDAR"});
}

TEST_CASE("hint ties break by location") {
    std::vector<EntryGroup> gs{{"B", 5, {"B", "Y"}}, {"A", 5, {"A", "X"}}};
    auto hints = placement_hints(gs);
    REQUIRE(hints.size() == 2);
    CHECK(hints[0].location == "X");
    CHECK(hints[1].location == "Y");
}

TEST_CASE("empty inputs") {
    CHECK(group_by_entry({}).empty());
    CHECK(placement_hints({}).empty());
    auto s = summarize({});
    CHECK(s.total == 0);
    CHECK(s.per_entry.empty());
}

TEST_CASE("summary counts") {
    std::vector<AttackPath> paths{
        outsider("Cam", {"Cam", "GMSL"}, "a"),
        outsider("Cam", {"Cam", "GMSL"}, "b"),
        outsider("GPS", {"GPS"}, "a"),
        AttackPath{Intruder::insider, "routing", {"o1", "i1"}, {"routing", "planning"}, "r", "a"},
    };
    auto s = summarize(paths, {{"outsider", {1.5, 2.5}}});
    CHECK(s.total == 4);
    CHECK(s.outsider_count == 3);
    CHECK(s.insider_count == 1);
    CHECK(s.per_asset_topic.at("a") == 3);
    CHECK(s.per_entry.at("Cam") == 2);
    CHECK(s.outsider_routes == 2);
    CHECK(s.insider_routes == 1);
    CHECK(s.timings.at("outsider").paths_ms == 2.5);
    CHECK(paths_of(paths, Intruder::insider).size() == 1);
}

TEST_CASE("entry prefixes on the larger fixture") {
    auto gs = group_by_entry(apollo().outsider_paths);
    REQUIRE(gs.size() == 8);
    CHECK(group(gs, "Front Left Camera").common_prefix == Ids{"Front Left Camera", "GMSL", "VIU 1"});
    CHECK(group(gs, "Front Left Camera").path_count == 34);
    CHECK(group(gs, "Bluetooth").common_prefix == Ids{"Bluetooth", "USB", "CDC"});
    CHECK(group(gs, "LiDAR").common_prefix == Ids{"LiDAR", "SW4"});
    CHECK(group(gs, "T-Box").common_prefix == Ids{"T-Box", "SW3"});
    CHECK(group(gs, "Front Radar").common_prefix == Ids{"Front Radar", "CAN", "MDC"});

    auto hints = placement_hints(gs);
    REQUIRE_FALSE(hints.empty());
    CHECK(hints[0].location == "VIU 3");
    CHECK(hints[0].covered_path_count == 71);
    CHECK(hints[0].incoming == Ids{"GMSL", "Serial"});
}

TEST_CASE("prefix property on the larger fixture") {
    const auto& paths = apollo().outsider_paths;
    for (const auto& g : group_by_entry(paths)) {
        CAPTURE(g.entry);
        std::vector<const Ids*> members;
        for (const auto& p : paths) {
            if (p.entry == g.entry) {
                members.push_back(&p.elements);
                REQUIRE(p.elements.size() >= g.common_prefix.size());
                CHECK(std::equal(g.common_prefix.begin(), g.common_prefix.end(), p.elements.begin()));
            }
        }
        // No longer prefix is shared by all members.
        bool extends = true;
        for (const auto* m : members) {
            extends = extends && m->size() > g.common_prefix.size() &&
                      (*m)[g.common_prefix.size()] == (*members.front())[g.common_prefix.size()];
        }
        CHECK_FALSE(extends);
    }
}

TEST_CASE("analysis result groups outsider paths only by default") {
    auto model = load_model_file(test::fixture_path("mini_apollo.model.json"));
    auto safety = load_safety_file(test::fixture_path("mini_apollo.safety.json"), model);
    AnalyzeOptions opts;
    auto r = analyze(model, safety, opts);
    CHECK_FALSE(r.insider_grouped);
    CHECK(r.insider_groups.empty());
    std::size_t grouped = 0;
    for (const auto& g : r.outsider_groups) {
        grouped += g.path_count;
    }
    CHECK(grouped == r.summary.outsider_count);

    opts.group_insider = true;
    auto with = analyze(model, safety, opts);
    CHECK(with.insider_grouped);
    CHECK_FALSE(with.insider_groups.empty());
}

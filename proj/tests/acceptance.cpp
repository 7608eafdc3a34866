// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.

#include "cli.hpp"
#include "soata/oracle.hpp"
#include "soata/report.hpp"
#include "support.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace soata;
using test::fixture_path;

namespace {

using Clock = std::chrono::steady_clock;
using Ids = std::vector<ElementId>;
using StrSet = std::set<std::string>;

// Frozen at fixture creation from the oracle; re-checked against it below.
constexpr std::size_t kApolloOutsiderPaths = 275;
constexpr std::size_t kApolloInsiderPaths = 95;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream s;
    s.precision(1);
    s << std::fixed << ms << " ms";
    return s.str();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "soata");
    std::ostringstream out;
    std::ostringstream err;
    return cli::run(args, out, err);
}

Outcome ac1() {
    Outcome o;
    auto t0 = Clock::now();
    auto facts = to_facts(load_model_file(fixture_path("outsider_example.model.json")));
    auto reach = compute_reach(facts, Intruder::outsider);
    auto paths = enumerate_outsider_paths(facts, reach, {"cp1_out", "cp2_out"});
    double ms = ms_since(t0);

    auto got = reach.firsts(Judgment::reach);
    o.require(got == StrSet{"o1", "i1", "o2", "i2", "o3", "i4"}, "reach set differs");
    for (const char* p : {"i3", "o4", "i5", "o5"}) {
        o.require(!got.contains(p), std::string("reach contains ") + p);
    }
    o.require(paths.size() == 2, "expected two paths");
    for (const auto& p : paths) {
        o.require(p.entry == "Sensor" && p.steps == Ids{"o1", "i1", "o2", "i2"}, "unexpected path");
    }
    o.require(ms < 100.0, "runtime " + fmt_ms(ms));
    o.detail = o.pass ? "reach {o1,i1,o2,i2,o3,i4}, 2 Sensor paths, " + fmt_ms(ms) : o.detail;
    return o;
}

Outcome ac2() {
    Outcome o;
    auto facts = to_facts(load_model_file(fixture_path("insider_example.model.json")));
    auto reach = compute_reach(facts, Intruder::insider);
    auto got = reach.firsts(Judgment::reach);
    for (const char* p : {"o1", "o2", "o3", "o4", "o5", "o6", "i1", "i2", "i3", "i4", "i5", "i6", "i7"}) {
        o.require(got.contains(p), std::string("reach misses ") + p);
    }
    o.require(!got.contains("i8"), "reach contains i8");
    o.require(got.size() == 13, "reach has extra ports");
    auto attacks = compute_attacks(facts, reach, Intruder::insider).firsts(Judgment::attack);
    o.require(attacks == StrSet{"obstacles", "routing_response"}, "attack set differs");
    o.detail = o.pass ? "reach o1..o6, i1..i7; attacks {obstacles, routing_response}" : o.detail;
    return o;
}

Outcome ac3() {
    Outcome o;
    o.require(compute_asil(Severity::S3, Exposure::E4, Controllability::C3) == Asil::D, "S3/E4/C3 is not D");
    // Stored transcription of the risk graph: rows S1..S3, E1..E4; columns C1..C3.
    static const char* kRows[3][4] = {
        {"QQQ", "QQQ", "QQA", "QAB"},
        {"QQQ", "QQA", "QAB", "ABC"},
        {"QQA", "QAB", "ABC", "BCD"},
    };
    auto letter = [](char ch) {
        switch (ch) {
        case 'A': return Asil::A;
        case 'B': return Asil::B;
        case 'C': return Asil::C;
        case 'D': return Asil::D;
        default: return Asil::QM;
        }
    };
    int cells = 0;
    for (int s = 0; s < 4; ++s) {
        for (int e = 0; e < 5; ++e) {
            for (int c = 0; c < 4; ++c) {
                Asil want = (s == 0 || e == 0 || c == 0) ? Asil::QM : letter(kRows[s - 1][e - 1][c - 1]);
                Asil got = compute_asil(static_cast<Severity>(s), static_cast<Exposure>(e),
                                        static_cast<Controllability>(c));
                o.require(got == want, "cell S" + std::to_string(s) + "/E" + std::to_string(e) + "/C" +
                                           std::to_string(c) + " differs");
                ++cells;
            }
        }
    }
    o.require(cells == 80, "cell count");
    o.detail = o.pass ? "S3/E4/C3 = D; 80 of 80 cells match" : o.detail;
    return o;
}

Outcome ac4() {
    Outcome o;
    auto model = load_model_file(fixture_path("mini_apollo.model.json"));
    auto safety = load_safety_file(fixture_path("mini_apollo.safety.json"), model);
    auto tara = derive_tara(model, safety);

    std::multiset<std::string> assets;
    std::set<std::string> ls1_assets;
    for (const auto& a : tara.assets) {
        if (std::find(a.trace.begin(), a.trace.end(), "LS1") != a.trace.end()) {
            assets.insert(std::string(to_string(a.kind)) + ":" + a.referent + ":" + std::string(to_string(a.property)));
            ls1_assets.insert(a.id);
        }
    }
    o.require(assets == std::multiset<std::string>{"function:planning:integrity", "function:control:integrity",
                                                   "topic:trajectory:integrity", "hardware:MCU:integrity"},
              "LS1 assets differ");
    std::multiset<std::string> strides;
    for (const auto& t : tara.threats) {
        if (ls1_assets.contains(t.asset_id)) {
            strides.insert(std::string(to_string(t.stride)));
        }
    }
    o.require(strides == std::multiset<std::string>{"tampering", "tampering", "tampering", "spoofing", "elevation"},
              "LS1 threats differ");
    o.detail = o.pass ? "4 assets, threats tampering x3 + spoofing + elevation" : o.detail;
    return o;
}

Outcome ac5() {
    Outcome o;
    constexpr std::uint64_t kModels = 60;
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        auto m = test::random_model(seed);
        o.require(test::port_count(m) <= 200, "model exceeds 200 ports");
        auto facts = to_facts(m);
        auto topics = test::all_topics(m);
        for (auto i : {Intruder::outsider, Intruder::insider}) {
            o.require(compute_reach(facts, i).firsts(Judgment::reach) == oracle::naive_reach(facts, i),
                      "reach mismatch, seed " + std::to_string(seed));
        }
        for (auto p : {Profile::outsider, Profile::insider}) {
            auto engine = enumerate_paths(facts, p, topics);
            o.require(engine == oracle::naive_paths(facts, p, topics), "path mismatch, seed " + std::to_string(seed));
            compared += engine.size();
        }
    }
    o.detail = o.pass ? std::to_string(kModels) + " models, " + std::to_string(compared) + " paths, 0 mismatches"
                      : o.detail;
    return o;
}

Outcome ac6() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::size_t pro_checks = 0;
    std::size_t channel_checks = 0;
    std::size_t removed = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        auto m = test::random_model(1000 + k, {.max_ports = 80});
        auto topics = test::all_topics(m);
        if (k % 2 == 0) {
            auto before = enumerate_paths(to_facts(m), Profile::both, topics);
            auto& t = m.topics[rng() % m.topics.size()];
            t.is_protected = true;
            auto after = enumerate_paths(to_facts(m), Profile::both, topics);
            std::vector<AttackPath> expected;
            for (const auto& p : before) {
                if (!(p.intruder == Intruder::insider && p.affected_topic == t.id)) {
                    expected.push_back(p);
                }
            }
            o.require(after == expected, "pro mutation " + std::to_string(k));
            removed += before.size() - after.size();
            ++pro_checks;
        } else {
            auto missing = test::missing_channels(m);
            if (missing.empty()) {
                continue;
            }
            auto before = compute_reach(to_facts(m), Profile::both);
            m.channels.push_back(missing[rng() % missing.size()]);
            auto after = compute_reach(to_facts(m), Profile::both);
            for (const auto& a : before.atoms()) {
                o.require(after.contains(a.judgment, a.args, a.intruder), "channel mutation " + std::to_string(k));
            }
            ++channel_checks;
        }
    }
    o.require(removed > 0, "no pro mutation removed a path");
    o.detail = o.pass ? std::to_string(pro_checks) + " pro and " + std::to_string(channel_checks) +
                            " channel mutations hold; " +
                            std::to_string(removed) + " insider paths removed"
                      : o.detail;
    return o;
}

Outcome ac7() {
    Outcome o;
    auto model = load_model_file(fixture_path("mini_apollo.model.json"));
    auto safety = load_safety_file(fixture_path("mini_apollo.safety.json"), model);
    AnalyzeOptions opts;
    auto t0 = Clock::now();
    auto r = analyze(model, safety, opts);
    double ms = ms_since(t0);
    o.require(ms < 2000.0, "runtime " + fmt_ms(ms));
    o.require(r.summary.outsider_count == kApolloOutsiderPaths,
              "outsider count " + std::to_string(r.summary.outsider_count));
    o.require(r.summary.insider_count == kApolloInsiderPaths,
              "insider count " + std::to_string(r.summary.insider_count));
    auto naive = oracle::naive_paths(to_facts(model), Profile::both, r.asset_topics);
    o.require(naive == r.paths, "oracle disagrees with the engine");
    o.detail = o.pass ? "outsider 275, insider 95 (oracle agrees), " + fmt_ms(ms) : o.detail;
    return o;
}

Outcome ac8() {
    Outcome o;
    auto dir = std::filesystem::temp_directory_path() / "soata_acceptance";
    std::filesystem::create_directories(dir);
    std::vector<std::string> files{(dir / "a.json").string(), (dir / "b.json").string()};
    for (const auto& f : files) {
        o.require(cli({"analyze", "--model", fixture_path("mini_apollo.model.json"), "--safety",
                       fixture_path("mini_apollo.safety.json"), "--out", f, "--no-timings"}) == 0,
                  "analyze failed");
    }
    auto a = slurp(files[0]);
    o.require(!a.empty() && a == slurp(files[1]), "reports differ");
    o.detail = o.pass ? "two reports identical (" + std::to_string(a.size()) + " bytes)" : o.detail;
    return o;
}

Outcome ac9() {
    Outcome o;
    auto model = load_model_file(fixture_path("mini_apollo.model.json"));
    auto safety = load_safety_file(fixture_path("mini_apollo.safety.json"), model);
    auto r = analyze(model, safety, AnalyzeOptions{});
    o.require(r.trace.size() == safety.loss_scenarios.size(), "row count");
    for (const auto& row : r.trace) {
        o.require(!row.asset_ids.empty() && !row.damage_ids.empty() && !row.threat_ids.empty(),
                  "empty column in " + row.loss_scenario_id);
        if (row.loss_scenario_id == "LS_GAP") {
            o.require(row.gap && row.attack_path_count == 0, "LS_GAP not flagged");
        } else {
            o.require(!row.gap, row.loss_scenario_id + " flagged as gap");
        }
    }
    auto report = (std::filesystem::temp_directory_path() / "soata_acceptance" / "trace.json").string();
    std::filesystem::create_directories(std::filesystem::path(report).parent_path());
    o.require(cli({"analyze", "--model", fixture_path("mini_apollo.model.json"), "--safety",
                   fixture_path("mini_apollo.safety.json"), "--out", report, "--no-timings"}) == 0,
              "analyze failed");
    o.require(cli({"trace", "--report", report, "--gaps"}) == 1, "trace --gaps did not exit 1");
    o.detail = o.pass ? std::to_string(r.trace.size()) + " rows complete; LS_GAP gap with 0 paths, exit 1" : o.detail;
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 outsider walkthrough", ac1}, {"AC2 insider walkthrough", ac2}, {"AC3 ASIL table", ac3},
        {"AC4 LS1 asset derivation", ac4}, {"AC5 oracle equivalence", ac5},  {"AC6 mutation properties", ac6},
        {"AC7 mini-Apollo scale", ac7},    {"AC8 determinism", ac8},         {"AC9 traceability", ac9},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (9 - failed) << "/9\n";
    return failed ? 1 : 0;
}

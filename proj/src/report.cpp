#include "soata/report.hpp"

#include "soata/error.hpp"
#include "soata/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <future>

namespace soata {

using nlohmann::ordered_json;

FactBase analysis_facts(const SystemModel& model, bool derive_flows) {
    if (!derive_flows) {
        return to_facts(model);
    }
    SystemModel extended = model;
    auto derived = derive_information_flows(model);
    extended.information_flows.insert(extended.information_flows.end(), derived.begin(), derived.end());
    std::sort(extended.information_flows.begin(), extended.information_flows.end());
    extended.information_flows.erase(
        std::unique(extended.information_flows.begin(), extended.information_flows.end()),
        extended.information_flows.end());
    return to_facts(extended);
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

IntruderResult run_intruder(const FactBase& facts, Intruder intruder, const std::vector<ElementId>& assets) {
    IntruderResult r;
    auto t0 = std::chrono::steady_clock::now();
    r.reach = compute_reach(facts, intruder);
    r.attacks = compute_attacks(facts, r.reach, intruder);
    r.timings.reach_ms = elapsed_ms(t0);
    auto t1 = std::chrono::steady_clock::now();
    r.paths = intruder == Intruder::outsider ? enumerate_outsider_paths(facts, r.reach, assets)
                                             : enumerate_insider_paths(facts, r.reach, assets);
    r.timings.paths_ms = elapsed_ms(t1);
    return r;
}

template <typename T>
std::vector<std::string> set_difference_lines(const std::set<T>& engine, const std::set<T>& oracle,
                                              const std::string& what) {
    std::vector<std::string> out;
    for (const auto& e : engine) {
        if (!oracle.contains(e)) {
            out.push_back(what + ": engine only: " + e);
        }
    }
    for (const auto& o : oracle) {
        if (!engine.contains(o)) {
            out.push_back(what + ": oracle only: " + o);
        }
    }
    return out;
}

std::string describe(const AttackPath& p) {
    std::string s(to_string(p.intruder));
    s += " " + p.entry + " [";
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        s += (i ? "," : "") + p.steps[i];
    }
    s += "] " + p.affected_topic + "->" + p.asset_topic;
    return s;
}

} // namespace

std::vector<std::string> self_check(const FactBase& facts, Profile profile, const std::vector<ElementId>& assets) {
    std::vector<std::string> out;
    auto append = [&](std::vector<std::string> more) { out.insert(out.end(), more.begin(), more.end()); };

    const auto flows = derive_flows(facts);
    std::set<std::string> engine_flows;
    std::set<std::string> oracle_flows;
    for (const auto& a : flows.atoms()) {
        engine_flows.insert(to_string(a.atom()));
    }
    for (const auto& [x, y] : oracle::naive_wrt(facts)) {
        oracle_flows.insert(to_string(Atom{Predicate::wrt, {x, y}}));
    }
    for (const auto& [x, y] : oracle::naive_rd(facts)) {
        oracle_flows.insert(to_string(Atom{Predicate::rd, {x, y}}));
    }
    append(set_difference_lines(engine_flows, oracle_flows, "flows"));

    const PortOwners owners(facts);
    for (auto i : intruders_of(profile)) {
        const std::string who(to_string(i));
        auto reach = compute_reach(facts, i);
        append(set_difference_lines(reach.firsts(Judgment::reach), oracle::naive_reach(facts, i), who + " reach"));
        auto attacks = compute_attacks(facts, reach, i);
        append(set_difference_lines(attacks.firsts(Judgment::attack), oracle::naive_attacks(facts, i),
                                    who + " attack"));
        for (auto& f : verify_intruder_derivations(facts, i)) {
            out.push_back(who + " derivation: " + f);
        }
        auto paths = i == Intruder::outsider ? enumerate_outsider_paths(facts, reach, assets)
                                             : enumerate_insider_paths(facts, reach, assets);
        for (const auto& p : paths) {
            auto why = replay_path(p, flows, reach, owners);
            if (!why.empty()) {
                out.push_back(who + " replay: " + describe(p) + ": " + why);
            }
        }
        std::set<std::string> engine_paths;
        std::set<std::string> oracle_paths;
        for (const auto& p : paths) {
            engine_paths.insert(describe(p));
        }
        for (const auto& p : oracle::naive_paths(facts, i == Intruder::outsider ? Profile::outsider : Profile::insider,
                                                 assets)) {
            oracle_paths.insert(describe(p));
        }
        append(set_difference_lines(engine_paths, oracle_paths, who + " path"));
    }
    return out;
}

AnalysisResult analyze(const SystemModel& model, const std::optional<SafetyModel>& safety,
                       const AnalyzeOptions& options) {
    AnalysisResult r;
    r.profile = options.profile;
    r.safety = safety;
    if (options.assets) {
        r.asset_topics = *options.assets;
        for (const auto& t : r.asset_topics) {
            if (!model.find_topic(t)) {
                throw ReferenceError(t, "unknown asset topic " + t);
            }
        }
    } else if (safety) {
        r.asset_topics = asset_topics(*safety);
    } else {
        for (const auto& t : model.topics) {
            r.asset_topics.push_back(t.id);
        }
    }
    std::sort(r.asset_topics.begin(), r.asset_topics.end());
    r.asset_topics.erase(std::unique(r.asset_topics.begin(), r.asset_topics.end()), r.asset_topics.end());

    const FactBase facts = analysis_facts(model, options.derive_flows);

    if (safety) {
        r.tara = derive_tara(model, *safety);
    }

    const auto intruders = intruders_of(options.profile);
    if (options.parallel && intruders.size() > 1) {
        std::vector<std::future<IntruderResult>> jobs;
        for (auto i : intruders) {
            jobs.push_back(std::async(std::launch::async, run_intruder, std::cref(facts), i, std::cref(r.asset_topics)));
        }
        for (std::size_t k = 0; k < intruders.size(); ++k) {
            r.per_intruder[intruders[k]] = jobs[k].get();
        }
    } else {
        for (auto i : intruders) {
            r.per_intruder[i] = run_intruder(facts, i, r.asset_topics);
        }
    }

    std::map<std::string, PhaseTimings> timings;
    for (const auto& [i, ir] : r.per_intruder) {
        r.paths.insert(r.paths.end(), ir.paths.begin(), ir.paths.end());
        timings[std::string(to_string(i))] = ir.timings;
    }
    canonicalize(r.paths);

    if (options.self_check) {
        auto diffs = self_check(facts, options.profile, r.asset_topics);
        if (!diffs.empty()) {
            std::string msg = "self-check failed with " + std::to_string(diffs.size()) + " difference(s)";
            for (std::size_t k = 0; k < std::min<std::size_t>(diffs.size(), 20); ++k) {
                msg += "\n  " + diffs[k];
            }
            throw InvariantError(msg);
        }
    }

    if (r.per_intruder.contains(Intruder::outsider)) {
        r.outsider_groups = group_by_entry(r.per_intruder[Intruder::outsider].paths);
        r.hints = placement_hints(r.outsider_groups);
    }
    if (options.group_insider && r.per_intruder.contains(Intruder::insider)) {
        r.insider_groups = group_by_entry(r.per_intruder[Intruder::insider].paths);
        r.insider_grouped = true;
    }
    if (safety) {
        r.trace = check_traceability(model, *safety, r.tara.assets, r.tara.damages, r.tara.threats, r.paths);
    }
    r.summary = summarize(r.paths, std::move(timings));
    return r;
}

// ------------------------------------------------------------------ json

ordered_json to_json(const AttackPath& p) {
    ordered_json j;
    j["intruder"] = to_string(p.intruder);
    j["entry"] = p.entry;
    j["elements"] = p.elements;
    j["steps"] = p.steps;
    j["affected_topic"] = p.affected_topic;
    j["asset_topic"] = p.asset_topic;
    return j;
}

namespace {

ordered_json groups_json(const std::vector<EntryGroup>& groups) {
    ordered_json out = ordered_json::array();
    for (const auto& g : groups) {
        out.push_back({{"entry", g.entry}, {"path_count", g.path_count}, {"common_prefix", g.common_prefix}});
    }
    return out;
}

ordered_json tara_json(const TaraArtifacts& t) {
    ordered_json assets = ordered_json::array();
    for (const auto& a : t.assets) {
        assets.push_back({{"id", a.id},
                          {"kind", to_string(a.kind)},
                          {"referent", a.referent},
                          {"property", to_string(a.property)},
                          {"trace", a.trace}});
    }
    ordered_json damages = ordered_json::array();
    for (const auto& d : t.damages) {
        damages.push_back({{"id", d.id},
                           {"hazard_id", d.hazard_id},
                           {"impact", to_string(d.impact)},
                           {"severity", to_string(d.severity)},
                           {"controllability", to_string(d.controllability)},
                           {"description", d.description}});
    }
    ordered_json threats = ordered_json::array();
    for (const auto& th : t.threats) {
        threats.push_back({{"id", th.id},
                           {"asset_id", th.asset_id},
                           {"stride", to_string(th.stride)},
                           {"trace", th.trace},
                           {"damage_ids", th.damage_ids}});
    }
    return {{"assets", assets}, {"damage_scenarios", damages}, {"threat_scenarios", threats}};
}

} // namespace

ordered_json report_json(const AnalysisResult& r, const ReportInputs& inputs) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["model_digest"] = inputs.model_digest;
    j["safety_digest"] = inputs.safety_digest ? ordered_json(*inputs.safety_digest) : ordered_json(nullptr);
    j["profile"] = to_string(r.profile);
    j["asset_topics"] = r.asset_topics;
    j["tara"] = tara_json(r.tara);

    ordered_json intruders = ordered_json::object();
    for (const auto& [i, ir] : r.per_intruder) {
        const auto reached = ir.reach.firsts(Judgment::reach);
        const auto attacked = ir.attacks.firsts(Judgment::attack);
        intruders[std::string(to_string(i))] = {{"reach_count", reached.size()},
                                                {"attack_count", attacked.size()},
                                                {"path_count", ir.paths.size()},
                                                {"reach", reached},
                                                {"attacks", attacked}};
    }
    j["intruders"] = intruders;

    ordered_json paths = ordered_json::array();
    for (const auto& p : r.paths) {
        paths.push_back(to_json(p));
    }
    j["attack_paths"] = paths;

    ordered_json groups = ordered_json::object();
    if (r.per_intruder.contains(Intruder::outsider)) {
        groups["outsider"] = groups_json(r.outsider_groups);
    }
    if (r.insider_grouped) {
        groups["insider"] = groups_json(r.insider_groups);
    }
    j["entry_groups"] = groups;

    ordered_json hints = ordered_json::array();
    for (const auto& h : r.hints) {
        hints.push_back({{"location", h.location},
                         {"incoming", h.incoming},
                         {"covered_entries", h.covered_entries},
                         {"covered_path_count", h.covered_path_count}});
    }
    j["placement_hints"] = hints;

    ordered_json trace = ordered_json::array();
    for (const auto& row : r.trace) {
        trace.push_back({{"loss_scenario_id", row.loss_scenario_id},
                         {"asset_ids", row.asset_ids},
                         {"damage_ids", row.damage_ids},
                         {"threat_ids", row.threat_ids},
                         {"attack_path_count", row.attack_path_count},
                         {"gap", row.gap}});
    }
    j["trace_matrix"] = trace;

    const auto& s = r.summary;
    j["summary"] = {{"total", s.total},
                    {"outsider_count", s.outsider_count},
                    {"insider_count", s.insider_count},
                    {"outsider_routes", s.outsider_routes},
                    {"insider_routes", s.insider_routes},
                    {"per_asset_topic", s.per_asset_topic},
                    {"per_entry", s.per_entry}};
    if (inputs.timings) {
        ordered_json t = ordered_json::object();
        for (const auto& [who, pt] : s.timings) {
            t[who] = {{"reach_ms", pt.reach_ms}, {"paths_ms", pt.paths_ms}};
        }
        j["timings"] = t;
    }
    return j;
}

} // namespace soata

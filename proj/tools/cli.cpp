#include "cli.hpp"

#include "soata/digest.hpp"
#include "soata/error.hpp"
#include "soata/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace soata::cli {

namespace {

using nlohmann::json;

std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        n += (c & 0xC0) != 0x80 ? 1 : 0;
    }
    return n;
}

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = display_width(header[c]);
        for (const auto& r : rows) {
            width[c] = std::max(width[c], display_width(r[c]));
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            s += cells[c];
            if (c + 1 < cells.size()) {
                s.append(width[c] - display_width(cells[c]) + 2, ' ');
            }
        }
        out << s << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        s += (i ? sep : "") + parts[i];
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// Maps library exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return input;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return internal;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return domain;
    } catch (const json::exception& e) {
        err << "error: malformed report: " << e.what() << '\n';
        return input;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal;
    }
}

json load_report(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object() || j.value("schema", 0) != kReportSchema) {
        throw SchemaError(path + ": not a schema " + std::to_string(kReportSchema) + " report");
    }
    return j;
}

// ------------------------------------------------------------- commands

int cmd_validate(const std::string& model_path, std::ostream& out) {
    auto model = parse_model(read_file(model_path));
    auto violations = validate(model);
    for (const auto& v : violations) {
        out << to_string(v) << '\n';
    }
    if (!violations.empty()) {
        return domain;
    }
    out << "ok: " << model.components.size() << " components, " << model.ecus.size() << " ECUs, "
        << model.networks.size() << " networks, " << model.publics.size() << " public elements, "
        << model.topics.size() << " topics\n";
    return ok;
}

struct AnalyzeArgs {
    std::string model;
    std::string safety;
    std::string profile = "both";
    std::string assets = "auto";
    std::string out;
    bool self_check = false;
    bool derive_flows = false;
    bool no_timings = false;
    bool group_insider = false;
};

SystemModel load_valid_model(const std::string& path, std::ostream& err) {
    auto model = parse_model(read_file(path));
    auto violations = validate(model);
    if (!violations.empty()) {
        for (const auto& v : violations) {
            err << to_string(v) << '\n';
        }
        throw InvalidModelError(path + ": " + std::to_string(violations.size()) + " violation(s)");
    }
    return model;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    const std::string model_text = read_file(a.model);
    auto model = load_valid_model(a.model, err);

    std::optional<SafetyModel> safety;
    std::optional<std::string> safety_digest;
    if (!a.safety.empty()) {
        auto text = read_file(a.safety);
        safety = load_safety(text, model);
        safety_digest = hex64(fnv1a64(text));
    }

    AnalyzeOptions opts;
    opts.profile = *parse_profile(a.profile);
    if (a.assets != "auto") {
        opts.assets = split_csv(a.assets);
    }
    opts.self_check = a.self_check;
    opts.derive_flows = a.derive_flows;
    opts.group_insider = a.group_insider;

    auto result = analyze(model, safety, opts);
    auto report = report_json(result, ReportInputs{hex64(fnv1a64(model_text)), safety_digest, !a.no_timings});

    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) {
            throw ParseError("cannot write " + a.out);
        }
        f << report.dump(2) << '\n';
    }

    std::vector<std::vector<std::string>> rows;
    for (const auto& [i, ir] : result.per_intruder) {
        rows.push_back({std::string(to_string(i)), std::to_string(ir.reach.firsts(Judgment::reach).size()),
                        std::to_string(ir.attacks.firsts(Judgment::attack).size()), std::to_string(ir.paths.size())});
    }
    print_table(out, {"intruder", "reached ports", "attacked topics", "attack paths"}, rows);

    rows.clear();
    for (const auto& [topic, n] : result.summary.per_asset_topic) {
        rows.push_back({topic, std::to_string(n)});
    }
    if (!rows.empty()) {
        out << '\n';
        print_table(out, {"asset topic", "attack paths"}, rows);
    }

    std::vector<std::string> gaps;
    for (const auto& row : result.trace) {
        if (row.gap) {
            gaps.push_back(row.loss_scenario_id);
        }
    }
    if (safety) {
        out << '\n'
            << "trace: " << result.trace.size() << " loss scenario(s), " << gaps.size() << " gap(s)"
            << (gaps.empty() ? "" : ": " + join(gaps, ", ")) << '\n';
    }
    if (a.self_check) {
        out << "self-check: engine and oracle agree\n";
    }
    return ok;
}

void print_row(const json& report, const json& row, std::ostream& out) {
    std::map<std::string, json> by_id;
    for (const auto* key : {"assets", "damage_scenarios", "threat_scenarios"}) {
        for (const auto& item : report.at("tara").at(key)) {
            by_id[item.at("id").get<std::string>()] = item;
        }
    }
    const bool gap = row.at("gap").get<bool>();
    out << "loss scenario " << row.at("loss_scenario_id").get<std::string>() << (gap ? "  GAP" : "") << '\n';

    std::vector<std::vector<std::string>> rows;
    for (const auto& id : row.at("asset_ids")) {
        const auto& a = by_id[id.get<std::string>()];
        rows.push_back({"asset", id.get<std::string>(), a.value("kind", "") + " " + a.value("referent", ""),
                        a.value("property", "")});
    }
    for (const auto& id : row.at("damage_ids")) {
        const auto& d = by_id[id.get<std::string>()];
        rows.push_back({"damage", id.get<std::string>(), d.value("hazard_id", ""), d.value("impact", "")});
    }
    for (const auto& id : row.at("threat_ids")) {
        const auto& t = by_id[id.get<std::string>()];
        const auto& asset = by_id[t.value("asset_id", "")];
        rows.push_back({"threat", id.get<std::string>(), asset.value("kind", "") + " " + asset.value("referent", ""),
                        t.value("stride", "")});
    }
    print_table(out, {"artifact", "id", "subject", "rating"}, rows);
    out << "attack paths: " << row.at("attack_path_count").get<std::size_t>() << '\n';
}

int cmd_trace(const std::string& report_path, const std::string& scenario, bool gaps_only, std::ostream& out,
              std::ostream& err) {
    auto report = load_report(report_path);
    const auto& matrix = report.at("trace_matrix");
    if (gaps_only) {
        int gaps = 0;
        for (const auto& row : matrix) {
            if (row.at("gap").get<bool>()) {
                print_row(report, row, out);
                ++gaps;
            }
        }
        out << gaps << " gap(s) in " << matrix.size() << " loss scenario(s)\n";
        return gaps ? domain : ok;
    }
    for (const auto& row : matrix) {
        if (row.at("loss_scenario_id").get<std::string>() == scenario) {
            print_row(report, row, out);
            return row.at("gap").get<bool>() ? domain : ok;
        }
    }
    err << "error: unknown loss scenario " << scenario << '\n';
    return domain;
}

int cmd_prefixes(const std::string& report_path, bool insider, std::ostream& out, std::ostream& err) {
    auto report = load_report(report_path);
    const char* key = insider ? "insider" : "outsider";
    const auto& groups = report.at("entry_groups");
    if (!groups.contains(key)) {
        err << "error: report has no " << key << " entry grouping\n";
        return domain;
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& g : groups.at(key)) {
        rows.push_back({g.at("entry").get<std::string>(), std::to_string(g.at("path_count").get<std::size_t>()),
                        join(g.at("common_prefix").get<std::vector<std::string>>(), " → ")});
    }
    print_table(out, {"entry", "#attack paths", "prefix"}, rows);
    if (insider) {
        return ok;
    }
    rows.clear();
    for (const auto& h : report.at("placement_hints")) {
        rows.push_back({h.at("location").get<std::string>(),
                        join(h.at("incoming").get<std::vector<std::string>>(), ", "),
                        join(h.at("covered_entries").get<std::vector<std::string>>(), ", "),
                        std::to_string(h.at("covered_path_count").get<std::size_t>())});
    }
    out << '\n';
    print_table(out, {"placement", "in front of (incoming)", "covered entries", "covered paths"}, rows);
    return ok;
}

int cmd_dump(const std::string& model_path, const std::string& intruder, bool derive_flows, std::ostream& out,
             std::ostream& err) {
    auto model = load_valid_model(model_path, err);
    auto facts = analysis_facts(model, derive_flows);
    for (const auto& line : ground_dump(facts, intruder == "insider" ? Intruder::insider : Intruder::outsider)) {
        out << line << '\n';
    }
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Threat analysis for publish/subscribe vehicle architectures", "soata"};
    app.require_subcommand(1);

    std::string model_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a system model for structural violations");
    validate_cmd->add_option("--model", model_path, "System model JSON")->required();

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run TARA derivation, intruder analysis and path enumeration");
    analyze_cmd->add_option("--model", aa.model, "System model JSON")->required();
    analyze_cmd->add_option("--safety", aa.safety, "Safety model JSON");
    analyze_cmd->add_option("--profile", aa.profile, "outsider|insider|both")
        ->check(CLI::IsMember({"outsider", "insider", "both"}));
    analyze_cmd->add_option("--assets", aa.assets, "auto or a comma separated topic list");
    analyze_cmd->add_option("--out", aa.out, "Report file");
    analyze_cmd->add_flag("--self-check", aa.self_check, "Cross-check against the exhaustive oracle");
    analyze_cmd->add_flag("--derive-flows", aa.derive_flows, "Add information flows derived from allocations");
    analyze_cmd->add_flag("--no-timings", aa.no_timings, "Omit wall-clock timings from the report");
    analyze_cmd->add_flag("--group-insider", aa.group_insider, "Group insider paths by entry as well");

    std::string report_path;
    std::string scenario;
    bool gaps = false;
    auto* trace_cmd = app.add_subcommand("trace", "Show the trace row of a loss scenario");
    trace_cmd->add_option("--report", report_path, "Report JSON")->required();
    auto* scenario_opt = trace_cmd->add_option("--scenario", scenario, "Loss scenario id");
    auto* gaps_opt = trace_cmd->add_flag("--gaps", gaps, "List every gap row");
    scenario_opt->excludes(gaps_opt);

    bool insider = false;
    auto* prefixes_cmd = app.add_subcommand("prefixes", "Entry groups, common prefixes and placement hints");
    prefixes_cmd->add_option("--report", report_path, "Report JSON")->required();
    prefixes_cmd->add_flag("--insider", insider, "Show insider grouping (needs --group-insider at analysis)");

    std::string intruder = "outsider";
    bool dump_derive = false;
    auto* dump_cmd = app.add_subcommand("dump", "Print input facts and every derived atom");
    dump_cmd->add_option("--model", model_path, "System model JSON")->required();
    dump_cmd->add_option("--intruder", intruder, "outsider|insider")->check(CLI::IsMember({"outsider", "insider"}));
    dump_cmd->add_flag("--derive-flows", dump_derive, "Add information flows derived from allocations");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input;
    }

    return guarded(err, [&] {
        if (*validate_cmd) {
            return cmd_validate(model_path, out);
        }
        if (*analyze_cmd) {
            return cmd_analyze(aa, out, err);
        }
        if (*trace_cmd) {
            if (scenario.empty() && !gaps) {
                err << "error: trace needs --scenario or --gaps\n";
                return static_cast<int>(input);
            }
            return cmd_trace(report_path, scenario, gaps, out, err);
        }
        if (*prefixes_cmd) {
            return cmd_prefixes(report_path, insider, out, err);
        }
        return cmd_dump(model_path, intruder, dump_derive, out, err);
    });
}

} // namespace soata::cli

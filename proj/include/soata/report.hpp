#pragma once

#include "soata/analysis.hpp"
#include "soata/intruder.hpp"
#include "soata/model.hpp"
#include "soata/paths.hpp"
#include "soata/safety.hpp"
#include "soata/tara.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace soata {

inline constexpr int kReportSchema = 1;

struct AnalyzeOptions {
    Profile profile = Profile::both;
    std::optional<std::vector<ElementId>> assets; // nullopt: derive from the safety model
    bool self_check = false;
    bool derive_flows = false;  // add derive_information_flows() to the declared if-facts
    bool group_insider = false; // entry grouping for insider paths as well
    bool parallel = true;
};

struct IntruderResult {
    ReachSet reach;
    AttackSet attacks;
    std::vector<AttackPath> paths;
    PhaseTimings timings;
};

struct AnalysisResult {
    Profile profile = Profile::both;
    std::vector<ElementId> asset_topics;
    std::optional<SafetyModel> safety;
    TaraArtifacts tara;
    std::map<Intruder, IntruderResult> per_intruder;
    std::vector<AttackPath> paths; // canonical union
    std::vector<EntryGroup> outsider_groups;
    std::vector<EntryGroup> insider_groups;
    bool insider_grouped = false;
    std::vector<PlacementHint> hints;
    TraceMatrix trace;
    Summary summary;
};

/// Facts for analysis: the model's facts, plus derived if-facts on request.
FactBase analysis_facts(const SystemModel& model, bool derive_flows);

/// Full pipeline. Throws InvariantError if `self_check` finds any difference
/// between the engine and the oracle.
AnalysisResult analyze(const SystemModel& model, const std::optional<SafetyModel>& safety,
                       const AnalyzeOptions& options);

/// Engine against oracle on one fact base; returns the differences found.
std::vector<std::string> self_check(const FactBase& facts, Profile profile, const std::vector<ElementId>& assets);

struct ReportInputs {
    std::string model_digest;
    std::optional<std::string> safety_digest;
    bool timings = true;
};

nlohmann::ordered_json report_json(const AnalysisResult& result, const ReportInputs& inputs);

nlohmann::ordered_json to_json(const AttackPath& path);

} // namespace soata

#include "soata/safety.hpp"

#include "json_util.hpp"
#include "soata/error.hpp"

#include <algorithm>
#include <set>

namespace soata {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) {
            return static_cast<E>(i);
        }
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 4> kSeverity{"S0", "S1", "S2", "S3"};
constexpr std::array<std::string_view, 5> kExposure{"E0", "E1", "E2", "E3", "E4"};
constexpr std::array<std::string_view, 4> kControllability{"C0", "C1", "C2", "C3"};
constexpr std::array<std::string_view, 5> kAsil{"QM", "A", "B", "C", "D"};
constexpr std::array<std::string_view, 5> kFailureMode{"erroneous", "loss", "omission", "late", "early"};

constexpr Asil Q = Asil::QM;
constexpr Asil A = Asil::A;
constexpr Asil B = Asil::B;
constexpr Asil C = Asil::C;
constexpr Asil D = Asil::D;

// clang-format off
constexpr AsilTable kAsilTable{{
    //        C0 C1 C2 C3
    {{ {{Q, Q, Q, Q}},   // S0 E0
       {{Q, Q, Q, Q}},   //    E1
       {{Q, Q, Q, Q}},   //    E2
       {{Q, Q, Q, Q}},   //    E3
       {{Q, Q, Q, Q}} }},//    E4
    {{ {{Q, Q, Q, Q}},   // S1 E0
       {{Q, Q, Q, Q}},   //    E1
       {{Q, Q, Q, Q}},   //    E2
       {{Q, Q, Q, A}},   //    E3
       {{Q, Q, A, B}} }},//    E4
    {{ {{Q, Q, Q, Q}},   // S2 E0
       {{Q, Q, Q, Q}},   //    E1
       {{Q, Q, Q, A}},   //    E2
       {{Q, Q, A, B}},   //    E3
       {{Q, A, B, C}} }},//    E4
    {{ {{Q, Q, Q, Q}},   // S3 E0
       {{Q, Q, Q, A}},   //    E1
       {{Q, Q, A, B}},   //    E2
       {{Q, A, B, C}},   //    E3
       {{Q, B, C, D}} }},//    E4
}};
// clang-format on

} // namespace

std::string_view to_string(Severity s) noexcept { return kSeverity[static_cast<std::size_t>(s)]; }
std::string_view to_string(Exposure e) noexcept { return kExposure[static_cast<std::size_t>(e)]; }
std::string_view to_string(Controllability c) noexcept { return kControllability[static_cast<std::size_t>(c)]; }
std::string_view to_string(Asil a) noexcept { return kAsil[static_cast<std::size_t>(a)]; }
std::string_view to_string(FailureMode f) noexcept { return kFailureMode[static_cast<std::size_t>(f)]; }

std::optional<Severity> parse_severity(std::string_view s) noexcept { return lookup<Severity>(s, kSeverity); }
std::optional<Exposure> parse_exposure(std::string_view s) noexcept { return lookup<Exposure>(s, kExposure); }
std::optional<Controllability> parse_controllability(std::string_view s) noexcept {
    return lookup<Controllability>(s, kControllability);
}
std::optional<Asil> parse_asil(std::string_view s) noexcept { return lookup<Asil>(s, kAsil); }
std::optional<FailureMode> parse_failure_mode(std::string_view s) noexcept {
    return lookup<FailureMode>(s, kFailureMode);
}

const AsilTable& asil_table() noexcept { return kAsilTable; }

Asil compute_asil(Severity s, Exposure e, Controllability c) noexcept {
    return kAsilTable[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)][static_cast<std::size_t>(c)];
}

const Hazard* SafetyModel::find_hazard(std::string_view id) const {
    auto it = std::find_if(hazards.begin(), hazards.end(), [&](const Hazard& h) { return h.id == id; });
    return it == hazards.end() ? nullptr : &*it;
}

const LossScenario* SafetyModel::find_loss_scenario(std::string_view id) const {
    auto it = std::find_if(loss_scenarios.begin(), loss_scenarios.end(),
                           [&](const LossScenario& ls) { return ls.id == id; });
    return it == loss_scenarios.end() ? nullptr : &*it;
}

namespace {

template <typename E>
E parse_enum(const detail::json& o, const std::string& at, const char* key,
             std::optional<E> (*parse)(std::string_view) noexcept) {
    std::string raw = detail::get_string(o, at, key);
    auto v = parse(raw);
    if (!v) {
        throw SchemaError(at + "/" + key + ": invalid value \"" + raw + "\"");
    }
    return *v;
}

} // namespace

SafetyModel load_safety(std::string_view document, const SystemModel& model) {
    using detail::json;
    json doc = detail::parse_document(document, "safety");
    detail::require_object(doc, "safety");
    detail::check_keys(doc, "safety", {"schema", "hazards", "loss_scenarios"});
    detail::require_schema_version(doc, "safety", false);

    SafetyModel sm;
    std::set<ElementId> ids;
    const auto& hazards = detail::get_array(doc, "", "hazards");
    for (std::size_t i = 0; i < hazards.size(); ++i) {
        std::string at = "/hazards/" + std::to_string(i);
        const auto& o = hazards[i];
        detail::require_object(o, at);
        detail::check_keys(o, at, {"id", "description", "severity", "exposure", "controllability", "asil"});
        Hazard h;
        h.id = detail::get_string(o, at, "id");
        h.description = o.contains("description") ? detail::get_string(o, at, "description") : "";
        h.severity = parse_enum<Severity>(o, at, "severity", &parse_severity);
        h.exposure = parse_enum<Exposure>(o, at, "exposure", &parse_exposure);
        h.controllability = parse_enum<Controllability>(o, at, "controllability", &parse_controllability);
        h.asil = compute_asil(h.severity, h.exposure, h.controllability);
        if (o.contains("asil")) {
            Asil declared = parse_enum<Asil>(o, at, "asil", &parse_asil);
            if (declared != h.asil) {
                throw AsilMismatchError("hazard " + h.id + ": declared ASIL " + std::string(to_string(declared)) +
                                        " but " + std::string(to_string(h.severity)) + "/" +
                                        std::string(to_string(h.exposure)) + "/" +
                                        std::string(to_string(h.controllability)) + " gives " +
                                        std::string(to_string(h.asil)));
            }
        }
        if (h.id.empty() || !ids.insert(h.id).second) {
            throw SchemaError(at + "/id: empty or duplicate id \"" + h.id + "\"");
        }
        sm.hazards.push_back(std::move(h));
    }

    const auto& scenarios = detail::get_array(doc, "", "loss_scenarios");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        std::string at = "/loss_scenarios/" + std::to_string(i);
        const auto& o = scenarios[i];
        detail::require_object(o, at);
        detail::check_keys(o, at,
                           {"id", "hazard_ids", "source", "target", "message", "failure_mode", "description"});
        LossScenario ls;
        ls.id = detail::get_string(o, at, "id");
        ls.hazard_ids = detail::get_string_array(o, at, "hazard_ids");
        ls.source = detail::get_string(o, at, "source");
        ls.target = detail::get_string(o, at, "target");
        ls.message = detail::get_string(o, at, "message");
        ls.failure_mode = parse_enum<FailureMode>(o, at, "failure_mode", &parse_failure_mode);
        ls.description = o.contains("description") ? detail::get_string(o, at, "description") : "";
        if (ls.id.empty() || !ids.insert(ls.id).second) {
            throw SchemaError(at + "/id: empty or duplicate id \"" + ls.id + "\"");
        }
        if (ls.hazard_ids.empty()) {
            throw SchemaError(at + "/hazard_ids: a loss scenario needs at least one hazard");
        }
        for (const auto& hz : ls.hazard_ids) {
            if (!sm.find_hazard(hz)) {
                throw ReferenceError(hz, "loss scenario " + ls.id + " references undeclared hazard \"" + hz + "\"");
            }
        }
        for (const auto* comp : {&ls.source, &ls.target}) {
            if (!model.find_component(*comp)) {
                throw ReferenceError(*comp,
                                     "loss scenario " + ls.id + " references unknown component \"" + *comp + "\"");
            }
        }
        if (!model.find_topic(ls.message)) {
            throw ReferenceError(ls.message,
                                 "loss scenario " + ls.id + " references unknown topic \"" + ls.message + "\"");
        }
        sm.loss_scenarios.push_back(std::move(ls));
    }
    return sm;
}

SafetyModel load_safety_file(const std::string& path, const SystemModel& model) {
    return load_safety(read_file(path), model);
}

} // namespace soata

#pragma once

#include "soata/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace soata {

enum class Severity { S0, S1, S2, S3 };
enum class Exposure { E0, E1, E2, E3, E4 };
enum class Controllability { C0, C1, C2, C3 };
enum class Asil { QM, A, B, C, D };

enum class FailureMode { erroneous, loss, omission, late, early };

std::string_view to_string(Severity s) noexcept;
std::string_view to_string(Exposure e) noexcept;
std::string_view to_string(Controllability c) noexcept;
std::string_view to_string(Asil a) noexcept;
std::string_view to_string(FailureMode f) noexcept;

std::optional<Severity> parse_severity(std::string_view s) noexcept;
std::optional<Exposure> parse_exposure(std::string_view s) noexcept;
std::optional<Controllability> parse_controllability(std::string_view s) noexcept;
std::optional<Asil> parse_asil(std::string_view s) noexcept;
std::optional<FailureMode> parse_failure_mode(std::string_view s) noexcept;

/// ASIL determination table, indexed [severity][exposure][controllability].
/// Any zero class (S0, E0, C0) yields QM; the S1..S3 x E1..E4 x C1..C3 block
/// is the risk graph of ISO 26262-3.
using AsilTable = std::array<std::array<std::array<Asil, 4>, 5>, 4>;
const AsilTable& asil_table() noexcept;

Asil compute_asil(Severity s, Exposure e, Controllability c) noexcept;

struct Hazard {
    ElementId id;
    std::string description;
    Severity severity = Severity::S0;
    Exposure exposure = Exposure::E0;
    Controllability controllability = Controllability::C0;
    Asil asil = Asil::QM;
};

struct LossScenario {
    ElementId id;
    std::vector<ElementId> hazard_ids;
    ElementId source;
    ElementId target;
    ElementId message;
    FailureMode failure_mode = FailureMode::erroneous;
    std::string description;
};

struct SafetyModel {
    std::vector<Hazard> hazards;
    std::vector<LossScenario> loss_scenarios;

    const Hazard* find_hazard(std::string_view id) const;
    const LossScenario* find_loss_scenario(std::string_view id) const;
};

/// Parses a safety document and resolves every reference against `model`.
/// Throws ParseError, SchemaError, ReferenceError or AsilMismatchError.
SafetyModel load_safety(std::string_view document, const SystemModel& model);
SafetyModel load_safety_file(const std::string& path, const SystemModel& model);

} // namespace soata

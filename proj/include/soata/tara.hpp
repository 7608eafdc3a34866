#pragma once

#include "soata/model.hpp"
#include "soata/paths.hpp"
#include "soata/safety.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace soata {

enum class AssetKind { function, topic, hardware };
enum class SecurityProperty { integrity, availability };
enum class Stride { spoofing, tampering, repudiation, info_disclosure, dos, elevation };
enum class Impact { severe, moderate, negligible };

std::string_view to_string(AssetKind k) noexcept;
std::string_view to_string(SecurityProperty p) noexcept;
std::string_view to_string(Stride s) noexcept;
std::string_view to_string(Impact i) noexcept;

struct Asset {
    std::string id;
    AssetKind kind = AssetKind::function;
    ElementId referent; // component, topic or ECU id
    SecurityProperty property = SecurityProperty::integrity;
    std::vector<ElementId> trace; // loss-scenario ids, sorted
};

struct DamageScenario {
    std::string id;
    ElementId hazard_id;
    Impact impact = Impact::negligible;
    Severity severity = Severity::S0;
    Controllability controllability = Controllability::C0; // recorded, not used by the rating
    std::string description;
};

struct ThreatScenario {
    std::string id;
    std::string asset_id;
    Stride stride = Stride::tampering;
    std::vector<ElementId> trace;
    std::vector<std::string> damage_ids;
};

struct TraceRow {
    ElementId loss_scenario_id;
    std::vector<std::string> asset_ids;
    std::vector<std::string> damage_ids;
    std::vector<std::string> threat_ids;
    std::size_t attack_path_count = 0;
    bool gap = false; // an empty column or no attack path
};

using TraceMatrix = std::vector<TraceRow>;

struct TaraConfig {
    std::map<FailureMode, SecurityProperty> property_of{
        {FailureMode::erroneous, SecurityProperty::integrity},
        {FailureMode::loss, SecurityProperty::availability},
        {FailureMode::omission, SecurityProperty::availability},
        {FailureMode::late, SecurityProperty::availability},
        {FailureMode::early, SecurityProperty::availability},
    };
};

/// Permitted STRIDE values for an asset kind and property.
std::vector<Stride> stride_map(AssetKind kind, SecurityProperty property);

Impact impact_of(Severity s) noexcept;

std::string asset_id(AssetKind kind, std::string_view referent, SecurityProperty property);
std::string damage_id(std::string_view hazard_id);
std::string threat_id(std::string_view asset_id, Stride stride);

/// Function assets for source and target, a topic asset for the message and a
/// hardware asset for every ECU hosting source or target; merged by id.
std::vector<Asset> derive_assets(const SystemModel& model, const SafetyModel& safety, const TaraConfig& config = {});

std::vector<DamageScenario> derive_damage_scenarios(const SafetyModel& safety);

/// One threat per STRIDE value of the asset's cell. Damage ids follow the
/// hazards of the traced loss scenarios.
std::vector<ThreatScenario> derive_threat_scenarios(const std::vector<Asset>& assets, const SafetyModel& safety);

/// Components at the ends of a path: the MITM pair for insider paths, the
/// publishers of the affected topic for outsider paths.
std::vector<ElementId> endpoint_components(const AttackPath& path, const SystemModel& model);

TraceMatrix check_traceability(const SystemModel& model, const SafetyModel& safety, const std::vector<Asset>& assets,
                               const std::vector<DamageScenario>& damages,
                               const std::vector<ThreatScenario>& threats, const std::vector<AttackPath>& paths);

struct TaraArtifacts {
    std::vector<Asset> assets;
    std::vector<DamageScenario> damages;
    std::vector<ThreatScenario> threats;
};

TaraArtifacts derive_tara(const SystemModel& model, const SafetyModel& safety, const TaraConfig& config = {});

/// Asset topics selected automatically: the messages of all loss scenarios.
std::vector<ElementId> asset_topics(const SafetyModel& safety);

} // namespace soata

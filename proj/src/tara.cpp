#include "soata/tara.hpp"

#include "soata/digest.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace soata {

std::string_view to_string(AssetKind k) noexcept {
    switch (k) {
    case AssetKind::function:
        return "function";
    case AssetKind::topic:
        return "topic";
    case AssetKind::hardware:
        return "hardware";
    }
    return "";
}

std::string_view to_string(SecurityProperty p) noexcept {
    return p == SecurityProperty::integrity ? "integrity" : "availability";
}

std::string_view to_string(Stride s) noexcept {
    switch (s) {
    case Stride::spoofing:
        return "spoofing";
    case Stride::tampering:
        return "tampering";
    case Stride::repudiation:
        return "repudiation";
    case Stride::info_disclosure:
        return "info_disclosure";
    case Stride::dos:
        return "dos";
    case Stride::elevation:
        return "elevation";
    }
    return "";
}

std::string_view to_string(Impact i) noexcept {
    switch (i) {
    case Impact::severe:
        return "severe";
    case Impact::moderate:
        return "moderate";
    case Impact::negligible:
        return "negligible";
    }
    return "";
}

std::vector<Stride> stride_map(AssetKind kind, SecurityProperty property) {
    if (property == SecurityProperty::availability) {
        return {Stride::dos};
    }
    if (kind == AssetKind::topic) {
        return {Stride::spoofing, Stride::elevation};
    }
    return {Stride::tampering};
}

Impact impact_of(Severity s) noexcept {
    switch (s) {
    case Severity::S3:
        return Impact::severe;
    case Severity::S2:
    case Severity::S1:
        return Impact::moderate;
    case Severity::S0:
        return Impact::negligible;
    }
    return Impact::negligible;
}

std::string asset_id(AssetKind kind, std::string_view referent, SecurityProperty property) {
    std::string content;
    content.append(to_string(kind)).append("|").append(referent).append("|").append(to_string(property));
    return content_id("AS-", content);
}

std::string damage_id(std::string_view hazard_id) {
    return content_id("DS-", hazard_id);
}

std::string threat_id(std::string_view asset, Stride stride) {
    std::string content(asset);
    content.append("|").append(to_string(stride));
    return content_id("TS-", content);
}

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::vector<Asset> derive_assets(const SystemModel& model, const SafetyModel& safety, const TaraConfig& config) {
    std::map<std::string, Asset> by_id;
    auto add = [&](AssetKind kind, const ElementId& referent, SecurityProperty prop, const ElementId& ls) {
        auto id = asset_id(kind, referent, prop);
        auto [it, fresh] = by_id.try_emplace(id);
        if (fresh) {
            it->second = Asset{id, kind, referent, prop, {}};
        }
        it->second.trace.push_back(ls);
    };
    for (const auto& ls : safety.loss_scenarios) {
        auto found = config.property_of.find(ls.failure_mode);
        const auto prop = found == config.property_of.end() ? SecurityProperty::availability : found->second;
        add(AssetKind::function, ls.source, prop, ls.id);
        add(AssetKind::function, ls.target, prop, ls.id);
        add(AssetKind::topic, ls.message, prop, ls.id);
        std::set<ElementId> ecus;
        for (const auto& c : {ls.source, ls.target}) {
            auto hosts = hosting_ecus(model, c);
            ecus.insert(hosts.begin(), hosts.end());
        }
        for (const auto& e : ecus) {
            add(AssetKind::hardware, e, prop, ls.id);
        }
    }
    std::vector<Asset> out;
    for (auto& [id, a] : by_id) {
        sort_unique(a.trace);
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const Asset& a, const Asset& b) {
        return std::tie(a.kind, a.referent, a.property) < std::tie(b.kind, b.referent, b.property);
    });
    return out;
}

std::vector<DamageScenario> derive_damage_scenarios(const SafetyModel& safety) {
    std::vector<DamageScenario> out;
    for (const auto& h : safety.hazards) {
        out.push_back(DamageScenario{damage_id(h.id), h.id, impact_of(h.severity), h.severity, h.controllability,
                                     h.description});
    }
    std::sort(out.begin(), out.end(),
              [](const DamageScenario& a, const DamageScenario& b) { return a.hazard_id < b.hazard_id; });
    return out;
}

std::vector<ThreatScenario> derive_threat_scenarios(const std::vector<Asset>& assets, const SafetyModel& safety) {
    std::vector<ThreatScenario> out;
    for (const auto& a : assets) {
        std::vector<std::string> damages;
        for (const auto& ls_id : a.trace) {
            if (const auto* ls = safety.find_loss_scenario(ls_id)) {
                for (const auto& h : ls->hazard_ids) {
                    damages.push_back(damage_id(h));
                }
            }
        }
        sort_unique(damages);
        for (auto s : stride_map(a.kind, a.property)) {
            out.push_back(ThreatScenario{threat_id(a.id, s), a.id, s, a.trace, damages});
        }
    }
    return out;
}

std::vector<ElementId> endpoint_components(const AttackPath& path, const SystemModel& model) {
    std::vector<ElementId> out;
    if (path.intruder == Intruder::insider) {
        out.assign(path.elements.begin(), path.elements.begin() + std::min<std::ptrdiff_t>(2, std::ssize(path.elements)));
    } else {
        for (const auto& c : model.components) {
            for (const auto& b : c.pub_ports) {
                if (b.topic == path.affected_topic) {
                    out.push_back(c.id);
                }
            }
        }
    }
    sort_unique(out);
    return out;
}

TraceMatrix check_traceability(const SystemModel& model, const SafetyModel& safety, const std::vector<Asset>& assets,
                               const std::vector<DamageScenario>& damages,
                               const std::vector<ThreatScenario>& threats, const std::vector<AttackPath>& paths) {
    std::vector<std::vector<ElementId>> endpoints;
    endpoints.reserve(paths.size());
    for (const auto& p : paths) {
        endpoints.push_back(endpoint_components(p, model));
    }

    TraceMatrix out;
    for (const auto& ls : safety.loss_scenarios) {
        TraceRow row;
        row.loss_scenario_id = ls.id;
        auto traced = [&](const std::vector<ElementId>& trace) {
            return std::find(trace.begin(), trace.end(), ls.id) != trace.end();
        };
        for (const auto& a : assets) {
            if (traced(a.trace)) {
                row.asset_ids.push_back(a.id);
            }
        }
        for (const auto& d : damages) {
            if (std::find(ls.hazard_ids.begin(), ls.hazard_ids.end(), d.hazard_id) != ls.hazard_ids.end()) {
                row.damage_ids.push_back(d.id);
            }
        }
        for (const auto& t : threats) {
            if (traced(t.trace)) {
                row.threat_ids.push_back(t.id);
            }
        }
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& ends = endpoints[i];
            bool hit = paths[i].affected_topic == ls.message ||
                       std::binary_search(ends.begin(), ends.end(), ls.source) ||
                       std::binary_search(ends.begin(), ends.end(), ls.target);
            row.attack_path_count += hit ? 1 : 0;
        }
        sort_unique(row.asset_ids);
        sort_unique(row.damage_ids);
        sort_unique(row.threat_ids);
        row.gap = row.asset_ids.empty() || row.damage_ids.empty() || row.threat_ids.empty() ||
                  row.attack_path_count == 0;
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end(),
              [](const TraceRow& a, const TraceRow& b) { return a.loss_scenario_id < b.loss_scenario_id; });
    return out;
}

TaraArtifacts derive_tara(const SystemModel& model, const SafetyModel& safety, const TaraConfig& config) {
    TaraArtifacts out;
    out.assets = derive_assets(model, safety, config);
    out.damages = derive_damage_scenarios(safety);
    out.threats = derive_threat_scenarios(out.assets, safety);
    return out;
}

std::vector<ElementId> asset_topics(const SafetyModel& safety) {
    std::vector<ElementId> out;
    for (const auto& ls : safety.loss_scenarios) {
        out.push_back(ls.message);
    }
    sort_unique(out);
    return out;
}

} // namespace soata

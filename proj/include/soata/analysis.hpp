#pragma once

#include "soata/paths.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace soata {

struct EntryGroup {
    ElementId entry;
    std::size_t path_count = 0;
    std::vector<ElementId> common_prefix;
};

struct PlacementHint {
    ElementId location;
    std::vector<ElementId> incoming; // elements right before `location` in the merged prefixes
    std::vector<ElementId> covered_entries;
    std::size_t covered_path_count = 0;
};

/// Longest common prefix of the element projections.
std::vector<ElementId> common_prefix(const std::vector<const std::vector<ElementId>*>& lists);

/// One group per entry, ordered by entry id. Paths of both intruders are
/// grouped together; filter beforehand to restrict.
std::vector<EntryGroup> group_by_entry(const std::vector<AttackPath>& paths);

std::vector<PlacementHint> placement_hints(const std::vector<EntryGroup>& groups);

std::vector<AttackPath> paths_of(const std::vector<AttackPath>& paths, Intruder intruder);

struct PhaseTimings {
    double reach_ms = 0;
    double paths_ms = 0;
};

struct Summary {
    std::size_t total = 0;
    std::size_t outsider_count = 0;
    std::size_t insider_count = 0;
    std::map<ElementId, std::size_t> per_asset_topic;
    std::map<ElementId, std::size_t> per_entry;
    // Distinct element-level routes (steps ignored), per intruder.
    std::size_t outsider_routes = 0;
    std::size_t insider_routes = 0;
    std::map<std::string, PhaseTimings> timings; // keyed by intruder name
};

Summary summarize(const std::vector<AttackPath>& paths, std::map<std::string, PhaseTimings> timings = {});

} // namespace soata

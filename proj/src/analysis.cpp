#include "soata/analysis.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace soata {

std::vector<ElementId> common_prefix(const std::vector<const std::vector<ElementId>*>& lists) {
    if (lists.empty()) {
        return {};
    }
    std::vector<ElementId> prefix = *lists.front();
    for (const auto* l : lists) {
        auto [a, b] = std::mismatch(prefix.begin(), prefix.end(), l->begin(), l->end());
        prefix.erase(a, prefix.end());
    }
    return prefix;
}

std::vector<EntryGroup> group_by_entry(const std::vector<AttackPath>& paths) {
    std::map<ElementId, std::vector<const std::vector<ElementId>*>> members;
    for (const auto& p : paths) {
        members[p.entry].push_back(&p.elements);
    }
    std::vector<EntryGroup> out;
    for (const auto& [entry, lists] : members) {
        out.push_back(EntryGroup{entry, lists.size(), common_prefix(lists)});
    }
    return out;
}

std::vector<PlacementHint> placement_hints(const std::vector<EntryGroup>& groups) {
    std::map<ElementId, PlacementHint> by_location;
    for (const auto& g : groups) {
        if (g.common_prefix.empty()) {
            continue;
        }
        const auto& loc = g.common_prefix.back();
        auto& hint = by_location[loc];
        hint.location = loc;
        if (g.common_prefix.size() >= 2) {
            hint.incoming.push_back(g.common_prefix[g.common_prefix.size() - 2]);
        }
        hint.covered_entries.push_back(g.entry);
        hint.covered_path_count += g.path_count;
    }
    std::vector<PlacementHint> out;
    for (auto& [loc, h] : by_location) {
        std::sort(h.incoming.begin(), h.incoming.end());
        h.incoming.erase(std::unique(h.incoming.begin(), h.incoming.end()), h.incoming.end());
        std::sort(h.covered_entries.begin(), h.covered_entries.end());
        out.push_back(std::move(h));
    }
    std::stable_sort(out.begin(), out.end(), [](const PlacementHint& a, const PlacementHint& b) {
        if (a.covered_path_count != b.covered_path_count) {
            return a.covered_path_count > b.covered_path_count;
        }
        return a.location < b.location;
    });
    return out;
}

std::vector<AttackPath> paths_of(const std::vector<AttackPath>& paths, Intruder intruder) {
    std::vector<AttackPath> out;
    std::copy_if(paths.begin(), paths.end(), std::back_inserter(out),
                 [&](const AttackPath& p) { return p.intruder == intruder; });
    return out;
}

Summary summarize(const std::vector<AttackPath>& paths, std::map<std::string, PhaseTimings> timings) {
    Summary s;
    s.total = paths.size();
    std::set<std::pair<Intruder, std::vector<ElementId>>> routes;
    for (const auto& p : paths) {
        (p.intruder == Intruder::outsider ? s.outsider_count : s.insider_count)++;
        s.per_asset_topic[p.asset_topic]++;
        s.per_entry[p.entry]++;
        routes.emplace(p.intruder, p.elements);
    }
    for (const auto& [i, r] : routes) {
        (i == Intruder::outsider ? s.outsider_routes : s.insider_routes)++;
    }
    s.timings = std::move(timings);
    return s;
}

} // namespace soata

#pragma once

#include "soata/facts.hpp"
#include "soata/intruder.hpp"
#include "soata/model.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace soata {

struct AttackPath {
    Intruder intruder = Intruder::outsider;
    ElementId entry;                 // public element (outsider) or publisher component (insider)
    std::vector<ElementId> steps;    // port-level hops
    std::vector<ElementId> elements; // owning elements, consecutive duplicates collapsed
    ElementId affected_topic;
    ElementId asset_topic;

    bool operator==(const AttackPath&) const = default;
};

// Canonical order: intruder, entry, elements, affected topic, then steps and
// asset topic.
bool operator<(const AttackPath& a, const AttackPath& b);

void canonicalize(std::vector<AttackPath>& paths);

// Port -> owning element, from the ecui/ecuo/neti/neto/cpi/cpo/public facts.
class PortOwners {
public:
    explicit PortOwners(const FactBase& facts);

    // Empty string for unknown ports.
    const ElementId& owner(const ElementId& port) const;
    bool is_public(const ElementId& port) const { return public_ports_.contains(port); }

private:
    std::map<ElementId, ElementId> owner_;
    std::set<ElementId> public_ports_;
};

std::vector<ElementId> project_elements(std::span<const ElementId> steps, const PortOwners& owners);

// (t1, t2) when some component subscribes t1 and publishes t2; stored as the
// reflexive-transitive closure over the declared topics.
class InfluenceRelation {
public:
    explicit InfluenceRelation(const FactBase& facts);

    bool influences(const ElementId& from, const ElementId& to) const;
    const std::set<std::pair<ElementId, ElementId>>& pairs() const noexcept { return closure_; }

private:
    std::set<std::pair<ElementId, ElementId>> closure_;
};

/// All simple port paths from a public out-port to each reached if-port whose
/// topic influences an asset topic, found by backward search from the if-port
/// over reached ports only.
std::vector<AttackPath> enumerate_outsider_paths(const FactBase& facts, const ReachSet& reach,
                                                 const std::vector<ElementId>& asset_topics);

/// One path per (publisher component, subscriber component) MITM pair of an
/// at_ins attack whose subscriber leads to the asset topic; the element list
/// continues along the shortest, then lexicographically least, component
/// chain to a publisher of the asset topic.
std::vector<AttackPath> enumerate_insider_paths(const FactBase& facts, const ReachSet& reach,
                                                const std::vector<ElementId>& asset_topics);

/// Runs reachability and enumeration for every intruder of the profile.
std::vector<AttackPath> enumerate_paths(const FactBase& facts, Profile profile,
                                        const std::vector<ElementId>& asset_topics);

/// Hop-by-hop replay against the flow atoms and the reach set. Returns the
/// reason for the first failure, or an empty string.
std::string replay_path(const AttackPath& path, const FlowSet& flows, const ReachSet& reach,
                        const PortOwners& owners);

} // namespace soata

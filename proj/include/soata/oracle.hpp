#pragma once

#include "soata/facts.hpp"
#include "soata/intruder.hpp"
#include "soata/paths.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

// Deliberately naive reference implementation: nested scans over the fact
// list, fixpoints by repetition, exhaustive forward search. Used to cross-check
// the indexed engine and the goal-directed enumerator.
namespace soata::oracle {

struct Options {
    std::size_t node_budget = 2'000'000; // ResourceError beyond this many search nodes
};

std::set<std::pair<std::string, std::string>> naive_wrt(const FactBase& facts);
std::set<std::pair<std::string, std::string>> naive_rd(const FactBase& facts);

std::set<std::string> naive_reach(const FactBase& facts, Intruder intruder);
std::set<std::string> naive_attacks(const FactBase& facts, Intruder intruder);

std::set<std::pair<std::string, std::string>> naive_influence(const FactBase& facts);

std::vector<AttackPath> naive_paths(const FactBase& facts, Profile profile, const std::vector<std::string>& asset_topics,
                                    Options options = {});

} // namespace soata::oracle

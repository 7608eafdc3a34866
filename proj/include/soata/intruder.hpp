#pragma once

#include "soata/datalog.hpp"
#include "soata/facts.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace soata {

enum class Intruder { outsider, insider };
enum class Profile { outsider, insider, both };

std::string_view to_string(Intruder i) noexcept;
std::string_view to_string(Profile p) noexcept;
std::optional<Profile> parse_profile(std::string_view s) noexcept;
std::vector<Intruder> intruders_of(Profile p);

enum class Judgment { wrt, rd, reach, attack };

std::string_view to_string(Judgment j) noexcept;

struct DerivedAtom {
    Judgment judgment;
    std::vector<std::string> args;
    std::optional<Intruder> intruder; // set for reach and attack
    std::string rule;
    std::vector<Atom> premises;
    std::vector<Atom> negated_premises;

    Atom atom() const;

    // Identity is (judgment, intruder, args); the derivation is carried along.
    bool operator<(const DerivedAtom& o) const;
    bool same_conclusion(const DerivedAtom& o) const;
};

// Canonically sorted set of derived atoms of one or more judgments.
class DerivedSet {
public:
    DerivedSet() = default;
    explicit DerivedSet(std::vector<DerivedAtom> atoms);

    const std::vector<DerivedAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    bool contains(Judgment j, const std::vector<std::string>& args,
                  std::optional<Intruder> intruder = std::nullopt) const;

    // First argument of every atom of judgment `j` (optionally one intruder).
    std::set<std::string> firsts(Judgment j, std::optional<Intruder> intruder = std::nullopt) const;

    std::size_t count(Judgment j, std::optional<Intruder> intruder = std::nullopt) const;

    // Atoms of one intruder only.
    DerivedSet restrict(Intruder intruder) const;

    // Union; atoms already present keep their derivation.
    void merge(const DerivedSet& other);

private:
    std::vector<DerivedAtom> atoms_;
};

using FlowSet = DerivedSet;
using ReachSet = DerivedSet;
using AttackSet = DerivedSet;

/// Names of the thirteen distinct rules, grouped by judgment.
const std::vector<std::string>& rule_names();

/// Rules enabled for an intruder kind.
std::vector<std::string> enabled_rules(Intruder intruder);

/// Program text of a rule selection, one rule per line.
std::string program_text(const std::vector<std::string>& rules);

/// All wrt/rd atoms (write1..write4, read1, read2), independent of profile.
FlowSet derive_flows(const FactBase& facts);

/// Least fixpoint of the enabled reachability rules. For Profile::both the
/// outsider and insider analyses run independently and are unioned, each atom
/// tagged with its intruder.
ReachSet compute_reach(const FactBase& facts, Profile profile);
ReachSet compute_reach(const FactBase& facts, Intruder intruder);

/// attack(tp) judgments from at_out / at_ins over `reach` (which must carry
/// atoms for every intruder in `profile`).
AttackSet compute_attacks(const FactBase& facts, const ReachSet& reach, Profile profile);
AttackSet compute_attacks(const FactBase& facts, const ReachSet& reach, Intruder intruder);

/// Input atoms plus every derived atom of the full intruder program, one
/// `pred("a",...)` line each, lexicographically sorted.
std::vector<std::string> ground_dump(const FactBase& facts, Intruder intruder);

/// Evaluates the full program for `intruder` and replays every derivation;
/// returns the failures (empty when sound).
std::vector<std::string> verify_intruder_derivations(const FactBase& facts, Intruder intruder);

} // namespace soata

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace soata {

// The seventeen predicates of the intruder model. The first thirteen are
// input facts; wrt, rd, reach and attack are derived.
enum class Predicate {
    ecui,    // ecui(ecu, in_port)
    ecuo,    // ecuo(ecu, out_port)
    neti,    // neti(net, in_port)
    neto,    // neto(net, out_port)
    ch,      // ch(from_port, to_port)
    cpi,     // cpi(component, in_port)
    cpo,     // cpo(component, out_port)
    alloc,   // alloc(component_port, platform_port)
    pub,     // pub(component, out_port, topic)
    sub,     // sub(component, in_port, topic)
    flow,    // if(ecu, in_port, topic)
    pro,     // pro(topic)
    public_, // public(element, out_port)
    wrt,     // wrt(port, port)
    rd,      // rd(port, port)
    reach,   // reach(port)
    attack,  // attack(topic)
};

inline constexpr std::size_t kPredicateCount = 17;

// Name as written in rules and dumps ("if", "public", ...).
std::string_view predicate_name(Predicate p) noexcept;
std::optional<Predicate> predicate_from_name(std::string_view name) noexcept;
std::size_t predicate_arity(Predicate p) noexcept;
bool is_input_predicate(Predicate p) noexcept;

struct Atom {
    Predicate predicate;
    std::vector<std::string> args;

    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;
};

// `pred("a","b")`; arguments are always quoted so ids may contain spaces.
std::string to_string(const Atom& atom);

// Ground input atoms compiled from a validated system model.
class FactBase {
public:
    FactBase() = default;

    // Returns false if the atom was already present.
    bool insert(Atom atom);
    bool contains(const Atom& atom) const { return atoms_.contains(atom); }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    const std::set<Atom>& atoms() const noexcept { return atoms_; }
    std::vector<Atom> of(Predicate p) const;
    std::size_t count(Predicate p) const;

    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    bool operator==(const FactBase&) const = default;

private:
    std::set<Atom> atoms_;
};

} // namespace soata

#include "soata/facts.hpp"

#include <array>

namespace soata {

namespace {

struct PredicateInfo {
    std::string_view name;
    std::size_t arity;
};

constexpr std::array<PredicateInfo, kPredicateCount> kInfo{{
    {"ecui", 2},
    {"ecuo", 2},
    {"neti", 2},
    {"neto", 2},
    {"ch", 2},
    {"cpi", 2},
    {"cpo", 2},
    {"alloc", 2},
    {"pub", 3},
    {"sub", 3},
    {"if", 3},
    {"pro", 1},
    {"public", 2},
    {"wrt", 2},
    {"rd", 2},
    {"reach", 1},
    {"attack", 1},
}};

} // namespace

std::string_view predicate_name(Predicate p) noexcept {
    return kInfo[static_cast<std::size_t>(p)].name;
}

std::size_t predicate_arity(Predicate p) noexcept {
    return kInfo[static_cast<std::size_t>(p)].arity;
}

std::optional<Predicate> predicate_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kInfo.size(); ++i) {
        if (kInfo[i].name == name) {
            return static_cast<Predicate>(i);
        }
    }
    return std::nullopt;
}

bool is_input_predicate(Predicate p) noexcept {
    return static_cast<std::size_t>(p) < static_cast<std::size_t>(Predicate::wrt);
}

std::string to_string(const Atom& atom) {
    std::string out(predicate_name(atom.predicate));
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += '"';
        for (char c : atom.args[i]) {
            if (c == '"' || c == '\\') {
                out += '\\';
            }
            out += c;
        }
        out += '"';
    }
    out += ')';
    return out;
}

bool FactBase::insert(Atom atom) {
    return atoms_.insert(std::move(atom)).second;
}

std::vector<Atom> FactBase::of(Predicate p) const {
    std::vector<Atom> out;
    for (const auto& a : atoms_) {
        if (a.predicate == p) {
            out.push_back(a);
        }
    }
    return out;
}

std::size_t FactBase::count(Predicate p) const {
    std::size_t n = 0;
    for (const auto& a : atoms_) {
        n += a.predicate == p ? 1 : 0;
    }
    return n;
}

} // namespace soata

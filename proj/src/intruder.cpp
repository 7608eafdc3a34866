#include "soata/intruder.hpp"

#include "soata/error.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace soata {

std::string_view to_string(Intruder i) noexcept {
    return i == Intruder::outsider ? "outsider" : "insider";
}

std::string_view to_string(Profile p) noexcept {
    switch (p) {
    case Profile::outsider:
        return "outsider";
    case Profile::insider:
        return "insider";
    case Profile::both:
        return "both";
    }
    return "both";
}

std::optional<Profile> parse_profile(std::string_view s) noexcept {
    if (s == "outsider") {
        return Profile::outsider;
    }
    if (s == "insider") {
        return Profile::insider;
    }
    if (s == "both") {
        return Profile::both;
    }
    return std::nullopt;
}

std::vector<Intruder> intruders_of(Profile p) {
    switch (p) {
    case Profile::outsider:
        return {Intruder::outsider};
    case Profile::insider:
        return {Intruder::insider};
    case Profile::both:
        return {Intruder::outsider, Intruder::insider};
    }
    return {};
}

std::string_view to_string(Judgment j) noexcept {
    switch (j) {
    case Judgment::wrt:
        return "wrt";
    case Judgment::rd:
        return "rd";
    case Judgment::reach:
        return "reach";
    case Judgment::attack:
        return "attack";
    }
    return "";
}

// ------------------------------------------------------------ derived set

namespace {

Predicate predicate_of(Judgment j) {
    switch (j) {
    case Judgment::wrt:
        return Predicate::wrt;
    case Judgment::rd:
        return Predicate::rd;
    case Judgment::reach:
        return Predicate::reach;
    case Judgment::attack:
        return Predicate::attack;
    }
    return Predicate::attack;
}

auto key(const DerivedAtom& a) {
    return std::tie(a.judgment, a.intruder, a.args);
}

} // namespace

Atom DerivedAtom::atom() const {
    return Atom{predicate_of(judgment), args};
}

bool DerivedAtom::operator<(const DerivedAtom& o) const {
    return key(*this) < key(o);
}

bool DerivedAtom::same_conclusion(const DerivedAtom& o) const {
    return key(*this) == key(o);
}

DerivedSet::DerivedSet(std::vector<DerivedAtom> atoms) : atoms_(std::move(atoms)) {
    std::stable_sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end(),
                             [](const DerivedAtom& a, const DerivedAtom& b) { return a.same_conclusion(b); }),
                 atoms_.end());
}

bool DerivedSet::contains(Judgment j, const std::vector<std::string>& args, std::optional<Intruder> intruder) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const DerivedAtom& a) {
        return a.judgment == j && a.args == args && (!intruder || a.intruder == intruder);
    });
}

std::set<std::string> DerivedSet::firsts(Judgment j, std::optional<Intruder> intruder) const {
    std::set<std::string> out;
    for (const auto& a : atoms_) {
        if (a.judgment == j && (!intruder || a.intruder == intruder) && !a.args.empty()) {
            out.insert(a.args.front());
        }
    }
    return out;
}

std::size_t DerivedSet::count(Judgment j, std::optional<Intruder> intruder) const {
    return static_cast<std::size_t>(std::count_if(atoms_.begin(), atoms_.end(), [&](const DerivedAtom& a) {
        return a.judgment == j && (!intruder || a.intruder == intruder);
    }));
}

DerivedSet DerivedSet::restrict(Intruder intruder) const {
    std::vector<DerivedAtom> out;
    for (const auto& a : atoms_) {
        if (a.intruder == intruder) {
            out.push_back(a);
        }
    }
    return DerivedSet(std::move(out));
}

void DerivedSet::merge(const DerivedSet& other) {
    std::vector<DerivedAtom> all = atoms_;
    all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
    *this = DerivedSet(std::move(all));
}

// ------------------------------------------------------------------ rules

namespace {

struct RuleText {
    const char* name;
    const char* text;
};

// The intruder model, one rule per entry.
const RuleText kRules[] = {
    {"write1", "write1: wrt(EO,NI) :- cpo(C,CO), alloc(CO,EO), ecuo(E,EO), neti(N,NI), ch(EO,NI)."},
    {"write2", "write2: wrt(EI,EO) :- ecui(E,EI), ecuo(E,EO), ch(EI,EO)."},
    {"write3", "write3: wrt(NI,NO) :- neti(N,NI), neto(N,NO), ch(NI,NO)."},
    {"write4", "write4: wrt(PO,NI) :- public(EL,PO), neti(N,NI), ch(PO,NI)."},
    {"read1", "read1: rd(CI,CO) :- sub(C1,CI,TP), pub(C2,CO,TP)."},
    {"read2", "read2: rd(EI,NO) :- cpi(C,CI), alloc(CI,EI), ecui(E,EI), neto(N,NO), ch(NO,EI)."},
    {"basic_out", "basic_out: reach(PO) :- public(EL,PO)."},
    {"basic_ins", "basic_ins: reach(CO) :- pub(C,CO,TP)."},
    {"reach_wrt", "reach_wrt: reach(P2) :- wrt(P1,P2), reach(P1)."},
    {"reach_rd", "reach_rd: reach(P2) :- rd(P2,P1), reach(P1)."},
    {"reach_ins_rd",
     "reach_ins_rd: reach(CI) :- pub(C,CO,TP), sub(C,CI,TP1), pub(C1,CO1,TP1), rd(CI,CO1), reach(CO)."},
    {"at_out", "at_out: attack(TP) :- if(E,P,TP), reach(P)."},
    {"at_ins", "at_ins: attack(TP) :- sub(C1,CI,TP), pub(C,CO,TP), not pro(TP), reach(CI), reach(CO)."},
};

const char* rule_text(std::string_view name) {
    for (const auto& r : kRules) {
        if (name == r.name) {
            return r.text;
        }
    }
    throw std::invalid_argument("unknown rule " + std::string(name));
}

const std::vector<std::string> kFlowRules{"write1", "write2", "write3", "write4", "read1", "read2"};

std::vector<std::string> reach_rules(Intruder i) {
    if (i == Intruder::outsider) {
        return {"write1", "write2", "write3", "write4", "read1", "read2", "basic_out", "reach_wrt", "reach_rd"};
    }
    return {"read1", "basic_ins", "reach_ins_rd"};
}

std::vector<std::string> attack_rules(Intruder i) {
    return {i == Intruder::outsider ? "at_out" : "at_ins"};
}

// Programs are immutable once built and cached per rule selection so that
// databases can keep references to them.
const datalog::Program& program_for(const std::vector<std::string>& rules) {
    static std::mutex mu;
    static std::map<std::vector<std::string>, std::unique_ptr<datalog::Program>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[rules];
    if (!slot) {
        auto p = std::make_unique<datalog::Program>();
        p->add_rules(program_text(rules));
        slot = std::move(p);
    }
    return *slot;
}

void load_facts(datalog::Database& db, const FactBase& facts) {
    for (const auto& a : facts) {
        std::string_view name = predicate_name(a.predicate);
        if (db.program().find_relation(name)) {
            db.add_fact(name, a.args);
        }
    }
}

Atom to_atom(const datalog::Database& db, std::size_t relation, const datalog::Tuple& t) {
    const auto& name = db.program().relations()[relation].name;
    auto p = predicate_from_name(name);
    if (!p) {
        throw InvariantError("relation " + name + " is not a model predicate");
    }
    return Atom{*p, db.decode(t)};
}

std::vector<DerivedAtom> collect(const datalog::Database& db, Judgment j, std::optional<Intruder> intruder) {
    std::vector<DerivedAtom> out;
    auto rel = db.program().find_relation(predicate_name(predicate_of(j)));
    if (!rel) {
        return out;
    }
    const auto& tuples = db.tuples(*rel);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto* d = db.derivation(*rel, i);
        if (!d) {
            continue; // seeded input (e.g. reach atoms given to the attack stage)
        }
        DerivedAtom a;
        a.judgment = j;
        a.args = db.decode(tuples[i]);
        a.intruder = intruder;
        a.rule = db.program().rules()[d->rule].name;
        for (const auto& p : d->body) {
            (p.negated ? a.negated_premises : a.premises).push_back(to_atom(db, p.relation, p.tuple));
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace

const std::vector<std::string>& rule_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& r : kRules) {
            v.emplace_back(r.name);
        }
        return v;
    }();
    return names;
}

std::vector<std::string> enabled_rules(Intruder intruder) {
    auto rules = reach_rules(intruder);
    auto at = attack_rules(intruder);
    rules.insert(rules.end(), at.begin(), at.end());
    return rules;
}

std::string program_text(const std::vector<std::string>& rules) {
    std::string out;
    for (const auto& r : rules) {
        out += rule_text(r);
        out += '\n';
    }
    return out;
}

FlowSet derive_flows(const FactBase& facts) {
    datalog::Database db(program_for(kFlowRules));
    load_facts(db, facts);
    db.evaluate();
    auto out = collect(db, Judgment::wrt, std::nullopt);
    auto rd = collect(db, Judgment::rd, std::nullopt);
    out.insert(out.end(), rd.begin(), rd.end());
    return FlowSet(std::move(out));
}

ReachSet compute_reach(const FactBase& facts, Intruder intruder) {
    datalog::Database db(program_for(reach_rules(intruder)));
    load_facts(db, facts);
    db.evaluate();
    return ReachSet(collect(db, Judgment::reach, intruder));
}

ReachSet compute_reach(const FactBase& facts, Profile profile) {
    ReachSet out;
    for (auto i : intruders_of(profile)) {
        out.merge(compute_reach(facts, i));
    }
    return out;
}

AttackSet compute_attacks(const FactBase& facts, const ReachSet& reach, Intruder intruder) {
    datalog::Database db(program_for(attack_rules(intruder)));
    load_facts(db, facts);
    for (const auto& a : reach.atoms()) {
        if (a.judgment == Judgment::reach && a.intruder == intruder) {
            db.add_fact("reach", a.args);
        }
    }
    db.evaluate();
    return AttackSet(collect(db, Judgment::attack, intruder));
}

AttackSet compute_attacks(const FactBase& facts, const ReachSet& reach, Profile profile) {
    AttackSet out;
    for (auto i : intruders_of(profile)) {
        out.merge(compute_attacks(facts, reach, i));
    }
    return out;
}

std::vector<std::string> ground_dump(const FactBase& facts, Intruder intruder) {
    datalog::Database db(program_for(enabled_rules(intruder)));
    // Every input atom is dumped, including predicates the program ignores.
    std::vector<std::string> lines;
    for (const auto& a : facts) {
        if (!db.program().find_relation(predicate_name(a.predicate))) {
            lines.push_back(to_string(a));
        }
    }
    load_facts(db, facts);
    db.evaluate();
    auto derived = db.dump();
    lines.insert(lines.end(), derived.begin(), derived.end());
    std::sort(lines.begin(), lines.end());
    return lines;
}

std::vector<std::string> verify_intruder_derivations(const FactBase& facts, Intruder intruder) {
    datalog::Database db(program_for(enabled_rules(intruder)));
    load_facts(db, facts);
    db.evaluate();
    return db.verify_derivations();
}

} // namespace soata

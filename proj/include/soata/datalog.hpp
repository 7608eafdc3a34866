#pragma once

// A small bottom-up Datalog evaluator: positive rules plus negation on lower
// strata, semi-naive iteration, per-column hash indices, and one recorded
// derivation per derived tuple.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace soata::datalog {

using Symbol = std::uint32_t;
using Tuple = std::vector<Symbol>;

struct Term {
    enum class Kind { variable, constant };
    Kind kind;
    std::uint32_t variable = 0; // index into Rule::variables
    std::string constant;

    bool is_variable() const noexcept { return kind == Kind::variable; }
};

struct Literal {
    std::size_t relation = 0;
    std::vector<Term> terms;
    bool negated = false;
};

struct Rule {
    std::string name;
    Literal head;
    std::vector<Literal> body;
    std::vector<std::string> variables;
};

struct RelationDecl {
    std::string name;
    std::size_t arity;
};

class Program {
public:
    // Declares a relation, or returns the existing id. Throws on arity clash.
    std::size_t relation(std::string_view name, std::size_t arity);
    std::optional<std::size_t> find_relation(std::string_view name) const;

    // Parses `name: head(X,Y) :- a(X,Z), not b(Z), c(Z,Y).` Several rules may
    // be given in one string; `%` starts a comment. Relations are declared on
    // first use. Throws std::invalid_argument on syntax or safety errors.
    void add_rules(std::string_view text);

    const std::vector<RelationDecl>& relations() const noexcept { return relations_; }
    const std::vector<Rule>& rules() const noexcept { return rules_; }
    std::optional<std::size_t> find_rule(std::string_view name) const;

    // Stratum per relation. Throws std::invalid_argument when negation is
    // recursive.
    std::vector<std::size_t> strata() const;

    std::string to_string(const Rule& rule) const;
    std::string to_string() const;

private:
    void add_rule(Rule rule);

    std::vector<RelationDecl> relations_;
    std::vector<Rule> rules_;
};

class SymbolTable {
public:
    Symbol intern(std::string_view s);
    std::optional<Symbol> find(std::string_view s) const;
    const std::string& name(Symbol s) const { return names_.at(s); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol> ids_;
};

struct Premise {
    std::size_t relation;
    Tuple tuple;
    bool negated = false;
    std::size_t index = 0; // position in the relation; positive premises only
};

struct Derivation {
    std::size_t rule;
    std::vector<Premise> body; // one per body literal, in rule order
};

struct EvalStats {
    std::size_t strata = 0;
    std::size_t rounds = 0;
    std::size_t derived = 0;
};

class Database {
public:
    explicit Database(const Program& program);

    // Adds an input tuple; returns false if already present.
    bool add_fact(std::string_view relation, const std::vector<std::string>& args);

    // Runs every stratum to its least fixpoint. Safe to call again after more
    // facts are added.
    EvalStats evaluate();

    const Program& program() const noexcept { return program_; }
    const SymbolTable& symbols() const noexcept { return symbols_; }

    std::size_t relation_id(std::string_view name) const;
    const std::vector<Tuple>& tuples(std::size_t relation) const { return relations_.at(relation).tuples; }
    bool contains(std::size_t relation, const Tuple& t) const;
    std::vector<std::string> decode(const Tuple& t) const;

    // nullptr for input tuples.
    const Derivation* derivation(std::size_t relation, std::size_t index) const;

    // Replays every recorded derivation against its rule: each body premise
    // must match the literal under one consistent binding, positive premises
    // must be present and older than the conclusion, negated ones absent.
    // Returns human-readable failures; empty means every tree is sound.
    std::vector<std::string> verify_derivations() const;

    // One `rel("a","b")` line per tuple of every relation, sorted.
    std::vector<std::string> dump() const;

private:
    struct TupleHash {
        std::size_t operator()(const Tuple& t) const noexcept;
    };

    struct Relation {
        std::size_t arity = 0;
        std::vector<Tuple> tuples;
        std::vector<std::optional<Derivation>> derivations;
        std::vector<std::size_t> sequence;
        std::unordered_map<Tuple, std::size_t, TupleHash> lookup;
        std::vector<std::unordered_map<Symbol, std::vector<std::size_t>>> columns;
    };

    struct Range {
        std::size_t lo;
        std::size_t hi;
    };

    struct Pending {
        std::size_t relation;
        Tuple tuple;
        Derivation derivation;
    };

    class Matcher;
    friend class Matcher;

    bool insert(std::size_t relation, Tuple t, std::optional<Derivation> d);
    void eval_rule(std::size_t rule, std::optional<std::size_t> delta_literal, const std::vector<Range>& full,
                   const std::vector<Range>& delta, std::vector<Pending>& pending,
                   std::vector<std::unordered_map<Tuple, std::size_t, TupleHash>>& queued) const;

    const Program& program_;
    SymbolTable symbols_;
    std::vector<Relation> relations_;
    std::vector<std::vector<std::vector<Symbol>>> rule_symbols_; // [rule][0 = head, i + 1 = body i][term]
    std::size_t next_sequence_ = 0;
};

} // namespace soata::datalog

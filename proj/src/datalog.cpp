#include "soata/datalog.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <stdexcept>

namespace soata::datalog {

// ---------------------------------------------------------------- program

std::size_t Program::relation(std::string_view name, std::size_t arity) {
    if (auto id = find_relation(name)) {
        if (relations_[*id].arity != arity) {
            throw std::invalid_argument("relation " + std::string(name) + " used with arity " +
                                        std::to_string(arity) + " and " + std::to_string(relations_[*id].arity));
        }
        return *id;
    }
    relations_.push_back({std::string(name), arity});
    return relations_.size() - 1;
}

std::optional<std::size_t> Program::find_relation(std::string_view name) const {
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        if (relations_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> Program::find_rule(std::string_view name) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

namespace {

struct Token {
    enum class Kind { ident, string, lparen, rparen, comma, dot, colon, implies, end };
    Kind kind;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip();
        if (pos_ >= src_.size()) {
            return {Token::Kind::end, ""};
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            return {Token::Kind::ident, std::string(src_.substr(start, pos_ - start))};
        }
        if (c == '"') {
            std::string text;
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    ++pos_;
                }
                text += src_[pos_++];
            }
            if (pos_ >= src_.size()) {
                throw std::invalid_argument("unterminated string in rule text");
            }
            ++pos_;
            return {Token::Kind::string, text};
        }
        ++pos_;
        switch (c) {
        case '(':
            return {Token::Kind::lparen, "("};
        case ')':
            return {Token::Kind::rparen, ")"};
        case ',':
            return {Token::Kind::comma, ","};
        case '.':
            return {Token::Kind::dot, "."};
        case ':':
            if (pos_ < src_.size() && src_[pos_] == '-') {
                ++pos_;
                return {Token::Kind::implies, ":-"};
            }
            return {Token::Kind::colon, ":"};
        default:
            throw std::invalid_argument(std::string("unexpected character '") + c + "' in rule text");
        }
    }

private:
    void skip() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            } else if (src_[pos_] == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, Program& program) : lex_(src), program_(program) { advance(); }

    std::optional<Rule> rule() {
        if (tok_.kind == Token::Kind::end) {
            return std::nullopt;
        }
        Rule r;
        variables_.clear();
        std::string first = expect_ident();
        if (tok_.kind == Token::Kind::colon) {
            advance();
            r.name = first;
            first = expect_ident();
        }
        r.head = atom(first);
        if (tok_.kind == Token::Kind::implies) {
            advance();
            while (true) {
                bool negated = false;
                std::string name = expect_ident();
                if (name == "not" && tok_.kind == Token::Kind::ident) {
                    negated = true;
                    name = expect_ident();
                }
                Literal lit = atom(name);
                lit.negated = negated;
                r.body.push_back(std::move(lit));
                if (tok_.kind != Token::Kind::comma) {
                    break;
                }
                advance();
            }
        }
        expect(Token::Kind::dot, "'.'");
        r.variables = variables_;
        return r;
    }

private:
    void advance() { tok_ = lex_.next(); }

    void expect(Token::Kind k, const char* what) {
        if (tok_.kind != k) {
            throw std::invalid_argument(std::string("expected ") + what + " but found '" + tok_.text + "'");
        }
        advance();
    }

    std::string expect_ident() {
        if (tok_.kind != Token::Kind::ident) {
            throw std::invalid_argument("expected identifier but found '" + tok_.text + "'");
        }
        std::string s = tok_.text;
        advance();
        return s;
    }

    Literal atom(const std::string& name) {
        std::vector<Term> terms;
        expect(Token::Kind::lparen, "'('");
        while (true) {
            if (tok_.kind == Token::Kind::string) {
                terms.push_back({Term::Kind::constant, 0, tok_.text});
                advance();
            } else {
                std::string id = expect_ident();
                if (std::isupper(static_cast<unsigned char>(id[0])) || id[0] == '_') {
                    terms.push_back({Term::Kind::variable, variable(id), {}});
                } else {
                    terms.push_back({Term::Kind::constant, 0, id});
                }
            }
            if (tok_.kind != Token::Kind::comma) {
                break;
            }
            advance();
        }
        expect(Token::Kind::rparen, "')'");
        Literal lit;
        lit.relation = program_.relation(name, terms.size());
        lit.terms = std::move(terms);
        return lit;
    }

    std::uint32_t variable(const std::string& name) {
        auto it = std::find(variables_.begin(), variables_.end(), name);
        if (it != variables_.end()) {
            return static_cast<std::uint32_t>(it - variables_.begin());
        }
        variables_.push_back(name);
        return static_cast<std::uint32_t>(variables_.size() - 1);
    }

    Lexer lex_;
    Program& program_;
    Token tok_;
    std::vector<std::string> variables_;
};

} // namespace

void Program::add_rules(std::string_view text) {
    Parser parser(text, *this);
    while (auto r = parser.rule()) {
        add_rule(std::move(*r));
    }
}

void Program::add_rule(Rule rule) {
    // Range restriction: every head or negated variable must occur in a
    // positive body literal.
    std::set<std::uint32_t> positive;
    for (const auto& lit : rule.body) {
        if (!lit.negated) {
            for (const auto& t : lit.terms) {
                if (t.is_variable()) {
                    positive.insert(t.variable);
                }
            }
        }
    }
    auto check = [&](const Literal& lit, const char* where) {
        for (const auto& t : lit.terms) {
            if (t.is_variable() && !positive.contains(t.variable)) {
                throw std::invalid_argument("rule " + rule.name + ": variable " + rule.variables[t.variable] +
                                            " in " + where + " is not bound by a positive body literal");
            }
        }
    };
    check(rule.head, "head");
    for (const auto& lit : rule.body) {
        if (lit.negated) {
            check(lit, "negated literal");
        }
    }
    if (rule.name.empty()) {
        rule.name = "r" + std::to_string(rules_.size());
    }
    if (find_rule(rule.name)) {
        throw std::invalid_argument("duplicate rule name " + rule.name);
    }
    rules_.push_back(std::move(rule));
}

std::vector<std::size_t> Program::strata() const {
    std::vector<std::size_t> s(relations_.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : rules_) {
            for (const auto& lit : r.body) {
                std::size_t need = s[lit.relation] + (lit.negated ? 1 : 0);
                if (s[r.head.relation] < need) {
                    s[r.head.relation] = need;
                    changed = true;
                    if (need > relations_.size()) {
                        throw std::invalid_argument("program is not stratifiable: negation through recursion at " +
                                                    relations_[r.head.relation].name);
                    }
                }
            }
        }
    }
    return s;
}

std::string Program::to_string(const Rule& rule) const {
    auto literal = [&](const Literal& lit) {
        std::string out = lit.negated ? "not " : "";
        out += relations_[lit.relation].name + "(";
        for (std::size_t i = 0; i < lit.terms.size(); ++i) {
            if (i > 0) {
                out += ",";
            }
            const auto& t = lit.terms[i];
            out += t.is_variable() ? rule.variables[t.variable] : "\"" + t.constant + "\"";
        }
        return out + ")";
    };
    std::string out = rule.name + ": " + literal(rule.head);
    if (!rule.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            out += (i > 0 ? ", " : "") + literal(rule.body[i]);
        }
    }
    return out + ".";
}

std::string Program::to_string() const {
    std::string out;
    for (const auto& r : rules_) {
        out += to_string(r) + "\n";
    }
    return out;
}

// ----------------------------------------------------------------- symbols

Symbol SymbolTable::intern(std::string_view s) {
    auto it = ids_.find(std::string(s));
    if (it != ids_.end()) {
        return it->second;
    }
    auto id = static_cast<Symbol>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<Symbol> SymbolTable::find(std::string_view s) const {
    auto it = ids_.find(std::string(s));
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

// ---------------------------------------------------------------- database

std::size_t Database::TupleHash::operator()(const Tuple& t) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Symbol s : t) {
        h ^= s + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

Database::Database(const Program& program) : program_(program) {
    for (const auto& decl : program.relations()) {
        Relation r;
        r.arity = decl.arity;
        r.columns.resize(decl.arity);
        relations_.push_back(std::move(r));
    }
    for (const auto& rule : program.rules()) {
        std::vector<std::vector<Symbol>> per_literal;
        auto intern_literal = [&](const Literal& lit) {
            std::vector<Symbol> syms;
            for (const auto& t : lit.terms) {
                syms.push_back(t.is_variable() ? 0 : symbols_.intern(t.constant));
            }
            per_literal.push_back(std::move(syms));
        };
        intern_literal(rule.head);
        for (const auto& lit : rule.body) {
            intern_literal(lit);
        }
        rule_symbols_.push_back(std::move(per_literal));
    }
}

std::size_t Database::relation_id(std::string_view name) const {
    auto id = program_.find_relation(name);
    if (!id) {
        throw std::invalid_argument("unknown relation " + std::string(name));
    }
    return *id;
}

bool Database::add_fact(std::string_view relation, const std::vector<std::string>& args) {
    std::size_t rel = relation_id(relation);
    if (args.size() != relations_[rel].arity) {
        throw std::invalid_argument("arity mismatch adding fact to " + std::string(relation));
    }
    Tuple t;
    t.reserve(args.size());
    for (const auto& a : args) {
        t.push_back(symbols_.intern(a));
    }
    return insert(rel, std::move(t), std::nullopt);
}

bool Database::insert(std::size_t rel, Tuple t, std::optional<Derivation> d) {
    Relation& r = relations_[rel];
    if (r.lookup.contains(t)) {
        return false;
    }
    std::size_t idx = r.tuples.size();
    for (std::size_t c = 0; c < t.size(); ++c) {
        r.columns[c][t[c]].push_back(idx);
    }
    r.lookup.emplace(t, idx);
    r.tuples.push_back(std::move(t));
    r.derivations.push_back(std::move(d));
    r.sequence.push_back(next_sequence_++);
    return true;
}

bool Database::contains(std::size_t rel, const Tuple& t) const {
    return relations_.at(rel).lookup.contains(t);
}

std::vector<std::string> Database::decode(const Tuple& t) const {
    std::vector<std::string> out;
    out.reserve(t.size());
    for (Symbol s : t) {
        out.push_back(symbols_.name(s));
    }
    return out;
}

const Derivation* Database::derivation(std::size_t rel, std::size_t index) const {
    const auto& d = relations_.at(rel).derivations.at(index);
    return d ? &*d : nullptr;
}

namespace {
constexpr Symbol kUnbound = std::numeric_limits<Symbol>::max();
} // namespace

// Nested-loop join over one rule with a fixed literal order.
class Database::Matcher {
public:
    Matcher(const Database& db, std::size_t rule, std::optional<std::size_t> delta_literal,
            const std::vector<Range>& full, const std::vector<Range>& delta, std::vector<Pending>& pending,
            std::vector<std::unordered_map<Tuple, std::size_t, TupleHash>>& queued)
        : db_(db), rule_(db.program_.rules()[rule]), rule_index_(rule), syms_(db.rule_symbols_[rule]),
          delta_literal_(delta_literal), full_(full), delta_(delta), pending_(pending), queued_(queued),
          binding_(rule_.variables.size(), kUnbound), premises_(rule_.body.size()) {
        order_ = literal_order();
    }

    void run() { step(0); }

private:
    std::vector<std::size_t> literal_order() const {
        std::vector<std::size_t> order;
        std::vector<bool> used(rule_.body.size(), false);
        std::vector<bool> bound(rule_.variables.size(), false);
        auto take = [&](std::size_t i) {
            used[i] = true;
            order.push_back(i);
            for (const auto& t : rule_.body[i].terms) {
                if (t.is_variable()) {
                    bound[t.variable] = true;
                }
            }
        };
        if (delta_literal_) {
            take(*delta_literal_);
        }
        while (true) {
            std::optional<std::size_t> best;
            int best_score = -1;
            for (std::size_t i = 0; i < rule_.body.size(); ++i) {
                if (used[i] || rule_.body[i].negated) {
                    continue;
                }
                int score = 0;
                for (const auto& t : rule_.body[i].terms) {
                    score += (!t.is_variable() || bound[t.variable]) ? 1 : 0;
                }
                if (score > best_score) {
                    best_score = score;
                    best = i;
                }
            }
            if (!best) {
                break;
            }
            take(*best);
        }
        for (std::size_t i = 0; i < rule_.body.size(); ++i) {
            if (!used[i]) {
                order.push_back(i);
            }
        }
        return order;
    }

    Tuple instantiate(std::size_t literal_slot, const Literal& lit) const {
        Tuple t(lit.terms.size());
        for (std::size_t c = 0; c < lit.terms.size(); ++c) {
            t[c] = lit.terms[c].is_variable() ? binding_[lit.terms[c].variable] : syms_[literal_slot][c];
        }
        return t;
    }

    void step(std::size_t k) {
        if (k == order_.size()) {
            emit();
            return;
        }
        std::size_t pos = order_[k];
        const Literal& lit = rule_.body[pos];
        const Relation& rel = db_.relations_[lit.relation];

        if (lit.negated) {
            Tuple t = instantiate(pos + 1, lit);
            if (rel.lookup.contains(t)) {
                return;
            }
            premises_[pos] = Premise{lit.relation, std::move(t), true, 0};
            step(k + 1);
            return;
        }

        Range range = (delta_literal_ && *delta_literal_ == pos) ? delta_[lit.relation] : full_[lit.relation];
        if (range.lo >= range.hi) {
            return;
        }

        // Use the index of the first bound column, if any.
        std::optional<std::size_t> key_col;
        Symbol key = kUnbound;
        for (std::size_t c = 0; c < lit.terms.size() && !key_col; ++c) {
            const Term& t = lit.terms[c];
            Symbol v = t.is_variable() ? binding_[t.variable] : syms_[pos + 1][c];
            if (v != kUnbound) {
                key_col = c;
                key = v;
            }
        }

        if (key_col) {
            auto it = rel.columns[*key_col].find(key);
            if (it == rel.columns[*key_col].end()) {
                return;
            }
            const auto& idxs = it->second;
            for (auto p = std::lower_bound(idxs.begin(), idxs.end(), range.lo); p != idxs.end() && *p < range.hi;
                 ++p) {
                try_tuple(k, pos, lit, rel, *p);
            }
        } else {
            for (std::size_t i = range.lo; i < range.hi; ++i) {
                try_tuple(k, pos, lit, rel, i);
            }
        }
    }

    void try_tuple(std::size_t k, std::size_t pos, const Literal& lit, const Relation& rel, std::size_t idx) {
        const Tuple& t = rel.tuples[idx];
        std::vector<std::uint32_t> newly;
        bool ok = true;
        for (std::size_t c = 0; c < lit.terms.size() && ok; ++c) {
            const Term& term = lit.terms[c];
            if (!term.is_variable()) {
                ok = syms_[pos + 1][c] == t[c];
            } else if (binding_[term.variable] == kUnbound) {
                binding_[term.variable] = t[c];
                newly.push_back(term.variable);
            } else {
                ok = binding_[term.variable] == t[c];
            }
        }
        if (ok) {
            premises_[pos] = Premise{lit.relation, t, false, idx};
            step(k + 1);
        }
        for (auto v : newly) {
            binding_[v] = kUnbound;
        }
    }

    void emit() {
        Tuple head = instantiate(0, rule_.head);
        std::size_t rel = rule_.head.relation;
        if (db_.relations_[rel].lookup.contains(head) || queued_[rel].contains(head)) {
            return;
        }
        queued_[rel].emplace(head, pending_.size());
        pending_.push_back(Pending{rel, std::move(head), Derivation{rule_index_, premises_}});
    }

    const Database& db_;
    const Rule& rule_;
    std::size_t rule_index_;
    const std::vector<std::vector<Symbol>>& syms_;
    std::optional<std::size_t> delta_literal_;
    const std::vector<Range>& full_;
    const std::vector<Range>& delta_;
    std::vector<Pending>& pending_;
    std::vector<std::unordered_map<Tuple, std::size_t, TupleHash>>& queued_;
    std::vector<Symbol> binding_;
    std::vector<Premise> premises_;
    std::vector<std::size_t> order_;
};

void Database::eval_rule(std::size_t rule, std::optional<std::size_t> delta_literal, const std::vector<Range>& full,
                         const std::vector<Range>& delta, std::vector<Pending>& pending,
                         std::vector<std::unordered_map<Tuple, std::size_t, TupleHash>>& queued) const {
    Matcher(*this, rule, delta_literal, full, delta, pending, queued).run();
}

EvalStats Database::evaluate() {
    const auto strata = program_.strata();
    const auto& rules = program_.rules();
    std::size_t top = 0;
    for (const auto& r : rules) {
        top = std::max(top, strata[r.head.relation]);
    }

    EvalStats stats;
    stats.strata = rules.empty() ? 0 : top + 1;
    const std::size_t nrel = relations_.size();

    for (std::size_t s = 0; s <= top && !rules.empty(); ++s) {
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (strata[rules[i].head.relation] == s) {
                active.push_back(i);
            }
        }
        if (active.empty()) {
            continue;
        }

        std::vector<Range> full(nrel);
        std::vector<Range> delta(nrel, Range{0, 0});
        auto snapshot = [&] {
            for (std::size_t r = 0; r < nrel; ++r) {
                full[r] = Range{0, relations_[r].tuples.size()};
            }
        };
        auto commit = [&](std::vector<Pending>& pending) {
            std::vector<std::size_t> before(nrel);
            for (std::size_t r = 0; r < nrel; ++r) {
                before[r] = relations_[r].tuples.size();
            }
            for (auto& p : pending) {
                if (insert(p.relation, std::move(p.tuple), std::move(p.derivation))) {
                    ++stats.derived;
                }
            }
            bool any = false;
            for (std::size_t r = 0; r < nrel; ++r) {
                delta[r] = Range{before[r], relations_[r].tuples.size()};
                any = any || delta[r].hi > delta[r].lo;
            }
            return any;
        };

        // First round: every active rule against the full relations.
        snapshot();
        std::vector<Pending> pending;
        std::vector<std::unordered_map<Tuple, std::size_t, TupleHash>> queued(nrel);
        for (std::size_t ri : active) {
            eval_rule(ri, std::nullopt, full, delta, pending, queued);
        }
        ++stats.rounds;
        bool changed = commit(pending);

        // Semi-naive rounds: one body literal of the current stratum reads
        // only the previous round's new tuples.
        while (changed) {
            snapshot();
            pending.clear();
            queued.assign(nrel, {});
            for (std::size_t ri : active) {
                const Rule& r = rules[ri];
                for (std::size_t pos = 0; pos < r.body.size(); ++pos) {
                    const Literal& lit = r.body[pos];
                    if (lit.negated || strata[lit.relation] != s || delta[lit.relation].lo >= delta[lit.relation].hi) {
                        continue;
                    }
                    eval_rule(ri, pos, full, delta, pending, queued);
                }
            }
            ++stats.rounds;
            changed = commit(pending);
        }
    }
    return stats;
}

std::vector<std::string> Database::verify_derivations() const {
    std::vector<std::string> failures;
    const auto& rules = program_.rules();
    for (std::size_t rel = 0; rel < relations_.size(); ++rel) {
        const Relation& r = relations_[rel];
        for (std::size_t idx = 0; idx < r.tuples.size(); ++idx) {
            if (!r.derivations[idx]) {
                continue;
            }
            const Derivation& d = *r.derivations[idx];
            std::string where = program_.relations()[rel].name + " tuple " + std::to_string(idx);
            if (d.rule >= rules.size()) {
                failures.push_back(where + ": unknown rule");
                continue;
            }
            const Rule& rule = rules[d.rule];
            const auto& syms = rule_symbols_[d.rule];
            std::vector<Symbol> binding(rule.variables.size(), kUnbound);
            bool ok = rule.head.relation == rel && d.body.size() == rule.body.size();
            auto unify = [&](const Literal& lit, std::size_t slot, const Tuple& t) {
                if (t.size() != lit.terms.size()) {
                    return false;
                }
                for (std::size_t c = 0; c < t.size(); ++c) {
                    const Term& term = lit.terms[c];
                    if (!term.is_variable()) {
                        if (syms[slot][c] != t[c]) {
                            return false;
                        }
                    } else if (binding[term.variable] == kUnbound) {
                        binding[term.variable] = t[c];
                    } else if (binding[term.variable] != t[c]) {
                        return false;
                    }
                }
                return true;
            };
            for (std::size_t i = 0; ok && i < rule.body.size(); ++i) {
                const Literal& lit = rule.body[i];
                const Premise& p = d.body[i];
                if (p.relation != lit.relation || p.negated != lit.negated) {
                    ok = false;
                    break;
                }
                if (!lit.negated) {
                    const Relation& pr = relations_[p.relation];
                    ok = p.index < pr.tuples.size() && pr.tuples[p.index] == p.tuple &&
                         pr.sequence[p.index] < r.sequence[idx];
                }
                ok = ok && unify(lit, i + 1, p.tuple);
            }
            for (std::size_t i = 0; ok && i < rule.body.size(); ++i) {
                if (rule.body[i].negated) {
                    ok = !relations_[d.body[i].relation].lookup.contains(d.body[i].tuple);
                }
            }
            ok = ok && unify(rule.head, 0, r.tuples[idx]);
            if (!ok) {
                failures.push_back(where + ": derivation does not replay under rule " + rule.name);
            }
        }
    }
    return failures;
}

std::vector<std::string> Database::dump() const {
    std::vector<std::string> lines;
    for (std::size_t rel = 0; rel < relations_.size(); ++rel) {
        for (const auto& t : relations_[rel].tuples) {
            std::string line = program_.relations()[rel].name + "(";
            for (std::size_t c = 0; c < t.size(); ++c) {
                line += (c > 0 ? ",\"" : "\"");
                for (char ch : symbols_.name(t[c])) {
                    if (ch == '"' || ch == '\\') {
                        line += '\\';
                    }
                    line += ch;
                }
                line += '"';
            }
            lines.push_back(line + ")");
        }
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

} // namespace soata::datalog

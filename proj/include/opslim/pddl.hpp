#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace opslim::pddl {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string &msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                             std::to_string(col_)),
          line(line_),
          col(col_) {}
};

struct Atom {
    std::string pred;
    std::vector<std::string> args;

    auto operator<=>(const Atom &) const = default;
};

struct Condition {
    Atom atom;
    bool negated = false;
};

struct TypedName {
    std::string name;
    std::string type;
};

struct ActionDef {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Condition> preconditions;
    std::vector<Condition> effects;  // negated entries are deletes
    long long cost = 0;
};

struct PredicateDef {
    std::string name;
    std::vector<TypedName> params;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    std::map<std::string, std::string> type_parent;  // every type's parent, root "object"
    std::vector<PredicateDef> predicates;
    bool has_total_cost = false;
    std::vector<ActionDef> actions;

    bool is_subtype(const std::string &t, const std::string &ancestor) const {
        if (ancestor == "object") return true;
        std::string cur = t;
        while (true) {
            if (cur == ancestor) return true;
            auto it = type_parent.find(cur);
            if (it == type_parent.end() || it->second == cur) return cur == ancestor;
            cur = it->second;
            if (cur == "object") return ancestor == "object";
        }
    }

    const PredicateDef *find_predicate(const std::string &name) const {
        for (const auto &p : predicates)
            if (p.name == name) return &p;
        return nullptr;
    }
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;
    std::vector<Atom> goal;
    bool metric_total_cost = false;
};

// ---- S-expression reader ----------------------------------------------------

namespace detail {

struct SExpr {
    bool is_list = false;
    std::string sym;
    std::vector<SExpr> items;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string &text;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string &t) : text(t) {}

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    SExpr read() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", line, col);
        SExpr e;
        e.line = line;
        e.col = col;
        char c = text[pos];
        if (c == '(') {
            advance();
            e.is_list = true;
            while (true) {
                skip_ws();
                if (pos >= text.size())
                    throw ParseError("missing ')' for list opened", e.line, e.col);
                if (text[pos] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        if (c == ')') throw ParseError("unexpected ')'", line, col);
        while (pos < text.size()) {
            c = text[pos];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
                break;
            e.sym += c;
            advance();
        }
        return e;
    }
};

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline bool sym_is(const SExpr &e, const char *kw) {
    return !e.is_list && lower(e.sym) == kw;
}

inline const SExpr &expect_list(const SExpr &e, const char *what) {
    if (!e.is_list) throw ParseError(std::string("expected ") + what, e.line, e.col);
    return e;
}

inline const std::string &expect_sym(const SExpr &e, const char *what) {
    if (e.is_list) throw ParseError(std::string("expected ") + what, e.line, e.col);
    return e.sym;
}

// "n1 n2 - t1 n3 - t2" → [(n1,t1),(n2,t1),(n3,t2)]; names without a type
// get default_type.
inline std::vector<TypedName> parse_typed_list(const std::vector<SExpr> &items, size_t from,
                                               const std::string &default_type) {
    std::vector<TypedName> out;
    std::vector<size_t> pending;
    for (size_t i = from; i < items.size(); ++i) {
        const std::string &s = expect_sym(items[i], "name in typed list");
        if (s == "-") {
            if (i + 1 >= items.size())
                throw ParseError("missing type after '-'", items[i].line, items[i].col);
            const std::string &type = expect_sym(items[i + 1], "type name");
            for (size_t p : pending) out.push_back({items[p].sym, type});
            pending.clear();
            ++i;
        } else {
            pending.push_back(i);
        }
    }
    for (size_t p : pending) out.push_back({items[p].sym, default_type});
    return out;
}

inline Atom parse_atom(const SExpr &e) {
    const SExpr &l = expect_list(e, "atom");
    if (l.items.empty()) throw ParseError("empty atom", e.line, e.col);
    Atom a;
    a.pred = expect_sym(l.items[0], "predicate name");
    for (size_t i = 1; i < l.items.size(); ++i)
        a.args.push_back(expect_sym(l.items[i], "atom argument"));
    return a;
}

inline void reject_construct(const SExpr &e, const std::string &head) {
    static const std::map<std::string, std::string> known = {
        {"when", "conditional effects (:conditional-effects) are not supported"},
        {"forall", "universal quantification is not supported"},
        {"exists", "existential quantification is not supported"},
        {"or", "disjunctive conditions are not supported"},
        {"imply", "implications are not supported"},
        {"oneof", "nondeterministic effects are not supported"},
    };
    auto it = known.find(head);
    if (it != known.end()) throw ParseError(it->second, e.line, e.col);
}

inline void parse_condition(const SExpr &e, std::vector<Condition> &out, bool allow_neg) {
    const SExpr &l = expect_list(e, "condition");
    if (l.items.empty()) return;  // "(and)" / "()" → empty condition
    const std::string head = lower(expect_sym(l.items[0], "condition head"));
    reject_construct(e, head);
    if (head == "and") {
        for (size_t i = 1; i < l.items.size(); ++i) parse_condition(l.items[i], out, allow_neg);
        return;
    }
    if (head == "not") {
        if (!allow_neg)
            throw ParseError("negation is not allowed here", e.line, e.col);
        if (l.items.size() != 2)
            throw ParseError("'not' takes exactly one atom", e.line, e.col);
        out.push_back({parse_atom(l.items[1]), true});
        return;
    }
    out.push_back({parse_atom(e), false});
}

inline long long parse_increase(const SExpr &e) {
    // (increase (total-cost) N)
    const SExpr &l = e;
    if (l.items.size() != 3)
        throw ParseError("'increase' takes a function and an amount", e.line, e.col);
    const SExpr &fn = expect_list(l.items[1], "(total-cost)");
    if (fn.items.size() != 1 || !sym_is(fn.items[0], "total-cost"))
        throw ParseError("only (total-cost) may be increased", l.items[1].line, l.items[1].col);
    const std::string &num = expect_sym(l.items[2], "integer amount");
    try {
        size_t used = 0;
        long long v = std::stoll(num, &used);
        if (used != num.size() || v < 0) throw std::invalid_argument(num);
        return v;
    } catch (const std::exception &) {
        throw ParseError("cost must be a nonnegative integer, got '" + num + "'",
                         l.items[2].line, l.items[2].col);
    }
}

}  // namespace detail

// ---- Domain / problem parsing ----------------------------------------------

inline const std::set<std::string> kSupportedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":action-costs"};

inline Domain parse_domain(const std::string &text) {
    using namespace detail;
    Lexer lex(text);
    SExpr root = lex.read();
    if (!lex.eof()) throw ParseError("trailing input after domain", lex.line, lex.col);
    expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !sym_is(root.items[0], "define"))
        throw ParseError("expected (define (domain ...) ...)", root.line, root.col);
    const SExpr &dom = expect_list(root.items[1], "(domain NAME)");
    if (dom.items.size() != 2 || !sym_is(dom.items[0], "domain"))
        throw ParseError("expected (domain NAME)", root.items[1].line, root.items[1].col);

    Domain d;
    d.name = expect_sym(dom.items[1], "domain name");
    d.type_parent["object"] = "object";

    for (size_t si = 2; si < root.items.size(); ++si) {
        const SExpr &sec = expect_list(root.items[si], "domain section");
        if (sec.items.empty()) throw ParseError("empty domain section", sec.line, sec.col);
        const std::string head = lower(expect_sym(sec.items[0], "section keyword"));

        if (head == ":requirements") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                std::string req = lower(expect_sym(sec.items[i], "requirement"));
                if (!kSupportedRequirements.count(req))
                    throw ParseError("unsupported requirement " + req, sec.items[i].line,
                                     sec.items[i].col);
                d.requirements.push_back(req);
            }
        } else if (head == ":types") {
            for (const auto &tn : parse_typed_list(sec.items, 1, "object")) {
                d.type_parent[tn.name] = tn.type;
                if (!d.type_parent.count(tn.type)) d.type_parent[tn.type] = "object";
            }
        } else if (head == ":predicates") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                const SExpr &p = expect_list(sec.items[i], "predicate declaration");
                if (p.items.empty())
                    throw ParseError("empty predicate declaration", p.line, p.col);
                PredicateDef pd;
                pd.name = expect_sym(p.items[0], "predicate name");
                pd.params = parse_typed_list(p.items, 1, "object");
                for (const auto &v : pd.params)
                    if (v.name.empty() || v.name[0] != '?')
                        throw ParseError("predicate parameters must be variables", p.line,
                                         p.col);
                d.predicates.push_back(std::move(pd));
            }
        } else if (head == ":functions") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                if (!sec.items[i].is_list && sec.items[i].sym == "-") {
                    ++i;  // "- number"
                    continue;
                }
                const SExpr &fn = expect_list(sec.items[i], "function declaration");
                if (fn.items.size() != 1 || !sym_is(fn.items[0], "total-cost"))
                    throw ParseError("only (total-cost) is supported", fn.line, fn.col);
                d.has_total_cost = true;
            }
        } else if (head == ":action") {
            if (sec.items.size() < 2)
                throw ParseError("action without a name", sec.line, sec.col);
            ActionDef a;
            a.name = expect_sym(sec.items[1], "action name");
            bool saw_cost = false;
            for (size_t i = 2; i < sec.items.size(); ++i) {
                const std::string key = lower(expect_sym(sec.items[i], "action keyword"));
                if (i + 1 >= sec.items.size())
                    throw ParseError("missing value after " + key, sec.items[i].line,
                                     sec.items[i].col);
                const SExpr &val = sec.items[i + 1];
                ++i;
                if (key == ":parameters") {
                    const SExpr &pl = expect_list(val, "parameter list");
                    a.params = parse_typed_list(pl.items, 0, "object");
                    for (const auto &v : a.params)
                        if (v.name.empty() || v.name[0] != '?')
                            throw ParseError("action parameters must be variables", pl.line,
                                             pl.col);
                } else if (key == ":precondition") {
                    parse_condition(val, a.preconditions, true);
                } else if (key == ":effect") {
                    const SExpr &el = expect_list(val, "effect");
                    std::vector<const SExpr *> effs;
                    if (!el.items.empty() && sym_is(el.items[0], "and")) {
                        for (size_t k = 1; k < el.items.size(); ++k)
                            effs.push_back(&el.items[k]);
                    } else {
                        effs.push_back(&el);
                    }
                    for (const SExpr *ee : effs) {
                        const SExpr &eff = expect_list(*ee, "effect element");
                        if (eff.items.empty())
                            throw ParseError("empty effect", eff.line, eff.col);
                        const std::string ehead = lower(expect_sym(eff.items[0], "effect head"));
                        reject_construct(eff, ehead);
                        if (ehead == "increase") {
                            if (saw_cost)
                                throw ParseError("duplicate cost effect", eff.line, eff.col);
                            a.cost = parse_increase(eff);
                            saw_cost = true;
                        } else if (ehead == "not") {
                            if (eff.items.size() != 2)
                                throw ParseError("'not' takes exactly one atom", eff.line,
                                                 eff.col);
                            a.effects.push_back({parse_atom(eff.items[1]), true});
                        } else {
                            a.effects.push_back({parse_atom(eff), false});
                        }
                    }
                } else {
                    throw ParseError("unknown action keyword " + key, sec.items[i - 1].line,
                                     sec.items[i - 1].col);
                }
            }
            d.actions.push_back(std::move(a));
        } else {
            throw ParseError("unsupported domain section " + head, sec.line, sec.col);
        }
    }

    // Semantic checks: known predicates, arities, declared variables, types.
    for (const ActionDef &a : d.actions) {
        std::map<std::string, std::string> var_type;
        for (const auto &v : a.params) {
            if (!d.type_parent.count(v.type))
                throw ParseError("unknown type " + v.type + " in action " + a.name, 0, 0);
            var_type[v.name] = v.type;
        }
        auto check = [&](const std::vector<Condition> &conds, const char *where) {
            for (const Condition &c : conds) {
                const PredicateDef *pd = d.find_predicate(c.atom.pred);
                if (!pd)
                    throw std::runtime_error("action " + a.name + ": unknown predicate '" +
                                             c.atom.pred + "' in " + where);
                if (pd->params.size() != c.atom.args.size())
                    throw std::runtime_error("action " + a.name + ": predicate '" +
                                             c.atom.pred + "' expects " +
                                             std::to_string(pd->params.size()) +
                                             " arguments in " + where);
                for (const auto &arg : c.atom.args)
                    if (!arg.empty() && arg[0] == '?' && !var_type.count(arg))
                        throw std::runtime_error("action " + a.name + ": variable " + arg +
                                                 " is not a parameter");
            }
        };
        check(a.preconditions, "precondition");
        check(a.effects, "effect");
    }
    return d;
}

inline Problem parse_problem(const std::string &text) {
    using namespace detail;
    Lexer lex(text);
    SExpr root = lex.read();
    if (!lex.eof()) throw ParseError("trailing input after problem", lex.line, lex.col);
    expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !sym_is(root.items[0], "define"))
        throw ParseError("expected (define (problem ...) ...)", root.line, root.col);
    const SExpr &prob = expect_list(root.items[1], "(problem NAME)");
    if (prob.items.size() != 2 || !sym_is(prob.items[0], "problem"))
        throw ParseError("expected (problem NAME)", root.items[1].line, root.items[1].col);

    Problem p;
    p.name = expect_sym(prob.items[1], "problem name");

    for (size_t si = 2; si < root.items.size(); ++si) {
        const SExpr &sec = expect_list(root.items[si], "problem section");
        if (sec.items.empty()) throw ParseError("empty problem section", sec.line, sec.col);
        const std::string head = lower(expect_sym(sec.items[0], "section keyword"));

        if (head == ":domain") {
            if (sec.items.size() != 2)
                throw ParseError(":domain takes one name", sec.line, sec.col);
            p.domain_name = expect_sym(sec.items[1], "domain name");
        } else if (head == ":objects") {
            p.objects = parse_typed_list(sec.items, 1, "object");
        } else if (head == ":init") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                const SExpr &e = expect_list(sec.items[i], "init element");
                if (!e.items.empty() && sym_is(e.items[0], "=")) continue;  // (= (total-cost) 0)
                if (!e.items.empty() && sym_is(e.items[0], "not"))
                    throw ParseError("negative init literals are not supported", e.line, e.col);
                p.init.push_back(parse_atom(e));
            }
        } else if (head == ":goal") {
            if (sec.items.size() != 2)
                throw ParseError(":goal takes one condition", sec.line, sec.col);
            std::vector<Condition> conds;
            parse_condition(sec.items[1], conds, false);
            for (const auto &c : conds) p.goal.push_back(c.atom);
        } else if (head == ":metric") {
            p.metric_total_cost = true;  // only (minimize (total-cost)) is emitted
        } else {
            throw ParseError("unsupported problem section " + head, sec.line, sec.col);
        }
    }
    return p;
}

}  // namespace opslim::pddl

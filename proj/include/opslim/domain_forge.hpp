#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/operators.hpp"
#include "opslim/pddl.hpp"

namespace opslim {

struct CostConfig {
    long long lambda = 100;
    long long min_cost = 1;  // floor applied to the raw formula value
};

// Inverse-frequency action cost: ceil(lambda * (1 - count/type_total)),
// floored at min_cost. Exact integer arithmetic.
inline long long cost(long long op_count, long long op_type_count, const CostConfig &cfg = {}) {
    if (cfg.lambda < 1) throw std::runtime_error("cost: lambda must be >= 1");
    if (op_type_count <= 0) throw std::runtime_error("cost: zero type count");
    if (op_count < 1 || op_count > op_type_count)
        throw std::runtime_error("cost: op_count out of range [1, op_type_count]");
    long long numer = cfg.lambda * (op_type_count - op_count);
    long long raw = (numer + op_type_count - 1) / op_type_count;  // ceil
    return std::max(cfg.min_cost, raw);
}

struct CostedOperator {
    LiftedOperator op;
    long long cost = 0;
};

struct DomainSubset {
    int prio = 1;
    std::vector<CostedOperator> operators;

    size_t size() const { return operators.size(); }
};

// The prio deepest distinct count values of every activity type; count ties
// are included wholesale. prio beyond the rank depth yields the full library.
inline DomainSubset operator_subset(const OperatorLibrary &library, int prio,
                                    const CostConfig &cfg = {}) {
    if (prio < 1) throw std::runtime_error("operator_subset: prio must be >= 1");
    if (library.operators.empty()) throw std::runtime_error("operator_subset: empty library");

    auto totals = library.type_totals();
    std::map<Activity, std::vector<long long>> distinct;
    for (const auto &op : library.operators) distinct[op.activity].push_back(op.count);
    std::map<Activity, long long> threshold;  // include counts >= threshold
    for (auto &[type, cs] : distinct) {
        std::sort(cs.begin(), cs.end(), std::greater<>());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        size_t rank = std::min(static_cast<size_t>(prio), cs.size());
        threshold[type] = cs[rank - 1];
    }

    DomainSubset subset;
    subset.prio = prio;
    std::vector<size_t> picked;
    for (size_t i = 0; i < library.operators.size(); ++i)
        if (library.operators[i].count >= threshold[library.operators[i].activity])
            picked.push_back(i);
    // Stable order: activity, then count descending, then name.
    std::sort(picked.begin(), picked.end(), [&](size_t a, size_t b) {
        const auto &oa = library.operators[a], &ob = library.operators[b];
        if (oa.activity != ob.activity) return oa.activity < ob.activity;
        if (oa.count != ob.count) return oa.count > ob.count;
        return oa.name < ob.name;
    });
    for (size_t i : picked) {
        const auto &op = library.operators[i];
        subset.operators.push_back({op, cost(op.count, totals.at(op.activity), cfg)});
    }
    return subset;
}

// ---- PDDL emission -----------------------------------------------------------

namespace forge_detail {

inline const std::vector<pddl::PredicateDef> &predicate_defs() {
    static const std::vector<pddl::PredicateDef> defs = {
        {"inHand", {{"?h", "hand"}, {"?c", "cube"}}},
        {"actedOn", {{"?h", "hand"}, {"?c", "cube"}}},
        {"handMove", {{"?h", "hand"}}},
        {"graspable", {{"?h", "hand"}, {"?c", "cube"}}},
        {"handOpen", {{"?h", "hand"}}},
        {"inTouch", {{"?a", "thing"}, {"?b", "thing"}}},
        {"onTop", {{"?a", "thing"}, {"?b", "thing"}}},
    };
    return defs;
}

inline std::string atom_str(const Literal &l) {
    std::string s = "(";
    s += to_string(l.pred);
    for (const auto &a : l.args) s += " " + a;
    s += ")";
    if (l.negated) s = "(not " + s + ")";
    return s;
}

}  // namespace forge_detail

inline std::string emit_domain(const DomainSubset &subset, const std::string &name) {
    if (subset.operators.empty()) throw std::runtime_error("emit_domain: empty subset");
    for (const auto &co : subset.operators) validate_operator(co.op);

    std::string out;
    out += "(define (domain " + name + ")\n";
    out += "  (:requirements :strips :typing :negative-preconditions :action-costs)\n";
    out += "  (:types hand cube table - thing)\n";
    out += "  (:predicates\n";
    const auto &defs = forge_detail::predicate_defs();
    for (size_t i = 0; i < defs.size(); ++i) {
        out += "    (" + defs[i].name;
        for (const auto &p : defs[i].params) out += " " + p.name + " - " + p.type;
        out += ")";
        out += (i + 1 < defs.size()) ? "\n" : ")\n";
    }
    out += "  (:functions (total-cost) - number)\n";
    for (const auto &[op, op_cost] : subset.operators) {
        out += "  (:action " + op.name + "\n";
        out += "    :parameters (";
        for (size_t i = 0; i < op.params.size(); ++i) {
            if (i) out += " ";
            out += op.params[i].name + " - " + to_string(op.params[i].type);
        }
        out += ")\n";
        out += "    :precondition (and";
        for (const Literal &l : op.preconditions) out += " " + forge_detail::atom_str(l);
        out += ")\n";
        out += "    :effect (and";
        for (const Literal &l : op.effects) out += " " + forge_detail::atom_str(l);
        out += " (increase (total-cost) " + std::to_string(op_cost) + "))";
        out += ")\n";
    }
    out += ")\n";
    return out;
}

struct TypedObject {
    std::string id;
    ObjType type = ObjType::Thing;
};

struct ProblemSpec {
    std::string name;
    std::string domain_name;
    std::vector<TypedObject> objects;
    std::vector<Literal> init;  // positive ground literals
    std::vector<Literal> goal;  // positive ground literals
};

namespace forge_detail {

inline void check_problem(const ProblemSpec &p) {
    if (p.goal.empty()) throw std::runtime_error("emit_problem: empty goal");
    std::set<std::string> ids;
    for (const auto &o : p.objects) ids.insert(o.id);
    auto check_lits = [&](const std::vector<Literal> &lits, const char *where) {
        for (const Literal &l : lits) {
            if (l.negated)
                throw std::runtime_error(std::string("emit_problem: negative literal in ") +
                                         where);
            for (const auto &a : l.args) {
                if (is_variable(a))
                    throw std::runtime_error(std::string("emit_problem: non-ground ") + where);
                if (!ids.count(a))
                    throw std::runtime_error(std::string("emit_problem: unknown object '") + a +
                                             "' in " + where);
            }
        }
    };
    check_lits(p.init, "init");
    check_lits(p.goal, "goal");
}

}  // namespace forge_detail

inline std::string emit_problem(const ProblemSpec &p) {
    forge_detail::check_problem(p);
    std::string out;
    out += "(define (problem " + p.name + ")\n";
    out += "  (:domain " + p.domain_name + ")\n";
    out += "  (:objects";
    for (size_t i = 0; i < p.objects.size(); ++i) {
        out += " " + p.objects[i].id;
        if (i + 1 == p.objects.size() || p.objects[i + 1].type != p.objects[i].type)
            out += std::string(" - ") + to_string(p.objects[i].type);
    }
    out += ")\n";
    out += "  (:init\n";
    for (const Literal &l : p.init) out += "    " + forge_detail::atom_str(l) + "\n";
    out += "    (= (total-cost) 0))\n";
    out += "  (:goal (and";
    for (const Literal &l : p.goal) out += " " + forge_detail::atom_str(l);
    out += "))\n";
    out += "  (:metric minimize (total-cost)))\n";
    return out;
}

// Direct in-memory construction of the parser's model; the text-free twin of
// emit_domain/emit_problem used to cross-check the emit→parse path.
inline pddl::Domain build_domain_model(const DomainSubset &subset, const std::string &name) {
    if (subset.operators.empty()) throw std::runtime_error("build_domain_model: empty subset");
    pddl::Domain d;
    d.name = name;
    d.requirements = {":strips", ":typing", ":negative-preconditions", ":action-costs"};
    d.type_parent = {{"object", "object"},
                     {"thing", "object"},
                     {"hand", "thing"},
                     {"cube", "thing"},
                     {"table", "thing"}};
    d.predicates = forge_detail::predicate_defs();
    d.has_total_cost = true;
    for (const auto &[op, op_cost] : subset.operators) {
        validate_operator(op);
        pddl::ActionDef a;
        a.name = op.name;
        for (const auto &v : op.params) a.params.push_back({v.name, to_string(v.type)});
        for (const Literal &l : op.preconditions)
            a.preconditions.push_back({{to_string(l.pred), l.args}, l.negated});
        for (const Literal &l : op.effects)
            a.effects.push_back({{to_string(l.pred), l.args}, l.negated});
        a.cost = op_cost;
        d.actions.push_back(std::move(a));
    }
    return d;
}

inline pddl::Problem build_problem_model(const ProblemSpec &p) {
    forge_detail::check_problem(p);
    pddl::Problem out;
    out.name = p.name;
    out.domain_name = p.domain_name;
    for (const auto &o : p.objects) out.objects.push_back({o.id, to_string(o.type)});
    for (const Literal &l : p.init) out.init.push_back({to_string(l.pred), l.args});
    for (const Literal &l : p.goal) out.goal.push_back({to_string(l.pred), l.args});
    out.metric_total_cost = true;
    return out;
}

}  // namespace opslim

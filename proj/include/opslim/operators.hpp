#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/activity.hpp"
#include "opslim/literal.hpp"

namespace opslim {

// An action schema learned from demonstrations, in alpha-canonical form:
// params ordered acting-hand-first, literals sorted, variable names assigned
// by the canonicalization in learning.hpp. Two operators are the same
// configuration iff activity, preconditions and effects compare equal.
struct LiftedOperator {
    std::string name;  // assigned by the library ("Put", "Put2", ...)
    Activity activity = Activity::Idle;
    std::vector<TypedVar> params;
    std::vector<Literal> preconditions;
    std::vector<Literal> effects;
    long long count = 0;

    bool same_config(const LiftedOperator &o) const {
        return activity == o.activity && params == o.params &&
               preconditions == o.preconditions && effects == o.effects;
    }
};

inline void validate_operator(const LiftedOperator &op) {
    for (const auto &lits : {op.preconditions, op.effects})
        for (const Literal &l : lits) {
            if (static_cast<int>(l.args.size()) != predicate_arity(l.pred))
                throw std::runtime_error("operator " + op.name + ": arity mismatch in " + l.str());
            for (const auto &a : l.args) {
                if (!is_variable(a)) continue;
                bool bound = std::any_of(op.params.begin(), op.params.end(),
                                         [&](const TypedVar &v) { return v.name == a; });
                if (!bound)
                    throw std::runtime_error("operator " + op.name + ": unbound variable " + a);
            }
        }
    for (const Literal &e : op.effects) {
        Literal same = e;
        if (std::find(op.preconditions.begin(), op.preconditions.end(), same) !=
            op.preconditions.end())
            throw std::runtime_error("operator " + op.name + ": redundant effect " + e.str());
    }
}

struct OperatorLibrary {
    std::vector<LiftedOperator> operators;  // insertion order

    std::map<Activity, long long> type_totals() const {
        std::map<Activity, long long> totals;
        for (const auto &op : operators) totals[op.activity] += op.count;
        return totals;
    }

    long long total_count() const {
        long long n = 0;
        for (const auto &op : operators) n += op.count;
        return n;
    }

    // Merge one fresh observation. Identity is the canonical configuration;
    // a repeated configuration bumps its counter, a new one is appended.
    void merge(LiftedOperator op) {
        if (op.count != 1) throw std::runtime_error("merge expects a single observation");
        for (auto &existing : operators) {
            if (existing.same_config(op)) {
                ++existing.count;
                assign_names();
                return;
            }
        }
        validate_operator(op);
        operators.push_back(std::move(op));
        assign_names();
    }

    // Names follow observation frequency: the most seen configuration of a
    // type carries the bare type name, the rest get 2, 3, ... suffixes in
    // descending-count order (insertion order breaks ties).
    void assign_names() {
        std::map<Activity, std::vector<size_t>> by_type;
        for (size_t i = 0; i < operators.size(); ++i)
            by_type[operators[i].activity].push_back(i);
        for (auto &[type, idxs] : by_type) {
            std::stable_sort(idxs.begin(), idxs.end(), [&](size_t a, size_t b) {
                return operators[a].count > operators[b].count;
            });
            for (size_t rank = 0; rank < idxs.size(); ++rank) {
                std::string name = to_string(type);
                if (rank > 0) name += std::to_string(rank + 1);
                operators[idxs[rank]].name = std::move(name);
            }
        }
    }

    // Number of distinct count values of the most diverse type; the rank
    // depth at which subsets stop growing.
    int max_rank_depth() const {
        std::map<Activity, std::vector<long long>> counts;
        for (const auto &op : operators) counts[op.activity].push_back(op.count);
        int depth = 0;
        for (auto &[type, cs] : counts) {
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            depth = std::max(depth, static_cast<int>(cs.size()));
        }
        return depth;
    }
};

}  // namespace opslim

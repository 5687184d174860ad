#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/ground.hpp"

namespace opslim {

inline constexpr long long kInfinity = std::numeric_limits<long long>::max() / 4;

class Heuristic {
  public:
    virtual ~Heuristic() = default;
    virtual long long evaluate(const State &s) = 0;
    virtual const char *name() const = 0;
};

class BlindHeuristic final : public Heuristic {
  public:
    explicit BlindHeuristic(const GroundedTask &) {}
    long long evaluate(const State &) override { return 0; }
    const char *name() const override { return "blind"; }
};

namespace hdetail {

// Shared h-max machinery: generalized Dijkstra over the delete relaxation
// with a bucket queue (costs are small integers). Buffers live across
// evaluations; LM-cut re-runs it with mutated costs.
struct HMaxCore {
    const GroundedTask &task;
    std::vector<std::vector<int>> consumers;  // fact → actions with fact in pre
    std::vector<long long> fact_h;
    std::vector<int> unsat;           // per action: unmet precondition count
    std::vector<long long> action_h;  // cost[a] + max pre h once triggered
    std::vector<std::vector<int>> buckets;
    std::vector<char> goal_mark;

    explicit HMaxCore(const GroundedTask &t) : task(t), consumers(t.num_facts()) {
        for (size_t i = 0; i < t.actions.size(); ++i)
            for (int f : t.actions[i].pre) consumers[f].push_back(static_cast<int>(i));
        goal_mark.assign(t.num_facts(), 0);
        for (int g : t.goal) goal_mark[g] = 1;
    }

    // Computes fact_h/action_h for state s under the given costs. Returns the
    // h-max over goal facts (kInfinity when delete-relaxed unreachable).
    // When stop_at_goal is set the fixpoint ends as soon as every goal fact
    // is finalized; LM-cut needs the full annotation and passes false.
    long long run(const State &s, const std::vector<long long> &costs,
                  bool stop_at_goal = false) {
        const size_t nf = task.num_facts();
        const size_t na = task.actions.size();
        fact_h.assign(nf, kInfinity);
        action_h.assign(na, kInfinity);
        unsat.resize(na);
        for (auto &b : buckets) b.clear();

        auto push = [&](long long h, int f) {
            if (h > (1 << 22))
                throw std::runtime_error("h-max: cost scale too large for the bucket queue");
            if (buckets.size() <= static_cast<size_t>(h))
                buckets.resize(static_cast<size_t>(h) + 1);
            buckets[static_cast<size_t>(h)].push_back(f);
        };
        auto trigger = [&](int ai, long long base) {
            long long val = base + costs[ai];
            if (val >= action_h[ai]) return;
            action_h[ai] = val;
            for (int g : task.actions[ai].add)
                if (val < fact_h[g]) {
                    fact_h[g] = val;
                    push(val, g);
                }
        };

        for (size_t i = 0; i < na; ++i) unsat[i] = static_cast<int>(task.actions[i].pre.size());
        int goals_open = 0;
        for (int g : task.goal)
            if (!s.test(g)) ++goals_open;
        if (goals_open == 0 && stop_at_goal) return 0;
        for (size_t f = 0; f < nf; ++f)
            if (s.test(static_cast<int>(f))) {
                fact_h[f] = 0;
                push(0, static_cast<int>(f));
            }
        for (size_t i = 0; i < na; ++i)
            if (unsat[i] == 0) trigger(static_cast<int>(i), 0);

        long long goal_h = 0;
        for (size_t h = 0; h < buckets.size(); ++h) {
            for (size_t k = 0; k < buckets[h].size(); ++k) {  // buckets[h] may grow
                int f = buckets[h][k];
                if (static_cast<long long>(h) > fact_h[f]) continue;  // stale
                if (goal_mark[f] && fact_h[f] == static_cast<long long>(h) && !s.test(f)) {
                    goal_h = static_cast<long long>(h);
                    if (--goals_open == 0 && stop_at_goal) {
                        for (size_t j = h; j < buckets.size(); ++j) buckets[j].clear();
                        return goal_h;
                    }
                }
                for (int ai : consumers[f])
                    if (--unsat[ai] == 0) trigger(ai, static_cast<long long>(h));
            }
            buckets[h].clear();
        }
        return goals_open > 0 ? kInfinity : goal_h;
    }
};

}  // namespace hdetail

class HMaxHeuristic final : public Heuristic {
  public:
    explicit HMaxHeuristic(const GroundedTask &task) : core_(task), costs_(task.actions.size()) {
        for (size_t i = 0; i < task.actions.size(); ++i) costs_[i] = task.actions[i].cost;
    }

    long long evaluate(const State &s) override { return core_.run(s, costs_, true); }
    const char *name() const override { return "hmax"; }

  private:
    hdetail::HMaxCore core_;
    std::vector<long long> costs_;
};

// Landmark-cut: repeatedly extract a disjunctive action landmark as a cut in
// the justification graph of the h-max-annotated delete relaxation, charge
// its cheapest member, reduce costs, and repeat until h-max hits zero. The
// precondition-choice function takes the h-max-maximal precondition, ties
// broken by lowest fact index — pinned because the choice changes values.
class LmCutHeuristic final : public Heuristic {
  public:
    explicit LmCutHeuristic(const GroundedTask &task)
        : task_(task), core_(task), adders_(task.num_facts()) {
        for (size_t i = 0; i < task.actions.size(); ++i)
            for (int f : task.actions[i].add) adders_[f].push_back(static_cast<int>(i));
        pcf_.resize(task.actions.size());
        pcf_next_.resize(task.actions.size());
        pcf_head_.resize(task.num_facts());
        in_zone_.resize(task.num_facts());
        visited_.resize(task.num_facts());
    }

    long long evaluate(const State &s) override {
        const size_t na = task_.actions.size();
        const size_t nf = task_.num_facts();
        costs_.assign(na, 0);
        for (size_t i = 0; i < na; ++i) costs_[i] = task_.actions[i].cost;

        long long total = 0;
        for (int round = 0;; ++round) {
            long long hmax = core_.run(s, costs_);
            if (hmax >= kInfinity) return kInfinity;
            if (hmax == 0) break;
            if (round > 4 * static_cast<int>(na) + 64)
                throw std::runtime_error("lmcut: cut extraction failed to converge");

            // pcf per relaxed-reachable action, gathered into per-fact
            // intrusive lists for the forward sweep.
            std::fill(pcf_head_.begin(), pcf_head_.end(), -1);
            for (size_t i = 0; i < na; ++i) {
                pcf_[i] = -1;
                if (core_.action_h[i] >= kInfinity) continue;
                long long best = -1;
                int arg = -1;
                for (int f : task_.actions[i].pre) {
                    long long h = core_.fact_h[f];
                    if (h > best || (h == best && (arg == -1 || f < arg))) {
                        best = h;
                        arg = f;
                    }
                }
                pcf_[i] = arg;  // -1 only for empty preconditions
                if (arg >= 0) {
                    pcf_next_[i] = pcf_head_[arg];
                    pcf_head_[arg] = static_cast<int>(i);
                }
            }
            // Virtual end action: pre = goal facts, cost 0.
            int pcf_end = -1;
            long long best = -1;
            for (int f : task_.goal)
                if (core_.fact_h[f] > best) {
                    best = core_.fact_h[f];
                    pcf_end = f;
                }

            // Goal zone: facts that reach the virtual goal through zero-cost
            // justification edges.
            std::fill(in_zone_.begin(), in_zone_.end(), 0);
            stack_.clear();
            auto add_zone = [&](int f) {
                if (f >= 0 && !in_zone_[f]) {
                    in_zone_[f] = 1;
                    stack_.push_back(f);
                }
            };
            add_zone(pcf_end);
            while (!stack_.empty()) {
                int f = stack_.back();
                stack_.pop_back();
                for (int ai : adders_[f])
                    if (costs_[ai] == 0 && pcf_[ai] >= 0 && core_.action_h[ai] < kInfinity)
                        add_zone(pcf_[ai]);
            }

            // Forward sweep from the state over pcf edges; actions whose add
            // effects enter the zone form the cut.
            std::fill(visited_.begin(), visited_.end(), 0);
            cut_.clear();
            stack_.clear();
            auto visit = [&](int f) {
                if (!visited_[f] && !in_zone_[f]) {
                    visited_[f] = 1;
                    stack_.push_back(f);
                }
            };
            for (size_t f = 0; f < nf; ++f)
                if (s.test(static_cast<int>(f))) visit(static_cast<int>(f));
            while (!stack_.empty()) {
                int f = stack_.back();
                stack_.pop_back();
                for (int ai = pcf_head_[f]; ai >= 0; ai = pcf_next_[ai]) {
                    bool crosses = false;
                    for (int g : task_.actions[ai].add)
                        if (in_zone_[g]) {
                            crosses = true;
                            break;
                        }
                    if (crosses) cut_.push_back(ai);
                    for (int g : task_.actions[ai].add) visit(g);
                }
            }
            // Actions without preconditions hang off the virtual start fact.
            for (size_t i = 0; i < na; ++i) {
                if (pcf_[i] != -1 || core_.action_h[i] >= kInfinity) continue;
                for (int g : task_.actions[i].add)
                    if (in_zone_[g]) {
                        cut_.push_back(static_cast<int>(i));
                        break;
                    }
            }
            if (cut_.empty())
                throw std::runtime_error("lmcut: empty cut with positive h-max");

            long long m = kInfinity;
            for (int ai : cut_) m = std::min(m, costs_[ai]);
            total += m;
            for (int ai : cut_) costs_[ai] -= m;
        }
        return total;
    }

    const char *name() const override { return "lmcut"; }

  private:
    const GroundedTask &task_;
    hdetail::HMaxCore core_;
    std::vector<std::vector<int>> adders_;
    std::vector<long long> costs_;
    std::vector<int> pcf_, pcf_next_, pcf_head_;
    std::vector<char> in_zone_, visited_;
    std::vector<int> stack_, cut_;
};

inline std::unique_ptr<Heuristic> make_heuristic(const std::string &name,
                                                 const GroundedTask &task) {
    if (name == "blind") return std::make_unique<BlindHeuristic>(task);
    if (name == "hmax") return std::make_unique<HMaxHeuristic>(task);
    if (name == "lmcut") return std::make_unique<LmCutHeuristic>(task);
    throw std::runtime_error("unknown heuristic '" + name + "' (blind, hmax, lmcut)");
}

// Convenience wrappers matching the operation-level interface.
inline long long h_max(const GroundedTask &task, const State &s) {
    return HMaxHeuristic(task).evaluate(s);
}
inline long long h_lmcut(const GroundedTask &task, const State &s) {
    return LmCutHeuristic(task).evaluate(s);
}

}  // namespace opslim

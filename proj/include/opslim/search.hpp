#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "opslim/ground.hpp"
#include "opslim/heuristics.hpp"

namespace opslim {

struct SearchResult {
    bool found = false;
    std::vector<std::string> plan;
    long long plan_cost = 0;
    long long expansions = 0;
    long long generated = 0;
    double search_seconds = 0.0;
    double grounding_seconds = 0.0;  // filled by callers that time grounding
    bool timed_out = false;
};

struct SearchLimits {
    double timeout_seconds = 0.0;  // 0: none
};

// A* with admissible heuristics and deferred evaluation: successors enter
// the queue under the lower bound g + max(0, h(parent) - cost) and get their
// own heuristic value on first pop, re-entering if it rises. That keeps one
// evaluation per visited state instead of one per generated edge, and stays
// optimal because push keys never overestimate. LM-cut is not consistent, so
// closed states reopen whenever a cheaper path appears. Tie-breaking on
// equal f is lower h first, then FIFO, which pins expansion counts for
// reproducibility.
inline SearchResult astar(const GroundedTask &task, Heuristic &heuristic,
                          const SearchLimits &limits = {}) {
    using Clock = std::chrono::steady_clock;
    const auto start_time = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - start_time).count();
    };

    SearchResult res;
    // Sound shortcut: a goal that is unreachable even in the delete
    // relaxation is unreachable outright.
    if (!task.relaxed_goal_reachable) {
        res.search_seconds = elapsed();
        return res;
    }

    struct Node {
        const State *state = nullptr;
        long long g = 0;
        long long h = -1;  // -1: not evaluated yet
        int parent = -1;
        int via_action = -1;
    };
    struct OpenEntry {
        long long f, h_key, order;
        int node;
        long long g;
        bool operator>(const OpenEntry &o) const {
            if (f != o.f) return f > o.f;
            if (h_key != o.h_key) return h_key > o.h_key;
            return order > o.order;
        }
    };

    std::unordered_map<State, int, StateHash> ids;
    std::deque<Node> nodes;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    long long push_order = 0;

    auto intern = [&](State &&s) -> std::pair<int, bool> {
        auto [it, inserted] = ids.try_emplace(std::move(s), static_cast<int>(nodes.size()));
        if (inserted) {
            nodes.push_back({});
            nodes.back().state = &it->first;
        }
        return {it->second, inserted};
    };

    State init = task.initial_state();
    auto [root, root_fresh] = intern(std::move(init));
    (void)root_fresh;
    nodes[root].g = 0;
    nodes[root].h = heuristic.evaluate(*nodes[root].state);
    ++res.generated;
    if (nodes[root].h >= kInfinity) {
        res.search_seconds = elapsed();
        return res;
    }
    open.push({nodes[root].g + nodes[root].h, nodes[root].h, push_order++, root, 0});

    long long checks = 0;
    int goal_node = -1;
    while (!open.empty()) {
        OpenEntry top = open.top();
        open.pop();
        Node &node = nodes[top.node];
        if (top.g > node.g) continue;  // stale entry

        if ((++checks & 1023) == 0 && limits.timeout_seconds > 0.0 &&
            elapsed() > limits.timeout_seconds) {
            res.timed_out = true;
            res.search_seconds = elapsed();
            return res;
        }
        if (node.h < 0) {
            node.h = heuristic.evaluate(*node.state);
            if (node.h >= kInfinity) continue;  // dead end
            if (node.g + node.h > top.f) {      // estimate was low: requeue
                open.push({node.g + node.h, node.h, push_order++, top.node, node.g});
                continue;
            }
        } else if (node.g + node.h > top.f) {
            // reopened entry pushed before h was known
            open.push({node.g + node.h, node.h, push_order++, top.node, node.g});
            continue;
        }

        ++res.expansions;
        if (task.goal_satisfied(*node.state)) {
            goal_node = top.node;
            break;
        }

        const long long parent_h = node.h;
        for (size_t ai = 0; ai < task.actions.size(); ++ai) {
            const GroundAction &a = task.actions[ai];
            if (!a.applicable(*node.state)) continue;
            State succ = a.apply(*node.state);
            long long g2 = node.g + a.cost;
            auto [sid, fresh] = intern(std::move(succ));
            Node &snode = nodes[sid];
            if (!fresh && g2 >= snode.g) continue;
            snode.g = g2;
            snode.parent = top.node;
            snode.via_action = static_cast<int>(ai);
            if (snode.h >= kInfinity) continue;  // known dead end
            long long h_key = snode.h >= 0 ? snode.h : std::max(0LL, parent_h - a.cost);
            ++res.generated;
            open.push({g2 + h_key, h_key, push_order++, sid, g2});
        }
    }

    res.search_seconds = elapsed();
    if (goal_node < 0) return res;

    res.found = true;
    res.plan_cost = nodes[goal_node].g;
    for (int n = goal_node; nodes[n].parent >= 0; n = nodes[n].parent)
        res.plan.push_back(task.actions[nodes[n].via_action].name);
    std::reverse(res.plan.begin(), res.plan.end());
    return res;
}

struct ValidationResult {
    bool valid = false;
    long long cost = 0;
    int failed_step = -1;  // -1: none; plan.size(): goal violation
    std::string message;
};

// Simulates a plan from the initial state; valid iff every precondition
// holds stepwise and the goal holds at the end.
inline ValidationResult validate(const GroundedTask &task,
                                 const std::vector<std::string> &plan) {
    std::unordered_map<std::string, int> by_name;
    for (size_t i = 0; i < task.actions.size(); ++i)
        by_name.emplace(task.actions[i].name, static_cast<int>(i));

    ValidationResult r;
    State s = task.initial_state();
    for (size_t step = 0; step < plan.size(); ++step) {
        auto it = by_name.find(plan[step]);
        if (it == by_name.end())
            throw std::runtime_error("validate: unknown action name " + plan[step]);
        const GroundAction &a = task.actions[it->second];
        if (!a.applicable(s)) {
            r.failed_step = static_cast<int>(step);
            r.message = "precondition violated at step " + std::to_string(step) + ": " + a.name;
            return r;
        }
        s = a.apply(s);
        r.cost += a.cost;
    }
    if (!task.goal_satisfied(s)) {
        r.failed_step = static_cast<int>(plan.size());
        r.message = "goal not satisfied after final step";
        return r;
    }
    r.valid = true;
    return r;
}

// Plan text: one action per line plus a trailing cost comment.
inline std::string format_plan(const SearchResult &res) {
    std::string out;
    for (const auto &step : res.plan) out += step + "\n";
    out += "; cost = " + std::to_string(res.plan_cost) + "\n";
    return out;
}

}  // namespace opslim

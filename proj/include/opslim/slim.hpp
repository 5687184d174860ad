#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/domain_forge.hpp"
#include "opslim/ground.hpp"
#include "opslim/heuristics.hpp"
#include "opslim/search.hpp"

namespace opslim {

// ---- Goal ladder -------------------------------------------------------------

// Tower problems over n cubes on a table, single hand: the goal of height h
// stacks cube2..cubeh onto cube1 in a column.
inline ProblemSpec make_tower_problem(int height, int n_cubes = 6,
                                      const std::string &hand = "left") {
    if (height < 2 || height > n_cubes)
        throw std::runtime_error("make_tower_problem: height must be in [2, n_cubes]");
    ProblemSpec p;
    p.name = "tower" + std::to_string(height);
    p.domain_name = "learned";
    p.objects.push_back({hand, ObjType::Hand});
    for (int i = 1; i <= n_cubes; ++i)
        p.objects.push_back({"cube" + std::to_string(i), ObjType::Cube});
    p.objects.push_back({"table1", ObjType::Table});
    for (int i = 1; i <= n_cubes; ++i) {
        std::string c = "cube" + std::to_string(i);
        p.init.push_back(lit(Predicate::OnTop, {c, "table1"}));
        p.init.push_back(lit(Predicate::InTouch, {c, "table1"}));
    }
    p.init.push_back(lit(Predicate::HandOpen, {hand}));
    for (int i = 1; i < height; ++i)
        p.goal.push_back(lit(Predicate::OnTop,
                             {"cube" + std::to_string(i + 1), "cube" + std::to_string(i)}));
    return p;
}

inline std::vector<ProblemSpec> goal_ladder(int n_cubes = 6) {
    std::vector<ProblemSpec> ladder;
    for (int h = 2; h <= n_cubes; ++h) ladder.push_back(make_tower_problem(h, n_cubes));
    return ladder;
}

// ---- Iterative domain expansion ----------------------------------------------

struct SlimIteration {
    int prio = 0;
    size_t domain_size = 0;
    SearchResult search;
};

struct SlimResult {
    bool found = false;
    std::vector<std::string> plan;
    long long plan_cost = 0;
    int prio_used = 0;
    std::vector<SlimIteration> iterations;
};

// Emits the prio subset as PDDL, grounds it against the problem and searches;
// on failure the subset is widened one rank at a time. Unlike the unbounded
// loop this terminates: once prio exceeds the library's rank depth the goal
// is reported unreachable with the full iteration history attached.
inline SlimResult slim_plan(const OperatorLibrary &library, const ProblemSpec &problem,
                            const std::string &heuristic_name, const CostConfig &cost_cfg = {},
                            int max_prio = 0, const SearchLimits &limits = {}) {
    if (library.operators.empty()) throw std::runtime_error("slim_plan: empty library");
    int depth = library.max_rank_depth();
    if (max_prio <= 0 || max_prio > depth) max_prio = depth;

    SlimResult result;
    for (int prio = 1; prio <= max_prio; ++prio) {
        DomainSubset subset = operator_subset(library, prio, cost_cfg);
        std::string domain_text = emit_domain(subset, problem.domain_name);
        std::string problem_text = emit_problem(problem);

        auto t0 = std::chrono::steady_clock::now();
        pddl::Domain domain = pddl::parse_domain(domain_text);
        pddl::Problem prob = pddl::parse_problem(problem_text);
        GroundedTask task = ground(domain, prob);
        double ground_secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        auto heuristic = make_heuristic(heuristic_name, task);
        SearchResult search = astar(task, *heuristic, limits);
        search.grounding_seconds = ground_secs;

        SlimIteration iter{prio, subset.size(), search};
        result.iterations.push_back(iter);
        if (search.found) {
            result.found = true;
            result.plan = search.plan;
            result.plan_cost = search.plan_cost;
            result.prio_used = prio;
            return result;
        }
    }
    result.prio_used = max_prio;
    return result;
}

// ---- Benchmark harness ---------------------------------------------------------

struct BenchRow {
    std::string goal_id;
    std::string domain_id;  // "dom<prio>"
    int prio = 0;
    size_t ops = 0;
    std::string heuristic;
    long long expansions = 0;
    long long generated = 0;
    double seconds = 0.0;
    std::optional<long long> cost;
    bool found = false;
    bool timed_out = false;
};

inline std::vector<BenchRow> bench(const OperatorLibrary &library,
                                   const std::vector<ProblemSpec> &goals,
                                   const std::vector<std::string> &heuristics,
                                   const std::vector<int> &prios,
                                   const CostConfig &cost_cfg = {},
                                   const SearchLimits &limits = {}) {
    if (goals.empty()) throw std::runtime_error("bench: no goals");

    std::vector<BenchRow> rows;
    for (const ProblemSpec &goal : goals) {
        for (int prio : prios) {
            DomainSubset subset = operator_subset(library, prio, cost_cfg);
            pddl::Domain domain = pddl::parse_domain(emit_domain(subset, goal.domain_name));
            pddl::Problem prob = pddl::parse_problem(emit_problem(goal));
            GroundedTask task = ground(domain, prob);
            for (const std::string &hname : heuristics) {
                auto heuristic = make_heuristic(hname, task);
                SearchResult search = astar(task, *heuristic, limits);

                BenchRow row;
                row.goal_id = goal.name;
                row.prio = prio;
                row.domain_id = "dom" + std::to_string(prio);
                row.ops = subset.size();
                row.heuristic = hname;
                row.expansions = search.expansions;
                row.generated = search.generated;
                row.seconds = search.search_seconds;
                row.found = search.found;
                row.timed_out = search.timed_out;
                if (search.found) row.cost = search.plan_cost;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow> &rows) {
    std::ostringstream os;
    os << "goal_id,domain_id,ops,heuristic,expansions,generated,seconds,cost,found\n";
    for (const BenchRow &r : rows) {
        os << r.goal_id << ',' << r.domain_id << ',' << r.ops << ',' << r.heuristic << ','
           << r.expansions << ',' << r.generated << ',' << r.seconds << ',';
        if (r.cost) os << *r.cost;
        os << ',' << (r.found ? "true" : "false") << '\n';
    }
    return os.str();
}

inline std::string bench_summary(const std::vector<BenchRow> &rows) {
    std::ostringstream os;
    os << "goal_id    domain    ops  heuristic  expansions    generated    seconds      cost\n";
    for (const BenchRow &r : rows) {
        char buf[160];
        std::string cost = r.cost ? std::to_string(*r.cost) : (r.timed_out ? "timeout" : "-");
        std::snprintf(buf, sizeof(buf), "%-10s %-9s %4zu  %-9s %11lld  %11lld  %9.4f  %8s\n",
                      r.goal_id.c_str(), r.domain_id.c_str(), r.ops, r.heuristic.c_str(),
                      r.expansions, r.generated, r.seconds, cost.c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace opslim

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opslim/demo_synth.hpp"
#include "opslim/domain_forge.hpp"
#include "opslim/ground.hpp"
#include "opslim/heuristics.hpp"
#include "opslim/learning.hpp"
#include "opslim/library_io.hpp"
#include "opslim/pddl.hpp"
#include "opslim/search.hpp"
#include "opslim/slim.hpp"
#include "opslim/trace_io.hpp"

namespace {

using namespace opslim;

constexpr int kExitOk = 0;
constexpr int kExitNoPlan = 1;
constexpr int kExitError = 2;

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

std::string read_text_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// "towerN" goal names map onto the benchmark ladder.
ProblemSpec named_goal(const std::string &name, int n_cubes) {
    if (name.rfind("tower", 0) == 0) {
        int height = std::stoi(name.substr(5));
        return make_tower_problem(height, n_cubes);
    }
    throw std::runtime_error("unknown goal '" + name + "' (expected towerN)");
}

OperatorLibrary load_library(const std::string &path) {
    OperatorLibrary lib = read_library_file(path);
    if (lib.operators.empty()) throw std::runtime_error("library " + path + " is empty");
    return lib;
}

nlohmann::json search_stats_json(const SearchResult &r) {
    nlohmann::json j;
    j["found"] = r.found;
    j["expansions"] = r.expansions;
    j["generated"] = r.generated;
    j["search_seconds"] = r.search_seconds;
    j["grounding_seconds"] = r.grounding_seconds;
    j["timed_out"] = r.timed_out;
    if (r.found) {
        j["cost"] = r.plan_cost;
        j["length"] = r.plan.size();
    }
    return j;
}

int cmd_synth(const DemoSpec &spec, const std::string &out, int corpus_n,
              const std::string &out_dir, const StyleMix &mix) {
    if (corpus_n > 0) {
        std::filesystem::create_directories(out_dir);
        auto specs = corpus_specs(corpus_n, mix, spec.seed);
        for (size_t i = 0; i < specs.size(); ++i) {
            specs[i].frame_rate = spec.frame_rate;
            specs[i].noise_sigma = spec.noise_sigma;
            char name[32];
            std::snprintf(name, sizeof(name), "demo_%02zu.jsonl", i);
            write_trace_file(out_dir + "/" + name, synth_demo(specs[i]));
        }
        std::cout << "wrote " << specs.size() << " demos to " << out_dir << "\n";
        return kExitOk;
    }
    ContinuousTrace trace = synth_demo(spec);
    write_trace_file(out, trace);
    std::cout << "wrote " << trace.size() << " frames to " << out << "\n";
    return kExitOk;
}

int cmd_segment(const std::string &trace_path, size_t min_frames) {
    ContinuousTrace trace = read_trace_file(trace_path);
    SymbolicTrace st = ground_trace(trace);
    SegmentConfig cfg{min_frames};
    for (const auto &[hand, segs] : segment(st, cfg)) {
        std::cout << hand << ":\n";
        for (const auto &s : segs)
            std::cout << "  " << s.start_index << ".." << s.end_index << "  "
                      << to_string(s.activity) << "\n";
    }
    return kExitOk;
}

int cmd_learn(const std::string &lib_path, const std::vector<std::string> &traces,
              size_t min_frames) {
    OperatorLibrary lib;
    if (std::filesystem::exists(lib_path)) lib = read_library_file(lib_path);
    size_t instances = 0;
    for (const auto &path : traces)
        instances += learn_trace(lib, read_trace_file(path), {}, {min_frames});
    write_library_file(lib_path, lib);
    std::cout << "learned " << instances << " instances from " << traces.size()
              << " demos; library now holds " << lib.operators.size()
              << " operator configurations (" << lib.total_count() << " observations)\n";
    return kExitOk;
}

int cmd_emit_domain(const std::string &lib_path, int prio, const CostConfig &cfg,
                    const std::string &out, const std::string &name,
                    const std::string &goal, int n_cubes,
                    const std::string &problem_out) {
    OperatorLibrary lib = load_library(lib_path);
    DomainSubset subset = operator_subset(lib, prio, cfg);
    write_text_file(out, emit_domain(subset, name));
    std::cout << "domain with " << subset.size() << " operators (prio " << prio
              << ") written to " << out << "\n";
    if (!goal.empty()) {
        if (problem_out.empty())
            throw std::runtime_error("--goal requires --problem-out");
        ProblemSpec prob = named_goal(goal, n_cubes);
        prob.domain_name = name;
        write_text_file(problem_out, emit_problem(prob));
        std::cout << "problem " << prob.name << " written to " << problem_out << "\n";
    }
    return kExitOk;
}

int cmd_plan(const std::string &domain_path, const std::string &problem_path,
             const std::string &heuristic, double timeout, const std::string &plan_out,
             const std::string &stats_out) {
    auto t0 = std::chrono::steady_clock::now();
    pddl::Domain domain = pddl::parse_domain(read_text_file(domain_path));
    pddl::Problem problem = pddl::parse_problem(read_text_file(problem_path));
    GroundedTask task = ground(domain, problem);
    double ground_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto h = make_heuristic(heuristic, task);
    SearchResult r = astar(task, *h, {timeout});
    r.grounding_seconds = ground_secs;

    std::cout << "grounded " << task.actions.size() << " actions over " << task.num_facts()
              << " facts in " << ground_secs << "s\n";
    std::cout << "expansions " << r.expansions << ", generated " << r.generated
              << ", search " << r.search_seconds << "s\n";
    if (!stats_out.empty()) write_text_file(stats_out, search_stats_json(r).dump(2) + "\n");
    if (!r.found) {
        std::cerr << (r.timed_out ? "timeout: no plan within limit\n" : "no plan\n");
        return kExitNoPlan;
    }
    std::cout << "plan cost " << r.plan_cost << ", " << r.plan.size() << " steps\n";
    std::string plan_text = format_plan(r);
    if (!plan_out.empty())
        write_text_file(plan_out, plan_text);
    else
        std::cout << plan_text;
    return kExitOk;
}

int cmd_slim(const std::string &lib_path, const std::string &goal, int n_cubes,
             const std::string &problem_path, const std::string &heuristic,
             const CostConfig &cfg, int max_prio, double timeout,
             const std::string &plan_out, const std::string &stats_out) {
    OperatorLibrary lib = load_library(lib_path);
    ProblemSpec prob;
    if (!problem_path.empty()) {
        pddl::Problem parsed = pddl::parse_problem(read_text_file(problem_path));
        prob.name = parsed.name;
        prob.domain_name = parsed.domain_name.empty() ? "learned" : parsed.domain_name;
        for (const auto &o : parsed.objects)
            prob.objects.push_back({o.name, obj_type_from_string(o.type)});
        for (const auto &a : parsed.init) {
            Literal l;
            l.pred = predicate_from_string(a.pred);
            l.args = a.args;
            prob.init.push_back(std::move(l));
        }
        for (const auto &a : parsed.goal) {
            Literal l;
            l.pred = predicate_from_string(a.pred);
            l.args = a.args;
            prob.goal.push_back(std::move(l));
        }
    } else {
        prob = named_goal(goal, n_cubes);
    }

    SlimResult r = slim_plan(lib, prob, heuristic, cfg, max_prio, {timeout});
    for (const auto &it : r.iterations)
        std::cout << "prio " << it.prio << ": " << it.domain_size << " operators, "
                  << (it.search.found ? "plan found" : "no plan") << ", expansions "
                  << it.search.expansions << ", search " << it.search.search_seconds
                  << "s\n";
    if (!stats_out.empty()) {
        nlohmann::json j;
        j["found"] = r.found;
        j["prio_used"] = r.prio_used;
        nlohmann::json iters = nlohmann::json::array();
        for (const auto &it : r.iterations) {
            nlohmann::json e = search_stats_json(it.search);
            e["prio"] = it.prio;
            e["domain_size"] = it.domain_size;
            iters.push_back(std::move(e));
        }
        j["iterations"] = std::move(iters);
        if (r.found) j["cost"] = r.plan_cost;
        write_text_file(stats_out, j.dump(2) + "\n");
    }
    if (!r.found) {
        std::cerr << "no plan: operator ranks exhausted at prio " << r.prio_used << "\n";
        return kExitNoPlan;
    }
    std::cout << "solved at prio " << r.prio_used << ", cost " << r.plan_cost << ", "
              << r.plan.size() << " steps\n";
    SearchResult as_result;
    as_result.found = true;
    as_result.plan = r.plan;
    as_result.plan_cost = r.plan_cost;
    std::string plan_text = format_plan(as_result);
    if (!plan_out.empty())
        write_text_file(plan_out, plan_text);
    else
        std::cout << plan_text;
    return kExitOk;
}

int cmd_bench(const std::string &lib_path, const std::vector<int> &heights, int n_cubes,
              std::vector<int> prios, const std::vector<std::string> &heuristics,
              const CostConfig &cfg, double timeout, const std::string &csv_out,
              const std::string &json_out) {
    OperatorLibrary lib = load_library(lib_path);
    if (prios.empty())
        for (int p = 1; p <= lib.max_rank_depth(); ++p) prios.push_back(p);

    std::vector<ProblemSpec> goals;
    for (int h : heights) goals.push_back(make_tower_problem(h, n_cubes));

    auto rows = bench(lib, goals, heuristics, prios, cfg, {timeout});
    std::cout << bench_summary(rows);
    if (!csv_out.empty()) write_text_file(csv_out, bench_csv(rows));
    if (!json_out.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : rows) {
            nlohmann::json e;
            e["goal_id"] = r.goal_id;
            e["domain_id"] = r.domain_id;
            e["prio"] = r.prio;
            e["ops"] = r.ops;
            e["heuristic"] = r.heuristic;
            e["expansions"] = r.expansions;
            e["generated"] = r.generated;
            e["seconds"] = r.seconds;
            e["found"] = r.found;
            e["timed_out"] = r.timed_out;
            if (r.cost) e["cost"] = *r.cost;
            arr.push_back(std::move(e));
        }
        write_text_file(json_out, arr.dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"opslim: learn planning operators from demonstrations, emit cost-annotated "
                 "PDDL, and plan with iterative domain slimming"};
    app.require_subcommand(1);

    // synth
    auto *synth = app.add_subcommand("synth", "generate a synthetic demonstration trace");
    DemoSpec spec;
    std::string synth_style = "pick-and-place", synth_out = "demo.jsonl";
    std::string synth_dir = "demos";
    int corpus_n = 0;
    StyleMix mix;
    synth->add_option("--style", synth_style, "pick-and-place|direct-put|stack-two|idle-heavy");
    synth->add_option("--cubes", spec.n_cubes, "cubes in the scene");
    synth->add_option("--hand", spec.hand, "acting hand id");
    synth->add_option("--seed", spec.seed, "random seed");
    synth->add_option("--rate", spec.frame_rate, "frame rate (Hz)");
    synth->add_option("--noise", spec.noise_sigma, "positional jitter sigma (m)");
    synth->add_option("--out", synth_out, "output trace file");
    synth->add_option("--corpus", corpus_n, "generate a corpus of N demos instead");
    synth->add_option("--out-dir", synth_dir, "corpus output directory");

    // segment
    auto *seg = app.add_subcommand("segment", "classify and segment a trace");
    std::string seg_trace;
    size_t min_frames = 2;
    seg->add_option("--trace", seg_trace, "trace file")->required();
    seg->add_option("--min-frames", min_frames, "minimum segment length");

    // learn
    auto *learn = app.add_subcommand("learn", "extract operators from demos into a library");
    std::string lib_path;
    std::vector<std::string> learn_traces;
    learn->add_option("--library", lib_path, "library file (created if absent)")->required();
    learn->add_option("--trace,traces", learn_traces, "demonstration trace files")
        ->required();
    learn->add_option("--min-frames", min_frames, "minimum segment length");

    // shared planning knobs
    CostConfig cost_cfg;
    double timeout = 120.0;
    std::string heuristic = "lmcut";

    // emit-domain
    auto *emit = app.add_subcommand("emit-domain", "write a prio-subset PDDL domain");
    int prio = 1, n_cubes = 6;
    std::string domain_out = "domain.pddl", domain_name = "learned", emit_goal,
                problem_out;
    emit->add_option("--library", lib_path, "library file")->required();
    emit->add_option("--prio", prio, "operator rank depth per type");
    emit->add_option("--lambda", cost_cfg.lambda, "cost scale");
    emit->add_option("--min-cost", cost_cfg.min_cost, "cost floor");
    emit->add_option("--out", domain_out, "output domain file");
    emit->add_option("--name", domain_name, "domain name");
    emit->add_option("--goal", emit_goal, "also emit a towerN problem");
    emit->add_option("--cubes", n_cubes, "cubes in emitted problems");
    emit->add_option("--problem-out", problem_out, "problem output file");

    // plan
    auto *plan = app.add_subcommand("plan", "optimal A* plan for a PDDL task");
    std::string plan_domain, plan_problem, plan_out, stats_out;
    plan->add_option("--domain", plan_domain, "domain file")->required();
    plan->add_option("--problem", plan_problem, "problem file")->required();
    plan->add_option("--heuristic", heuristic, "blind|hmax|lmcut");
    plan->add_option("--timeout", timeout, "search timeout (s)");
    plan->add_option("--plan-out", plan_out, "plan output file (stdout if absent)");
    plan->add_option("--stats-out", stats_out, "JSON statistics output file");

    // slim
    auto *slim = app.add_subcommand("slim", "plan with iterative domain expansion");
    std::string slim_goal = "tower6", slim_problem;
    int max_prio = 0;
    slim->add_option("--library", lib_path, "library file")->required();
    slim->add_option("--goal", slim_goal, "towerN ladder goal");
    slim->add_option("--problem", slim_problem, "explicit problem file (overrides --goal)");
    slim->add_option("--cubes", n_cubes, "cubes in the towerN problem");
    slim->add_option("--heuristic", heuristic, "blind|hmax|lmcut");
    slim->add_option("--lambda", cost_cfg.lambda, "cost scale");
    slim->add_option("--min-cost", cost_cfg.min_cost, "cost floor");
    slim->add_option("--max-prio", max_prio, "stop after this rank (default: full depth)");
    slim->add_option("--timeout", timeout, "per-iteration search timeout (s)");
    slim->add_option("--plan-out", plan_out, "plan output file (stdout if absent)");
    slim->add_option("--stats-out", stats_out, "JSON statistics output file");

    // bench
    auto *bn = app.add_subcommand("bench", "goal-ladder benchmark over prio domains");
    std::vector<int> bench_heights = {2, 3, 4, 5, 6};
    std::vector<int> bench_prios;
    std::vector<std::string> bench_heuristics = {"hmax", "lmcut"};
    std::string csv_out, json_out;
    bn->add_option("--library", lib_path, "library file")->required();
    bn->add_option("--goals", bench_heights, "tower heights");
    bn->add_option("--cubes", n_cubes, "cubes in the scene");
    bn->add_option("--prios", bench_prios, "prio levels (default: all ranks)");
    bn->add_option("--heuristics", bench_heuristics, "heuristics to run");
    bn->add_option("--lambda", cost_cfg.lambda, "cost scale");
    bn->add_option("--min-cost", cost_cfg.min_cost, "cost floor");
    bn->add_option("--timeout", timeout, "per-cell search timeout (s)");
    bn->add_option("--csv", csv_out, "CSV output file");
    bn->add_option("--json", json_out, "JSON output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (synth->parsed()) {
            spec.style = style_from_string(synth_style);
            return cmd_synth(spec, synth_out, corpus_n, synth_dir, mix);
        }
        if (seg->parsed()) return cmd_segment(seg_trace, min_frames);
        if (learn->parsed()) return cmd_learn(lib_path, learn_traces, min_frames);
        if (emit->parsed())
            return cmd_emit_domain(lib_path, prio, cost_cfg, domain_out, domain_name,
                                   emit_goal, n_cubes, problem_out);
        if (plan->parsed())
            return cmd_plan(plan_domain, plan_problem, heuristic, timeout, plan_out,
                            stats_out);
        if (slim->parsed())
            return cmd_slim(lib_path, slim_goal, n_cubes, slim_problem, heuristic, cost_cfg,
                            max_prio, timeout, plan_out, stats_out);
        if (bn->parsed())
            return cmd_bench(lib_path, bench_heights, n_cubes, bench_prios,
                             bench_heuristics, cost_cfg, timeout, csv_out, json_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

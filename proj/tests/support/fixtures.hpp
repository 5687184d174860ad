#pragma once

// Shared hand-built fixtures: a small operator library with the Put/Put2/Take
// cost structure, a deliberately crippled library that only resolves at
// prio 2, and a few micro STRIPS tasks for heuristic spot checks.

#include <string>
#include <vector>

#include "opslim/domain_forge.hpp"
#include "opslim/ground.hpp"
#include "opslim/learning.hpp"
#include "opslim/operators.hpp"

namespace fixtures {

using namespace opslim;

inline LiftedOperator make_op(Activity act, std::vector<TypedVar> params,
                              std::vector<Literal> pre, std::vector<Literal> eff,
                              long long count) {
    LiftedOperator op;
    op.activity = act;
    op.params = std::move(params);
    op.preconditions = std::move(pre);
    op.effects = std::move(eff);
    std::sort(op.preconditions.begin(), op.preconditions.end());
    std::sort(op.effects.begin(), op.effects.end());
    op.count = count;
    op.name = to_string(act);
    return op;
}

// Library with the cost-preference structure: cost(Take) + cost(Put) exceeds
// cost(Put2) even though Put2 was seen less often than Put.
//   Take type {5,4,3} -> cost(Take) = 59; Put type {12,4} -> 25 / 75.
//   Route Reach,Take,Put,Stack = 1+59+25+1; route Reach,Put2,Stack = 1+75+1.
inline OperatorLibrary cost_preference_library() {
    const TypedVar h{"?h", ObjType::Hand}, c{"?c", ObjType::Cube}, s{"?t", ObjType::Thing},
        t{"?c2", ObjType::Cube};
    OperatorLibrary lib;

    lib.operators.push_back(make_op(
        Activity::Reach, {h, c},
        {lit(Predicate::HandOpen, {"?h"}), lit(Predicate::HandMove, {"?h"}, true),
         lit(Predicate::InHand, {"?h", "?c"}, true), lit(Predicate::ActedOn, {"?h", "?c"}, true),
         lit(Predicate::Graspable, {"?h", "?c"}, true)},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"})},
        5));

    lib.operators.push_back(make_op(
        Activity::Take, {h, c},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::InHand, {"?h", "?c"}, true)},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true), lit(Predicate::HandMove, {"?h"}, true)},
        5));
    // Grasp variants that drop graspable, making them useless for stacking.
    lib.operators.push_back(make_op(
        Activity::Take, {h, c, s},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::InHand, {"?h", "?c"}, true), lit(Predicate::OnTop, {"?c", "?t"})},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true), lit(Predicate::HandMove, {"?h"}, true),
         lit(Predicate::Graspable, {"?h", "?c"}, true)},
        4));
    lib.operators.push_back(make_op(
        Activity::Take, {h, c, s},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::InHand, {"?h", "?c"}, true), lit(Predicate::InTouch, {"?c", "?t"})},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true), lit(Predicate::HandMove, {"?h"}, true),
         lit(Predicate::Graspable, {"?h", "?c"}, true)},
        3));

    // Take-then-put transport: restores the motion the grasp stopped.
    lib.operators.push_back(make_op(
        Activity::Put, {h, c},
        {lit(Predicate::HandMove, {"?h"}, true), lit(Predicate::InHand, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true)},
        {lit(Predicate::HandMove, {"?h"})},
        12));
    // Direct grab while moving.
    lib.operators.push_back(make_op(
        Activity::Put, {h, c},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::InHand, {"?h", "?c"}, true)},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true)},
        4));

    // Slide the held cube off its old support onto the target.
    lib.operators.push_back(make_op(
        Activity::Stack, {h, c, t, s},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::InHand, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::OnTop, {"?c", "?t"}), lit(Predicate::InTouch, {"?c", "?t"}),
         lit(Predicate::OnTop, {"?c", "?c2"}, true),
         lit(Predicate::InTouch, {"?c", "?c2"}, true)},
        {lit(Predicate::OnTop, {"?c", "?c2"}), lit(Predicate::InTouch, {"?c", "?c2"}),
         lit(Predicate::OnTop, {"?c", "?t"}, true), lit(Predicate::InTouch, {"?c", "?t"}, true),
         lit(Predicate::ActedOn, {"?h", "?c2"}), lit(Predicate::Graspable, {"?h", "?c2"})},
        5));

    lib.operators.push_back(make_op(
        Activity::Idle, {h, c, t},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::ActedOn, {"?h", "?c2"}),
         lit(Predicate::HandMove, {"?h"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::OnTop, {"?c", "?c2"})},
        {lit(Predicate::InHand, {"?h", "?c"}, true), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::HandMove, {"?h"}, true), lit(Predicate::ActedOn, {"?h", "?c2"}, true),
         lit(Predicate::Graspable, {"?h", "?c"}, true)},
        5));

    lib.assign_names();
    return lib;
}

// Library whose prio-1 Put cannot supply inHand; only the prio-2 Put2 can,
// so slim_plan must fail once and widen.
inline OperatorLibrary fail_then_succeed_library() {
    const TypedVar h{"?h", ObjType::Hand}, c{"?c", ObjType::Cube}, t{"?c2", ObjType::Cube};
    OperatorLibrary lib;
    lib.operators.push_back(make_op(
        Activity::Reach, {h, c},
        {lit(Predicate::HandOpen, {"?h"}), lit(Predicate::HandMove, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true)},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::ActedOn, {"?h", "?c"}),
         lit(Predicate::Graspable, {"?h", "?c"})},
        9));
    // Transport that only restores motion; it never grabs anything.
    lib.operators.push_back(make_op(
        Activity::Put, {h, c},
        {lit(Predicate::ActedOn, {"?h", "?c"}), lit(Predicate::Graspable, {"?h", "?c"}),
         lit(Predicate::HandMove, {"?h"})},
        {lit(Predicate::ActedOn, {"?h", "?c"}, true)},
        9));
    lib.operators.push_back(make_op(
        Activity::Put, {h, c},
        {lit(Predicate::ActedOn, {"?h", "?c"}), lit(Predicate::Graspable, {"?h", "?c"}),
         lit(Predicate::HandMove, {"?h"}), lit(Predicate::HandOpen, {"?h"})},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandOpen, {"?h"}, true),
         lit(Predicate::ActedOn, {"?h", "?c"}, true)},
        3));
    lib.operators.push_back(make_op(
        Activity::Stack, {h, c, t},
        {lit(Predicate::HandMove, {"?h"}), lit(Predicate::InHand, {"?h", "?c"}),
         lit(Predicate::OnTop, {"?c", "?c2"}, true)},
        {lit(Predicate::OnTop, {"?c", "?c2"}), lit(Predicate::InTouch, {"?c", "?c2"})},
        9));
    lib.operators.push_back(make_op(
        Activity::Idle, {h, c},
        {lit(Predicate::InHand, {"?h", "?c"}), lit(Predicate::HandMove, {"?h"})},
        {lit(Predicate::InHand, {"?h", "?c"}, true), lit(Predicate::HandOpen, {"?h"}),
         lit(Predicate::HandMove, {"?h"}, true)},
        9));
    lib.assign_names();
    return lib;
}

inline ProblemSpec two_cube_stack_problem(const std::string &domain_name = "learned") {
    ProblemSpec p;
    p.name = "stack2";
    p.domain_name = domain_name;
    p.objects = {{"left", ObjType::Hand},
                 {"cube1", ObjType::Cube},
                 {"cube2", ObjType::Cube},
                 {"table1", ObjType::Table}};
    for (const char *c : {"cube1", "cube2"}) {
        p.init.push_back(lit(Predicate::OnTop, {c, "table1"}));
        p.init.push_back(lit(Predicate::InTouch, {c, "table1"}));
    }
    p.init.push_back(lit(Predicate::HandOpen, {"left"}));
    p.goal.push_back(lit(Predicate::OnTop, {"cube2", "cube1"}));
    return p;
}

// Serial chain of n unit-cost actions, each enabling the next.
inline GroundedTask chain_task(int n, long long step_cost = 1) {
    GroundedTask t;
    t.fact_names.push_back("(p0)");
    for (int i = 1; i <= n; ++i) t.fact_names.push_back("(p" + std::to_string(i) + ")");
    for (int i = 0; i < n; ++i) {
        GroundAction a;
        a.name = "(a" + std::to_string(i + 1) + ")";
        a.pre = {i};
        a.add = {i + 1};
        a.cost = step_cost;
        t.actions.push_back(std::move(a));
    }
    t.init = {0};
    t.goal = {n};
    return t;
}

// Two independent goal atoms with their own unit-cost achievers.
inline GroundedTask two_goal_task() {
    GroundedTask t;
    t.fact_names = {"(s)", "(g1)", "(g2)"};
    GroundAction b1{"(b1)", {0}, {1}, {}, 1};
    GroundAction b2{"(b2)", {0}, {2}, {}, 1};
    t.actions = {b1, b2};
    t.init = {0};
    t.goal = {1, 2};
    return t;
}

inline GroundedTask unreachable_task() {
    GroundedTask t;
    t.fact_names = {"(s)", "(g)"};
    t.init = {0};
    t.goal = {1};
    t.relaxed_goal_reachable = false;
    return t;
}

}  // namespace fixtures

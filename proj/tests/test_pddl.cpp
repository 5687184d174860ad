#include <doctest.h>

#include "opslim/domain_forge.hpp"
#include "opslim/ground.hpp"
#include "opslim/pddl.hpp"
#include "support/fixtures.hpp"

using namespace opslim;

namespace {

const char *kBlocksDomain = R"((define (domain blocks-drag)
  (:requirements :strips :typing :negative-preconditions :action-costs)
  (:types block gripper - object)
  (:predicates
    (on ?a - block ?b - block)
    (ontable ?a - block)
    (holding ?g - gripper ?a - block)
    (free ?g - gripper))
  (:functions (total-cost) - number)
  (:action pickup
    :parameters (?g - gripper ?a - block)
    :precondition (and (free ?g) (ontable ?a))
    :effect (and (holding ?g ?a) (not (free ?g)) (not (ontable ?a))
                 (increase (total-cost) 3)))
  (:action stack
    :parameters (?g - gripper ?a - block ?b - block)
    :precondition (and (holding ?g ?a) (not (on ?b ?a)))
    :effect (and (on ?a ?b) (free ?g) (not (holding ?g ?a))
                 (increase (total-cost) 2)))
))";

const char *kBlocksProblem = R"((define (problem two-blocks)
  (:domain blocks-drag)
  (:objects b1 b2 - block g - gripper)
  (:init (ontable b1) (ontable b2) (free g) (= (total-cost) 0))
  (:goal (and (on b1 b2)))
  (:metric minimize (total-cost)))
)";

}  // namespace

TEST_CASE("hand-written domain with costs parses and grounds to the expected size") {
    pddl::Domain d = pddl::parse_domain(kBlocksDomain);
    CHECK(d.name == "blocks-drag");
    CHECK(d.actions.size() == 2);
    CHECK(d.actions[0].cost == 3);
    CHECK(d.actions[1].cost == 2);
    CHECK(d.is_subtype("block", "object"));

    pddl::Problem p = pddl::parse_problem(kBlocksProblem);
    CHECK(p.objects.size() == 3);
    REQUIRE(p.goal.size() == 1);

    GroundedTask task = ground(d, p);
    // by hand: pickup over (g) x (b1 b2) = 2; stack over (g) x (b1 b2)^2 = 4;
    // all are delete-relaxed reachable from the initial state
    CHECK(task.actions.size() == 6);
}

TEST_CASE("unsupported constructs are rejected with positions") {
    SUBCASE("conditional effects") {
        std::string text = R"((define (domain bad)
  (:requirements :strips)
  (:predicates (p) (q))
  (:action a
    :parameters ()
    :precondition (p)
    :effect (when (p) (q)))))";
        try {
            pddl::parse_domain(text);
            FAIL("expected rejection");
        } catch (const pddl::ParseError &e) {
            CHECK(std::string(e.what()).find("conditional effects") != std::string::npos);
            CHECK(e.line == 7);
        }
    }
    SUBCASE("disjunctive preconditions") {
        std::string text = R"((define (domain bad)
  (:requirements :strips)
  (:predicates (p) (q))
  (:action a :parameters () :precondition (or (p) (q)) :effect (p))))";
        CHECK_THROWS_WITH_AS(pddl::parse_domain(text),
                             doctest::Contains("disjunctive"), pddl::ParseError);
    }
    SUBCASE("unknown requirement") {
        std::string text = R"((define (domain bad)
  (:requirements :strips :adl)))";
        try {
            pddl::parse_domain(text);
            FAIL("expected rejection");
        } catch (const pddl::ParseError &e) {
            CHECK(std::string(e.what()).find(":adl") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("arity mismatch") {
        std::string text = R"((define (domain bad)
  (:requirements :strips)
  (:predicates (p ?a ?b))
  (:action a :parameters (?x) :precondition (p ?x) :effect (p ?x ?x))))";
        CHECK_THROWS_WITH_AS(pddl::parse_domain(text), doctest::Contains("expects 2"),
                             std::runtime_error);
    }
    SUBCASE("undeclared variable") {
        std::string text = R"((define (domain bad)
  (:requirements :strips)
  (:predicates (p ?a))
  (:action a :parameters (?x) :precondition (p ?y) :effect (p ?x))))";
        CHECK_THROWS_WITH_AS(pddl::parse_domain(text),
                             doctest::Contains("not a parameter"), std::runtime_error);
    }
    SUBCASE("unbalanced parens carry a position") {
        try {
            pddl::parse_domain("(define (domain bad)\n  (:requirements :strips)\n");
            FAIL("expected rejection");
        } catch (const pddl::ParseError &e) {
            CHECK(e.line >= 1);
        }
    }
    SUBCASE("negative init literals") {
        std::string text = R"((define (problem bad)
  (:domain d)
  (:objects o)
  (:init (not (p o)))
  (:goal (p o))))";
        CHECK_THROWS_AS(pddl::parse_problem(text), pddl::ParseError);
    }
}

TEST_CASE("comments and case-insensitive keywords are tolerated") {
    std::string text = R"(; a blocksworld fragment
(DEFINE (DOMAIN tiny) ; inline comment
  (:Requirements :STRIPS)
  (:predicates (p ?a))
  (:ACTION go
    :parameters (?x)
    :precondition (AND (p ?x))
    :effect (NOT (p ?x)))))";
    pddl::Domain d = pddl::parse_domain(text);
    CHECK(d.name == "tiny");
    REQUIRE(d.actions.size() == 1);
    CHECK(d.actions[0].effects[0].negated);
}

TEST_CASE("emitted artifacts reparse to the direct in-memory model") {
    OperatorLibrary lib = fixtures::cost_preference_library();
    for (int prio = 1; prio <= lib.max_rank_depth(); ++prio) {
        DomainSubset sub = operator_subset(lib, prio);
        pddl::Domain parsed = pddl::parse_domain(emit_domain(sub, "learned"));
        pddl::Domain direct = build_domain_model(sub, "learned");
        REQUIRE(parsed.actions.size() == direct.actions.size());
        CHECK(parsed.type_parent == direct.type_parent);
        for (size_t i = 0; i < parsed.actions.size(); ++i) {
            CHECK(parsed.actions[i].name == direct.actions[i].name);
            CHECK(parsed.actions[i].cost == direct.actions[i].cost);
            CHECK(parsed.actions[i].preconditions.size() ==
                  direct.actions[i].preconditions.size());
            CHECK(parsed.actions[i].effects.size() == direct.actions[i].effects.size());
        }
    }
}

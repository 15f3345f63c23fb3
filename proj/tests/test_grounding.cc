#include "grforge/grounding.h"
#include "grforge/search.h"
#include "helpers.h"

#include <doctest.h>

#include <set>

using namespace grforge;

namespace {
std::set<std::string> labels(const GroundedTask &task) {
    std::set<std::string> result;
    for (const GroundAction &a : task.actions())
        result.insert(a.label());
    return result;
}

void check_against_instantiation(const std::string &domain_file, const std::string &problem_file) {
    pddl::Domain domain = pddl::parse_domain(oracle::read_file(fixture(domain_file)));
    pddl::Problem problem = pddl::parse_problem(oracle::read_file(fixture(problem_file)));
    CHECK(labels(ground(domain, problem)) == oracle::ground_action_labels(domain, problem));
}
}

TEST_CASE("ground actions match exhaustive instantiation plus reachability") {
    check_against_instantiation("blocks-domain.pddl", "blocks-two.pddl");
    check_against_instantiation("blocks-domain.pddl", "blocks-sussman.pddl");
    check_against_instantiation("blocks-domain.pddl", "blocks-four.pddl");
    check_against_instantiation("gripper-domain.pddl", "gripper-p01.pddl");
    check_against_instantiation("costs-domain.pddl", "costs-p01.pddl");
    check_against_instantiation("subgoals-domain.pddl", "subgoals-p01.pddl");
}

TEST_CASE("two-block task has the expected ground actions") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    // Without equality, (stack a a) is type-consistent and relaxed-reachable.
    CHECK(task.num_actions() == 2 + 2 + 4 + 4);
    CHECK(task.find_action("(pick-up a)"));
    CHECK(task.find_action("(stack a b)"));
    CHECK(task.find_action("(stack a a)"));
}

TEST_CASE("action costs come from the domain") {
    GroundedTask task = load_fixture("costs-domain.pddl", "costs-p01.pddl");
    CHECK(task.action(*task.find_action("(ride office station)")).cost == Rational(1, 4));
    CHECK(task.action(*task.find_action("(drive office home)")).cost == Rational(3, 2));
    GroundedTask unit = load_blocks("blocks-two.pddl");
    for (const GroundAction &a : unit.actions())
        CHECK(a.cost == Rational(1));
}

TEST_CASE("no objects of a parameter type gives no actions") {
    std::string domain = oracle::read_file(fixture("blocks-domain.pddl"));
    GroundedTask solved = ground_texts(domain, "(define (problem p) (:domain blocksworld)"
                                               " (:init (handempty)) (:goal (handempty)))");
    CHECK(solved.num_actions() == 0);
    CHECK(plan_optimal(solved)->steps.empty());
    GroundedTask stuck = ground_texts(domain, "(define (problem p) (:domain blocksworld)"
                                              " (:objects a - block) (:init) (:goal (holding a)))");
    CHECK(stuck.num_actions() == 0);
    CHECK_FALSE(plan_optimal(stuck));
}

TEST_CASE("undeclared objects and type mismatches are errors") {
    std::string domain = oracle::read_file(fixture("blocks-domain.pddl"));
    CHECK_THROWS_AS(ground_texts(domain, "(define (problem p) (:domain blocksworld)"
                                         " (:objects a - block) (:init (clear a)) (:goal (on a z)))"),
                    pddl::ParseError);
    CHECK_THROWS_AS(ground_texts(domain, "(define (problem p) (:domain other)"
                                         " (:objects a - block) (:init (clear a)) (:goal (clear a)))"),
                    pddl::ParseError);
    CHECK_THROWS_AS(ground_texts(domain, "(define (problem p) (:domain blocksworld)"
                                         " (:objects a - block) (:init (clear a a)) (:goal (clear a)))"),
                    pddl::ParseError);
}

TEST_CASE("grounding does not depend on object declaration order") {
    std::string domain = oracle::read_file(fixture("blocks-domain.pddl"));
    std::string forward = "(define (problem p) (:domain blocksworld) (:objects a b c - block)"
                          " (:init (handempty) (ontable a) (ontable b) (on c a) (clear b) (clear c))"
                          " (:goal (and (on a b) (on b c))))";
    std::string backward = "(define (problem p) (:domain blocksworld) (:objects c b a - block)"
                           " (:init (clear c) (clear b) (on c a) (ontable b) (ontable a) (handempty))"
                           " (:goal (and (on b c) (on a b))))";
    CHECK(serialize_task(ground_texts(domain, forward)) == serialize_task(ground_texts(domain, backward)));
}

TEST_CASE("apply uses delete-then-add semantics") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    State s = task.init();
    State next = apply(task, s, *task.find_action("(pick-up a)"));
    CHECK(next.contains(*task.find_fact("(holding a)")));
    CHECK_FALSE(next.contains(*task.find_fact("(clear a)")));
    CHECK_FALSE(next.contains(*task.find_fact("(ontable a)")));
    CHECK_FALSE(next.contains(*task.find_fact("(handempty)")));
    CHECK(next.contains(*task.find_fact("(clear b)")));
    CHECK_THROWS_AS(apply(task, next, *task.find_action("(pick-up b)")), InapplicableAction);

    FactAtom p {"p", {}};
    GroundAction both {"both", {}, "", {}, {0}, {0}, Rational(1)};
    GroundAction noop {"noop", {}, "", {}, {}, {}, Rational(1)};
    GroundedTask tiny("tiny", {p}, {both, noop}, {}, {0});
    CHECK(apply(tiny, tiny.init(), 0).contains(0));
    CHECK(apply(tiny, tiny.init(), 1) == tiny.init());
}

TEST_CASE("random deletes never survive unless re-added") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GroundedTask task = oracle::random_task(seed);
        oracle::StateSpace space = oracle::explore(task);
        for (const oracle::Facts &facts : space.states) {
            State s(task.num_facts());
            for (FactId f : facts)
                s.insert(f);
            for (ActionId a = 0; a < task.num_actions(); ++a) {
                if (!is_applicable(task.action(a), s))
                    continue;
                State next = apply(task, s, a);
                CHECK(next.facts() == oracle::successor(task, facts, a));
            }
        }
    }
}

TEST_CASE("plan validation") {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    PlanValidation empty = validate_plan(task, Plan {});
    CHECK_FALSE(empty.valid);
    CHECK(empty.failing_step == 0);
    CHECK(empty.missing_facts.size() == 2);

    GroundedTask trivial = task.with_goal({*task.find_fact("(on c a)")});
    CHECK(validate_plan(trivial, Plan {}).valid);

    std::vector<ActionId> steps;
    for (const char *label : {"(unstack c a)", "(put-down c)", "(pick-up b)", "(stack b c)",
                              "(pick-up a)", "(stack a b)"})
        steps.push_back(*task.find_action(label));
    CHECK(validate_plan(task, steps).valid);
    CHECK(*oracle::optimal_cost(task) == Rational(6));

    std::vector<ActionId> broken = steps;
    std::swap(broken[0], broken[2]);
    PlanValidation v = validate_plan(task, broken);
    CHECK_FALSE(v.valid);
    CHECK(v.failing_step == 1);
    CHECK(format_plan(task, make_plan(task, steps)).find("; cost = 6") != std::string::npos);
}

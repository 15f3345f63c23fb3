#include "grforge/topk.h"
#include "helpers.h"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace grforge;

namespace {
Plan plan_of(const GroundedTask &task, std::initializer_list<const char *> labels) {
    std::vector<ActionId> steps;
    for (const char *label : labels)
        steps.push_back(*task.find_action(label));
    return make_plan(task, steps);
}

// Plans of the reformulated task, projected back, within the bound.
std::set<std::vector<ActionId>> projected_plans(const ForbidReformulation &r, const Rational &bound) {
    std::set<std::vector<ActionId>> result;
    for (const auto &steps : oracle::enumerate_plans(r.task, r.task.goal(), bound)) {
        std::vector<ActionId> projected;
        for (ActionId a : steps)
            projected.push_back(r.origin[a]);
        result.insert(projected);
    }
    return result;
}
}

TEST_CASE("forbidding the only plan makes the task unsolvable") {
    FactAtom p {"p", {}}, q {"q", {}};
    GroundAction a {"go", {}, "", {0}, {1}, {0}, Rational(1)};
    GroundedTask task("single", {p, q}, {a}, {0}, {1});
    ForbidReformulation r = forbid_plan(task, make_plan(task, {0}));
    CHECK_FALSE(plan_optimal(r.task));
}

TEST_CASE("forbidding a plan leaves exactly the other plans") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    const Rational bound(5);
    auto all = oracle::enumerate_plans(task, task.goal(), bound);
    Plan first = plan_of(task, {"(pick-up a)", "(stack a b)"});
    ForbidReformulation r = forbid_plan(task, first);
    std::set<std::vector<ActionId>> expected(all.begin(), all.end());
    REQUIRE(expected.erase(first.steps) == 1);
    CHECK(projected_plans(r, bound) == expected);
    CHECK(r.task.num_actions() <= 2 * task.num_actions() + static_cast<int>(first.steps.size()));

    auto next = plan_optimal(r.task);
    REQUIRE(next);
    CHECK(next->cost == Rational(4));
    CHECK(validate_plan(task, r.project(task, *next)).valid);
}

TEST_CASE("forbidding one order keeps its permutation") {
    GroundedTask task = load_fixture("subgoals-domain.pddl", "subgoals-p01.pddl");
    Plan left_first = plan_of(task, {"(flip-on left)", "(flip-on right)"});
    Plan right_first = plan_of(task, {"(flip-on right)", "(flip-on left)"});
    ForbidReformulation r = forbid_plan(task, left_first);
    auto remaining = projected_plans(r, Rational(3));
    CHECK(remaining.count(right_first.steps) == 1);
    CHECK(remaining.count(left_first.steps) == 0);
    CHECK(r.project(task, *plan_optimal(r.task)) == right_first);
}

TEST_CASE("forbidding several plans on random tasks") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60 && checked < 15; ++seed) {
        GroundedTask task = oracle::random_task(seed, {7, 10, false});
        auto cost = oracle::optimal_cost(task);
        if (!cost)
            continue;
        const Rational bound = *cost + Rational(3);
        auto all = oracle::enumerate_plans(task, task.goal(), bound, 20000);
        if (all.size() < 3)
            continue;
        std::vector<Plan> forbidden;
        for (size_t i = 0; i < all.size() && forbidden.size() < 3; i += 1 + all.size() / 4)
            forbidden.push_back(make_plan(task, all[i]));
        ForbidReformulation r = forbid_plans(task, forbidden);
        std::set<std::vector<ActionId>> expected(all.begin(), all.end());
        for (const Plan &p : forbidden)
            expected.erase(p.steps);
        CHECK(projected_plans(r, bound) == expected);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("invalid plans cannot be forbidden") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    CHECK_THROWS_AS(forbid_plan(task, plan_of(task, {"(stack a b)"})), std::invalid_argument);
}

TEST_CASE("top_k with k = 1 is the optimal plan") {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    PlanSet set = top_k(task, 1);
    REQUIRE(set.plans.size() == 1);
    CHECK(set.plans[0] == *plan_optimal(task));
}

TEST_CASE("top_k on two blocks") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    PlanSet set = top_k(task, 2);
    REQUIRE(set.plans.size() == 2);
    CHECK(set.plans[0] == plan_of(task, {"(pick-up a)", "(stack a b)"}));
    CHECK(set.plans[1].cost >= Rational(3));
}

TEST_CASE("top_k stops when plans run out") {
    FactAtom s {"s", {}}, m {"m", {}}, g {"g", {}};
    std::vector<GroundAction> actions {
        {"direct", {}, "", {2}, {0}, {2}, Rational(2)},
        {"first", {}, "", {2}, {1}, {2}, Rational(1)},
        {"second", {}, "", {1}, {0}, {1}, Rational(1)},
        {"slow", {}, "", {2}, {0}, {2}, Rational(5)},
    };
    GroundedTask task("three", {g, m, s}, actions, {2}, {0});
    PlanSet set = top_k(task, 5);
    CHECK(set.plans.size() == 3);
    CHECK_FALSE(set.truncated);
}

TEST_CASE("top_k costs match plan enumeration") {
    struct Case {
        const char *domain;
        const char *problem;
        int k;
    };
    for (Case c : {Case {"blocks-domain.pddl", "blocks-two.pddl", 8},
                   Case {"subgoals-domain.pddl", "subgoals-p01.pddl", 8},
                   Case {"costs-domain.pddl", "costs-p01.pddl", 8}}) {
        CAPTURE(c.problem);
        GroundedTask task = load_fixture(c.domain, c.problem);
        PlanSet set = top_k(task, c.k);
        REQUIRE(static_cast<int>(set.plans.size()) == c.k);
        std::vector<Rational> costs;
        std::set<std::vector<ActionId>> distinct;
        for (const Plan &p : set.plans) {
            CHECK(validate_plan(task, p).valid);
            costs.push_back(p.cost);
            distinct.insert(p.steps);
        }
        CHECK(distinct.size() == set.plans.size());
        CHECK(std::is_sorted(costs.begin(), costs.end()));
        auto expected = oracle::plan_costs(task, oracle::enumerate_plans(task, task.goal(), costs.back()));
        REQUIRE(expected.size() >= costs.size());
        expected.resize(costs.size());
        CHECK(costs == expected);
    }
}

TEST_CASE("plan sets are written as numbered files") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    auto dir = scratch_dir("planset");
    write_plan_set(dir, task, top_k(task, 3));
    CHECK(std::filesystem::exists(dir / "sas_plan.1"));
    CHECK(std::filesystem::exists(dir / "sas_plan.3"));
    CHECK_FALSE(std::filesystem::exists(dir / "sas_plan.4"));
    CHECK(oracle::read_file(dir / "sas_plan.1") == "(pick-up a)\n(stack a b)\n; cost = 2\n");
}

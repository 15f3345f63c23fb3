#include "grforge/dataset.h"
#include "grforge/random.h"
#include "grforge/search.h"
#include "helpers.h"

#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

using namespace grforge;

namespace {
GoalRecognitionTask sample_task() {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    Hypothesis goal = make_hypothesis("", parse_atom_list("(on a b),(on b c)"));
    std::vector<Hypothesis> others = load_hypotheses("(on c b)\n(on b a),(on a c)\n");
    Planner planner = [](const GroundedTask &t, int k) {return top_k(t, k);};
    HypothesisGenerator hyps = [&](const GroundedTask &) {return others;};
    GeneratorContext context {"sussman", oracle::read_file(fixture("blocks-domain.pddl")), "template"};
    GeneratedTasks generated = task_generator(task, planner, goal, hyps, context, {2, 50, 50, 9});
    return generated.noisy.at(1);
}
}

TEST_CASE("update_goal replaces only the goal") {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    Hypothesis same = make_hypothesis("", parse_atom_list("(on b c),(on a b)"));
    CHECK(serialize_task(update_goal(task, same)) == serialize_task(task));

    Hypothesis other = make_hypothesis("", parse_atom_list("(on a c)"));
    GroundedTask retargeted = update_goal(task, other);
    Plan plan = *plan_optimal(retargeted);
    CHECK(validate_plan(task.with_goal({*task.find_fact("(on a c)")}), plan).valid);

    CHECK_THROWS_AS(update_goal(task, make_hypothesis("", parse_atom_list("(on a z)"))), InputError);
}

TEST_CASE("loading hypotheses and adding the true goal") {
    std::vector<Hypothesis> hyps = load_hypotheses("(on a b)\n\n(on b c),(on a b)\n(clear a)\n(ontable d)\n");
    REQUIRE(hyps.size() == 4);
    CHECK(hyps[1].id == "h1");
    CHECK(hyps[1].line() == "(on a b),(on b c)");

    Hypothesis present = make_hypothesis("", parse_atom_list("(clear a)"));
    auto with_present = with_true_goal(hyps, present);
    CHECK(with_present.size() == 4);
    CHECK(with_present[2].is_true_goal);

    Hypothesis absent = make_hypothesis("", parse_atom_list("(holding a)"));
    auto with_absent = with_true_goal(hyps, absent);
    CHECK(with_absent.size() == 5);
    CHECK(with_absent[4].is_true_goal);
    CHECK(with_absent[4].id == "h4");
}

TEST_CASE("synthesized hypotheses are solvable and distinct") {
    GroundedTask task = load_fixture("blocks-domain.pddl", "blocks-sussman.pddl");
    Hypothesis goal = make_hypothesis("", parse_atom_list("(on a b),(on b c)"));
    std::vector<Hypothesis> hyps = synthesize_hypotheses(task, goal, 3, 42);
    REQUIRE(hyps.size() == 3);
    std::set<std::string> lines;
    for (const Hypothesis &h : hyps) {
        CHECK(h.atoms.size() == goal.atoms.size());
        CHECK_FALSE(same_goal(h, goal));
        lines.insert(h.line());
        CHECK(plan_optimal(update_goal(task, h)).has_value());
    }
    CHECK(lines.size() == 3);
    CHECK(synthesize_hypotheses(task, goal, 3, 42) == hyps);
    CHECK_THROWS(synthesize_hypotheses(task, goal, 0, 42));
}

TEST_CASE("observation and noise counts") {
    CHECK(observation_count(100, 10) == 10);
    CHECK(observation_count(50, 10) == 5);
    CHECK(observation_count(10, 3) == 1);
    CHECK(observation_count(30, 5) == 2);
    CHECK(observation_count(50, 5) == 3);
    CHECK(noise_count(20, 5) == 1);
    CHECK(noise_count(10, 5) == 1);
    CHECK(noise_count(0, 5) == 0);
}

TEST_CASE("selection keeps plan order and replaces exactly") {
    GroundedTask task = load_blocks("blocks-four.pddl");
    std::vector<ActionId> plan;
    for (int i = 0; i < 10; ++i)
        plan.push_back(i % task.num_actions());

    ObservationSequence full = select_observations(task, plan, 100, 0, 1);
    REQUIRE(full.size() == 10);
    for (size_t i = 0; i < plan.size(); ++i)
        CHECK(full.steps[i] == task.action(plan[i]).label());

    ObservationSequence half = select_observations(task, plan, 50, 20, 3);
    CHECK(half.size() == 5);
    CHECK(half.noise_count() == 1);
    size_t cursor = 0;
    for (size_t i = 0; i < half.size(); ++i) {
        if (half.noisy[i])
            continue;
        while (cursor < plan.size() && task.action(plan[cursor]).label() != half.steps[i])
            ++cursor;
        CHECK(cursor < plan.size());
        ++cursor;
    }

    ObservationSequence inserted = select_observations(task, plan, 50, 20, 3, NoisePolicy::Insert);
    CHECK(inserted.size() == 6);
    CHECK(inserted.noise_count() == 1);
    CHECK_THROWS(select_observations(task, std::vector<ActionId> {}, 50, 0, 1));
}

TEST_CASE("task generator builds clean and noisy variants from distinct plans") {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    Hypothesis goal = make_hypothesis("", parse_atom_list("(on a b),(on b c)"));
    std::vector<Hypothesis> others = load_hypotheses("(on c b)\n(on b a),(on a c)\n");
    Planner planner = [](const GroundedTask &t, int k) {return top_k(t, k);};
    HypothesisGenerator hyps = [&](const GroundedTask &) {return others;};
    GeneratorContext context {"sussman", "domain", "template"};

    GeneratedTasks generated = task_generator(task, planner, goal, hyps, context, {3, 100, 0, 5});
    REQUIRE(generated.clean.size() == 3);
    REQUIRE(generated.noisy.size() == 3);
    std::set<int> sources;
    for (const GoalRecognitionTask &t : generated.clean) {
        CHECK(t.hypotheses.size() == 3);
        CHECK(t.true_hypothesis().line() == goal.line());
        sources.insert(t.meta.source_plan);
        std::vector<ActionId> steps;
        for (const std::string &label : t.observations.steps)
            steps.push_back(*task.find_action(label));
        CHECK(validate_plan(task, steps).valid);
    }
    CHECK(sources.size() == 3);

    GeneratedTasks noisy = task_generator(task, planner, goal, hyps, context, {2, 50, 50, 5});
    for (const GoalRecognitionTask &t : noisy.noisy) {
        size_t obs = observation_count(50, t.meta.source_plan_length);
        CHECK(t.observations.size() == obs);
        CHECK(t.observations.noise_count() == noise_count(50, obs));
        CHECK(t.meta.group == "sussman/" + t.true_goal + "/50/50");
    }
    for (const GoalRecognitionTask &t : noisy.clean)
        CHECK(t.meta.group == "sussman/" + t.true_goal + "/50/0");
    CHECK_THROWS(task_generator(task, planner, goal, hyps, context, {0, 50, 0, 5}));
}

TEST_CASE("too few plans shortens the lists with a warning") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    Hypothesis goal = make_hypothesis("", parse_atom_list("(on a b)"));
    Planner two = [](const GroundedTask &t, int) {return top_k(t, 2);};
    HypothesisGenerator hyps = [](const GroundedTask &) {return load_hypotheses("(on b a)\n");};
    GeneratedTasks generated = task_generator(task, two, goal, hyps, {"two", "", ""}, {5, 100, 0, 1});
    CHECK(generated.clean.size() == 2);
    CHECK(generated.warnings.size() == 1);
}

TEST_CASE("generation is seed deterministic") {
    GoalRecognitionTask a = sample_task();
    GoalRecognitionTask b = sample_task();
    CHECK(a == b);
    CHECK(derive_seed(1, {"x", "y"}) == derive_seed(1, {"x", "y"}));
    CHECK(derive_seed(1, {"x", "y"}) != derive_seed(1, {"xy"}));
    CHECK(derive_seed(1, {"x"}) != derive_seed(2, {"x"}));
}

TEST_CASE("bundles round-trip") {
    GoalRecognitionTask task = sample_task();
    VariantGroup group {task.meta.group, {task}};
    auto dir = scratch_dir("bundle-roundtrip");
    serialize_bundle(group, dir);
    CHECK(deserialize_bundle(dir) == group);

    std::filesystem::remove(dir / std::to_string(task.meta.variant) / "real_hyp.dat");
    CHECK_THROWS_AS(deserialize_bundle(dir), InputError);
}

TEST_CASE("hand-written minimal bundle parses") {
    GoalRecognitionTask task = read_task_bundle(fixture("minimal_bundle") / "0");
    CHECK(task.hypotheses.size() == 1);
    CHECK(task.true_goal == "h0");
    CHECK(task.observations.steps == std::vector<std::string> {"(pick-up a)"});
    CHECK(task.meta.source_plan_cost == Rational(2));
    VariantGroup group = deserialize_bundle(fixture("minimal_bundle"));
    CHECK(group.tasks.size() == 1);
}

TEST_CASE("malformed bundle errors name the file and line") {
    auto dir = scratch_dir("bundle-malformed");
    std::filesystem::copy(fixture("minimal_bundle"), dir, std::filesystem::copy_options::recursive);
    {
        std::ofstream out(dir / "0" / "obs.dat");
        out << "(pick-up a)\n(pick-up\n";
    }
    try {
        read_task_bundle(dir / "0");
        FAIL("expected an error");
    } catch (const BundleError &e) {
        std::string message = e.what();
        CHECK(message.find("obs.dat") != std::string::npos);
        CHECK(message.find("2") != std::string::npos);
    }
}

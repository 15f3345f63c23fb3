#include "grforge/landmarks.h"
#include "grforge/recognizer.h"
#include "grforge/search.h"
#include "helpers.h"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace grforge;

namespace {
std::vector<Hypothesis> hypotheses(std::initializer_list<const char *> lines) {
    std::vector<Hypothesis> result;
    for (const char *line : lines)
        result.push_back(make_hypothesis("h" + std::to_string(result.size()), parse_atom_list(line)));
    return result;
}

ObservationSequence observe(const GroundedTask &task, const std::vector<ActionId> &steps) {
    ObservationSequence obs;
    for (ActionId a : steps) {
        obs.steps.push_back(task.action(a).label());
        obs.noisy.push_back(false);
    }
    return obs;
}
}

TEST_CASE("achieved landmarks without observations are the initial ones") {
    GroundedTask task = load_blocks("blocks-sussman.pddl");
    LandmarkSet set = extract_landmarks(task, task.goal());
    AchievedLandmarks achieved = achieved_landmarks(task, set, {});
    for (size_t i = 0; i < set.per_goal.size(); ++i) {
        std::vector<FactId> expected;
        for (FactId f : set.per_goal[i].landmarks)
            if (task.init().contains(f))
                expected.push_back(f);
        CHECK(achieved.per_goal[i] == expected);
    }
}

TEST_CASE("a full plan achieves every landmark") {
    for (const char *problem : {"blocks-sussman.pddl", "blocks-four.pddl"}) {
        GroundedTask task = load_blocks(problem);
        LandmarkSet set = extract_landmarks(task, task.goal());
        Plan plan = *plan_optimal(task);
        AchievedLandmarks achieved = achieved_landmarks(task, set, observe(task, plan.steps));
        for (size_t i = 0; i < set.per_goal.size(); ++i)
            CHECK(achieved.per_goal[i] == set.per_goal[i].landmarks);
    }
}

TEST_CASE("one observed achiever marks its landmark") {
    GroundedTask task = load_blocks("blocks-two.pddl");
    LandmarkSet set = extract_landmarks(task, task.goal());
    ObservationSequence obs = observe(task, {*task.find_action("(pick-up a)")});
    obs.steps.push_back("(fly a)");
    obs.noisy.push_back(true);
    AchievedLandmarks achieved = achieved_landmarks(task, set, obs);
    FactId holding = *task.find_fact("(holding a)");
    CHECK(std::binary_search(achieved.per_goal[0].begin(), achieved.per_goal[0].end(), holding));
    CHECK(achieved.unknown_actions == 1);
}

TEST_CASE("complete plan for the true goal selects it alone") {
    GroundedTask task = load_fixture("subgoals-domain.pddl", "subgoals-p01.pddl");
    auto hyps = hypotheses({"(on left)", "(on right)"});
    RecognitionResult r = recognize(task, hyps, observe(task, {*task.find_action("(flip-on left)")}));
    CHECK(r.scores[0] == Rational(1));
    CHECK(r.scores[1] == Rational(2, 3));
    CHECK(r.selected == std::vector<std::string> {"h0"});
    CHECK(r.is_selected("h0"));
}

TEST_CASE("empty observations select the best initial ratio") {
    GroundedTask task = load_fixture("subgoals-domain.pddl", "subgoals-p01.pddl");
    auto hyps = hypotheses({"(on left)", "(on right)", "(on left),(on right)"});
    RecognitionResult r = recognize(task, hyps, {});
    CHECK(r.selected.size() == 3);
    for (const Rational &s : r.scores)
        CHECK(s == Rational(2, 3));
}

TEST_CASE("theta widens the selection") {
    GroundedTask task = load_fixture("subgoals-domain.pddl", "subgoals-p01.pddl");
    auto hyps = hypotheses({"(on left)", "(on right)"});
    auto obs = observe(task, {*task.find_action("(flip-on left)")});
    CHECK(recognize(task, hyps, obs, {Rational(1, 3)}).selected.size() == 2);
    CHECK(recognize(task, hyps, obs, {Rational(1, 4)}).selected.size() == 1);
    CHECK_THROWS(recognize(task, hyps, obs, {Rational(2)}));
    CHECK_THROWS(recognize(task, hypotheses({"(on left)"}), obs));
}

TEST_CASE("unknown and unreachable hypotheses are never selected") {
    GroundedTask task = ground_texts(oracle::read_file(fixture("oneway-domain.pddl")),
                                     "(define (problem island) (:domain oneway)"
                                     " (:objects start end island - place)"
                                     " (:init (at start) (link start end)) (:goal (at island)))");
    auto hyps = hypotheses({"(at end)", "(at island)", "(at nowhere)"});
    LandmarkRecognizer recognizer(task, hyps);
    RecognitionResult r = recognizer.recognize({});
    CHECK(r.scores[1] == Rational(0));
    CHECK(r.scores[2] == Rational(0));
    CHECK(r.selected == std::vector<std::string> {"h0"});
    CHECK(r.diagnostics.size() >= 2);
}

TEST_CASE("scores grow along a plan and selection is the argmax") {
    GroundedTask task = load_blocks("blocks-four.pddl");
    auto hyps = hypotheses({"(on a d),(on c b)", "(on a d)", "(on b c),(on d a)", "(on c a)"});
    LandmarkRecognizer recognizer(task, hyps);
    GroundedTask retargeted = task.with_goal({*task.find_fact("(on a d)"), *task.find_fact("(on c b)")});
    Plan plan = *plan_optimal(retargeted);
    Rational previous(0);
    for (size_t n = 0; n <= plan.steps.size(); ++n) {
        std::vector<ActionId> prefix(plan.steps.begin(), plan.steps.begin() + n);
        RecognitionResult r = recognizer.recognize(observe(task, prefix));
        Rational best = *std::max_element(r.scores.begin(), r.scores.end());
        std::vector<std::string> argmax;
        for (size_t i = 0; i < r.scores.size(); ++i) {
            CHECK(r.scores[i] >= Rational(0));
            CHECK(r.scores[i] <= Rational(1));
            if (r.scores[i] == best)
                argmax.push_back(r.hypothesis_ids[i]);
        }
        CHECK(r.selected == argmax);
        CHECK(r.scores[0] >= previous);
        previous = r.scores[0];
        CHECK(recognizer.recognize(observe(task, prefix)).scores == r.scores);
    }
    CHECK(previous == Rational(1));
}

TEST_CASE("uniqueness heuristic weighs shared landmarks less") {
    GroundedTask task = load_fixture("subgoals-domain.pddl", "subgoals-p01.pddl");
    auto hyps = hypotheses({"(on left)", "(on right)"});
    RecognizerOptions options {Rational(0), RecognitionHeuristic::Uniqueness};
    RecognitionResult r = recognize(task, hyps, observe(task, {*task.find_action("(flip-on left)")}),
                                    options);
    CHECK(r.selected == std::vector<std::string> {"h0"});
    CHECK(r.scores[0] > r.scores[1]);
}

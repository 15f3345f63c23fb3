#include "grforge/metrics.h"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace grforge;

namespace {
TaskOutcome outcome(const std::string &group, int variant, int obs, bool correct, Rational accuracy,
                    Rational ppv = Rational(0), int spread = 1) {
    TaskOutcome t;
    t.group = group;
    t.variant = variant;
    t.observability = obs;
    t.correct = correct;
    t.selected = correct ? std::vector<std::string> {"h0"} : std::vector<std::string> {"h1"};
    t.metrics = {accuracy, ppv, spread};
    return t;
}

GroupOutcome group(const std::string &id, int obs, int solved, int k, Rational accuracy) {
    std::vector<TaskOutcome> tasks;
    for (int i = 0; i < k; ++i)
        tasks.push_back(outcome(id, i, obs, i < solved, accuracy));
    return group_outcomes(tasks).at(0);
}
}

TEST_CASE("task metric examples") {
    std::vector<std::string> g {"h0", "h1", "h2", "h3"};
    std::vector<std::string> only_true {"h0"};
    TaskMetrics m = task_metrics(only_true, g, "h0");
    CHECK(m.accuracy == Rational(1));
    CHECK(m.ppv == Rational(1));
    CHECK(m.spread == 1);

    std::vector<std::string> wrong {"h2"};
    m = task_metrics(wrong, g, "h0");
    CHECK(m.accuracy == Rational(1, 2));
    CHECK(m.ppv == Rational(0));

    std::vector<std::string> two {"h0", "h3"};
    m = task_metrics(two, g, "h0");
    CHECK(m.accuracy == Rational(3, 4));
    CHECK(m.ppv == Rational(1, 2));
    CHECK(m.spread == 2);

    m = task_metrics(std::vector<std::string> {}, g, "h0");
    CHECK(m.ppv == Rational(0));
    CHECK(m.accuracy == Rational(3, 4));
    CHECK_THROWS(task_metrics(only_true, g, "h9"));
}

TEST_CASE("vcs examples") {
    CHECK(group("g", 50, 1, 5, Rational(1)).vcs == Rational(1, 5));
    CHECK(group("g", 50, 0, 5, Rational(1)).vcs == Rational(0));
    CHECK(group("g", 50, 5, 5, Rational(1)).vcs == Rational(1));
    CHECK(group("g", 50, 2, 3, Rational(1)).k_effective() == 3);
    CHECK_THROWS(vcs(std::vector<TaskOutcome> {}));

    CHECK_FALSE(is_resilient(Rational(1, 5), Rational(1, 2)));
    CHECK(is_resilient(Rational(1), Rational(1)));
    CHECK(is_resilient(Rational(0), Rational(0)));
}

TEST_CASE("strict policy needs a single selection") {
    TaskOutcome t = outcome("g", 0, 50, true, Rational(3, 4), Rational(1, 2), 2);
    CHECK(t.solved(SolvedPolicy::Membership));
    CHECK_FALSE(t.solved(SolvedPolicy::Strict));
}

TEST_CASE("resilient fraction and gating") {
    std::vector<GroupOutcome> groups {group("a", 10, 5, 5, Rational(1)), group("b", 10, 1, 5, Rational(1)),
                                      group("c", 10, 3, 5, Rational(1))};
    AggregateReport report = aggregate(groups, {Rational(1, 2)});
    const ReportCell &cell = report.cells.at({10, Rational(1, 2)});
    CHECK(cell.resilient_fraction == Rational(2, 3));
    CHECK(cell.n_groups == 3);
    CHECK(cell.accuracy->mean == doctest::Approx(2.0 / 3.0));

    std::vector<GroupOutcome> single {group("s", 10, 2, 5, Rational(9, 10))};
    CHECK(aggregate(single, {Rational(1, 2)}, AggregationMode::Gate)
              .cells.at({10, Rational(1, 2)}).accuracy->mean == 0.0);
    CHECK_FALSE(aggregate(single, {Rational(1, 2)}, AggregationMode::Filter)
                    .cells.at({10, Rational(1, 2)}).accuracy);
}

TEST_CASE("gate never fires when every group is fully covered") {
    std::vector<GroupOutcome> groups {group("a", 30, 4, 4, Rational(3, 4)), group("b", 30, 2, 2, Rational(1))};
    AggregateReport report = aggregate(groups, default_thresholds());
    const ReportCell &first = report.cells.begin()->second;
    for (const auto &[key, cell] : report.cells) {
        CHECK(cell.accuracy->mean == first.accuracy->mean);
        CHECK(cell.accuracy->std == first.accuracy->std);
        CHECK(cell.resilient_fraction == Rational(1));
    }
}

TEST_CASE("modes agree at threshold zero") {
    std::vector<GroupOutcome> groups {group("a", 10, 1, 5, Rational(1, 2)), group("b", 10, 4, 5, Rational(3, 4))};
    auto gate = aggregate(groups, {Rational(0)}, AggregationMode::Gate).cells.at({10, Rational(0)});
    auto filter = aggregate(groups, {Rational(0)}, AggregationMode::Filter).cells.at({10, Rational(0)});
    CHECK(gate.accuracy->mean == filter.accuracy->mean);
    CHECK(gate.accuracy->std == filter.accuracy->std);
    CHECK(gate.accuracy->mean == doctest::Approx(0.625));
    CHECK(gate.accuracy->std == doctest::Approx(0.125));
}

TEST_CASE("merging partial reports matches the whole") {
    std::mt19937_64 rng(3);
    std::vector<GroupOutcome> groups;
    for (int i = 0; i < 40; ++i) {
        int k = 1 + static_cast<int>(rng() % 5);
        groups.push_back(group("g" + std::to_string(i), 10 * (1 + static_cast<int>(rng() % 3)),
                               static_cast<int>(rng() % (k + 1)), k,
                               Rational(static_cast<std::int64_t>(rng() % 5), 4)));
    }
    std::string whole = emit_csv(aggregate(groups, default_thresholds()));
    ReportAccumulator left(default_thresholds(), AggregationMode::Gate);
    ReportAccumulator right(default_thresholds(), AggregationMode::Gate);
    for (size_t i = 0; i < groups.size(); ++i)
        (i % 3 == 0 ? left : right).add_group(groups[i]);
    right.merge(left);
    CHECK(emit_csv(right.finish()) == whole);
}

TEST_CASE("csv output") {
    CHECK(emit_csv({}) == "obs_level,threshold,metric,mean,std,n_groups,resilient_fraction\n");
    std::vector<GroupOutcome> groups {group("a", 50, 1, 2, Rational(3, 4))};
    std::string csv = emit_csv(aggregate(groups, {Rational(1)}, AggregationMode::Filter));
    CHECK(csv == "obs_level,threshold,metric,mean,std,n_groups,resilient_fraction\n"
                 "50,1.0000,accuracy,NA,NA,0,0.0000\n"
                 "50,1.0000,ppv,NA,NA,0,0.0000\n"
                 "50,1.0000,spread,1.0000,0.0000,0,0.0000\n");
}

TEST_CASE("detail csv round-trips") {
    std::vector<TaskOutcome> tasks {outcome("p/h0/10/0", 0, 10, true, Rational(3, 4), Rational(1, 2), 2),
                                    outcome("p/h0/10/0", 1, 10, false, Rational(1, 2))};
    tasks[0].selected = {"h0", "h2"};
    tasks[1].selected = {};
    tasks[1].metrics.spread = 0;
    std::string text = emit_detail_csv(tasks);
    std::vector<TaskOutcome> parsed = parse_detail_csv(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].selected == tasks[0].selected);
    CHECK(parsed[0].metrics.accuracy == Rational(3, 4));
    CHECK(parsed[1].selected.empty());
    CHECK(emit_detail_csv(parsed) == text);
    CHECK_THROWS(parse_detail_csv("nonsense\n"));
}

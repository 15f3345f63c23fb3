#ifndef GRFORGE_METRICS_H
#define GRFORGE_METRICS_H

#include "rational.h"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace grforge {

enum class SolvedPolicy {
    // The true goal is among the selected hypotheses.
    Membership,
    // The true goal is the only selected hypothesis.
    Strict,
};

enum class AggregationMode {
    // Groups below the threshold contribute 0.
    Gate,
    // Groups below the threshold are left out.
    Filter,
};

struct TaskMetrics {
    Rational accuracy;
    Rational ppv;
    int spread = 0;
};

/*
  accuracy: fraction of hypotheses whose selected/unselected status matches
  being the true goal. ppv: 1/|selected| if the true goal is selected, else 0
  (also 0 for an empty selection). spread: |selected|.
*/
TaskMetrics task_metrics(std::span<const std::string> selected,
                         std::span<const std::string> hypotheses, const std::string &true_goal);

struct TaskOutcome {
    std::string group;
    int variant = 0;
    int observability = 0;
    int noise = 0;
    std::vector<std::string> selected;
    // Membership semantics; strict correctness is correct && spread == 1.
    bool correct = false;
    TaskMetrics metrics;
    double runtime_ms = 0.0;

    bool solved(SolvedPolicy policy) const;
};

struct GroupOutcome {
    std::string group;
    int observability = 0;
    int noise = 0;
    Rational vcs;
    std::vector<TaskOutcome> variants;

    int k_effective() const {return static_cast<int>(variants.size());}
};

// Version Coverage Score: solved variants / variants. Throws on an empty group.
Rational vcs(std::span<const TaskOutcome> variants, SolvedPolicy policy = SolvedPolicy::Membership);

inline bool is_resilient(const Rational &score, const Rational &threshold) {
    return score >= threshold;
}

// Groups outcomes by group id (sorted), computing each group's VCS.
std::vector<GroupOutcome> group_outcomes(std::span<const TaskOutcome> outcomes,
                                         SolvedPolicy policy = SolvedPolicy::Membership);

struct CellStatistic {
    double mean = 0.0;
    double std = 0.0;
    int count = 0;
};

struct ReportCell {
    // nullopt marks an empty cell (no group passed the filter).
    std::optional<CellStatistic> accuracy;
    std::optional<CellStatistic> ppv;
    std::optional<CellStatistic> spread;
    int n_groups = 0;
    Rational resilient_fraction;
};

struct AggregateReport {
    // Keyed by (observability, threshold).
    std::map<std::pair<int, Rational>, ReportCell> cells;
};

/*
  Value lists per (observability, threshold) cell that merge by
  concatenation. Statistics are computed over sorted values, so merging
  partial accumulators in any order yields bit-identical reports.
*/
class ReportAccumulator {
public:
    ReportAccumulator(std::vector<Rational> thresholds, AggregationMode mode);

    void add_group(const GroupOutcome &group);
    void merge(const ReportAccumulator &other);
    AggregateReport finish() const;

private:
    struct Values {
        std::vector<double> accuracy;
        std::vector<double> ppv;
        int groups = 0;
        int resilient = 0;
    };

    std::vector<Rational> thresholds_;
    AggregationMode mode_;
    std::map<std::pair<int, Rational>, Values> cells_;
    std::map<int, std::vector<double>> spread_;
};

/*
  Threshold sweep. Per group, accuracy and ppv are averaged over variants; in
  gate mode a group below the threshold contributes 0, in filter mode it is
  skipped. Spread is averaged over all tasks of an observability level and is
  the same for every threshold. Standard deviations are population (ddof 0).
  Thresholds must be sorted ascending and lie in [0, 1].
*/
AggregateReport aggregate(std::span<const GroupOutcome> groups, std::vector<Rational> thresholds,
                          AggregationMode mode = AggregationMode::Gate);

std::vector<Rational> default_thresholds();

// obs_level,threshold,metric,mean,std,n_groups,resilient_fraction
std::string emit_csv(const AggregateReport &report);

// group_id,variant,obs_level,noise,selected,correct,accuracy,ppv,spread,runtime_ms
std::string emit_detail_csv(std::span<const TaskOutcome> outcomes);
std::vector<TaskOutcome> parse_detail_csv(std::string_view text);

}

#endif

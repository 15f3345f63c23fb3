#include "grforge/metrics.h"

#include "grforge/errors.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

using namespace std;

namespace grforge {

TaskMetrics task_metrics(span<const string> selected, span<const string> hypotheses,
                         const string &true_goal) {
    if (find(hypotheses.begin(), hypotheses.end(), true_goal) == hypotheses.end())
        throw invalid_argument("true goal " + true_goal + " is not a hypothesis");
    auto is_selected = [&](const string &id) {
        return find(selected.begin(), selected.end(), id) != selected.end();
    };
    int64_t agreeing = 0;
    for (const string &h : hypotheses)
        if (is_selected(h) == (h == true_goal))
            ++agreeing;
    TaskMetrics metrics;
    metrics.accuracy = Rational(agreeing, static_cast<int64_t>(hypotheses.size()));
    metrics.spread = static_cast<int>(selected.size());
    if (!selected.empty() && is_selected(true_goal))
        metrics.ppv = Rational(1, static_cast<int64_t>(selected.size()));
    return metrics;
}

bool TaskOutcome::solved(SolvedPolicy policy) const {
    return policy == SolvedPolicy::Membership ? correct : correct && metrics.spread == 1;
}

Rational vcs(span<const TaskOutcome> variants, SolvedPolicy policy) {
    if (variants.empty())
        throw invalid_argument("VCS of an empty group");
    int64_t solved = count_if(variants.begin(), variants.end(),
                              [&](const TaskOutcome &t) {return t.solved(policy);});
    return Rational(solved, static_cast<int64_t>(variants.size()));
}

vector<GroupOutcome> group_outcomes(span<const TaskOutcome> outcomes, SolvedPolicy policy) {
    map<string, GroupOutcome> groups;
    for (const TaskOutcome &t : outcomes) {
        auto [it, inserted] = groups.try_emplace(t.group);
        GroupOutcome &g = it->second;
        if (inserted) {
            g.group = t.group;
            g.observability = t.observability;
            g.noise = t.noise;
        } else if (g.observability != t.observability || g.noise != t.noise) {
            throw ValidationError("group " + t.group + " mixes observability or noise levels");
        }
        g.variants.push_back(t);
    }
    vector<GroupOutcome> result;
    for (auto &[id, g] : groups) {
        sort(g.variants.begin(), g.variants.end(),
             [](const TaskOutcome &a, const TaskOutcome &b) {return a.variant < b.variant;});
        g.vcs = vcs(g.variants, policy);
        result.push_back(move(g));
    }
    return result;
}

namespace {
optional<CellStatistic> statistic(vector<double> values) {
    if (values.empty())
        return nullopt;
    sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double squares = 0.0;
    for (double v : values)
        squares += (v - mean) * (v - mean);
    return CellStatistic {mean, sqrt(squares / static_cast<double>(values.size())),
                          static_cast<int>(values.size())};
}

double mean_of(const vector<TaskOutcome> &variants, Rational TaskMetrics::*field) {
    Rational sum(0);
    for (const TaskOutcome &t : variants)
        sum += t.metrics.*field;
    return (sum / Rational(static_cast<int64_t>(variants.size()))).to_double();
}
}

ReportAccumulator::ReportAccumulator(vector<Rational> thresholds, AggregationMode mode)
    : thresholds_(move(thresholds)), mode_(mode) {
    if (!is_sorted(thresholds_.begin(), thresholds_.end()))
        throw invalid_argument("thresholds must be sorted ascending");
    for (const Rational &t : thresholds_)
        if (t < Rational(0) || t > Rational(1))
            throw invalid_argument("threshold " + t.to_string() + " outside [0, 1]");
}

void ReportAccumulator::add_group(const GroupOutcome &group) {
    if (group.variants.empty())
        throw invalid_argument("group " + group.group + " has no variants");
    const double accuracy = mean_of(group.variants, &TaskMetrics::accuracy);
    const double ppv = mean_of(group.variants, &TaskMetrics::ppv);
    for (const Rational &threshold : thresholds_) {
        Values &cell = cells_[{group.observability, threshold}];
        bool resilient = is_resilient(group.vcs, threshold);
        ++cell.groups;
        cell.resilient += resilient;
        if (resilient) {
            cell.accuracy.push_back(accuracy);
            cell.ppv.push_back(ppv);
        } else if (mode_ == AggregationMode::Gate) {
            cell.accuracy.push_back(0.0);
            cell.ppv.push_back(0.0);
        }
    }
    vector<double> &spread = spread_[group.observability];
    for (const TaskOutcome &t : group.variants)
        spread.push_back(t.metrics.spread);
}

void ReportAccumulator::merge(const ReportAccumulator &other) {
    if (other.thresholds_ != thresholds_ || other.mode_ != mode_)
        throw invalid_argument("cannot merge reports with different thresholds or modes");
    for (const auto &[key, values] : other.cells_) {
        Values &cell = cells_[key];
        cell.accuracy.insert(cell.accuracy.end(), values.accuracy.begin(), values.accuracy.end());
        cell.ppv.insert(cell.ppv.end(), values.ppv.begin(), values.ppv.end());
        cell.groups += values.groups;
        cell.resilient += values.resilient;
    }
    for (const auto &[level, values] : other.spread_) {
        vector<double> &spread = spread_[level];
        spread.insert(spread.end(), values.begin(), values.end());
    }
}

AggregateReport ReportAccumulator::finish() const {
    AggregateReport report;
    for (const auto &[key, values] : cells_) {
        ReportCell cell;
        cell.accuracy = statistic(values.accuracy);
        cell.ppv = statistic(values.ppv);
        cell.spread = statistic(spread_.at(key.first));
        cell.n_groups = mode_ == AggregationMode::Gate ? values.groups
                                                       : static_cast<int>(values.accuracy.size());
        cell.resilient_fraction = Rational(values.resilient, values.groups);
        report.cells.emplace(key, cell);
    }
    return report;
}

AggregateReport aggregate(span<const GroupOutcome> groups, vector<Rational> thresholds,
                          AggregationMode mode) {
    ReportAccumulator accumulator(move(thresholds), mode);
    for (const GroupOutcome &g : groups)
        accumulator.add_group(g);
    return accumulator.finish();
}

vector<Rational> default_thresholds() {
    vector<Rational> result;
    for (int i = 0; i <= 10; ++i)
        result.emplace_back(i, 10);
    return result;
}

namespace {
string fixed(double value, int decimals) {
    char buffer[64];
    snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    string text = buffer;
    if (text.find_first_not_of("-0.") == string::npos && text.front() == '-')
        text.erase(0, 1);
    return text;
}

vector<string> split(const string &line, char separator) {
    vector<string> fields;
    string field;
    istringstream in(line);
    while (getline(in, field, separator))
        fields.push_back(field);
    if (!line.empty() && line.back() == separator)
        fields.emplace_back();
    return fields;
}
}

string emit_csv(const AggregateReport &report) {
    string out = "obs_level,threshold,metric,mean,std,n_groups,resilient_fraction\n";
    for (const auto &[key, cell] : report.cells) {
        const auto &[level, threshold] = key;
        auto row = [&](const char *metric, const optional<CellStatistic> &stat) {
            out += to_string(level) + "," + fixed(threshold.to_double(), 4) + "," + metric + ",";
            if (stat)
                out += fixed(stat->mean, 4) + "," + fixed(stat->std, 4);
            else
                out += "NA,NA";
            out += "," + to_string(cell.n_groups) + "," +
                   fixed(cell.resilient_fraction.to_double(), 4) + "\n";
        };
        row("accuracy", cell.accuracy);
        row("ppv", cell.ppv);
        row("spread", cell.spread);
    }
    return out;
}

string emit_detail_csv(span<const TaskOutcome> outcomes) {
    string out = "group_id,variant,obs_level,noise,selected,correct,accuracy,ppv,spread,runtime_ms\n";
    for (const TaskOutcome &t : outcomes) {
        string selected;
        for (size_t i = 0; i < t.selected.size(); ++i)
            selected += (i ? ";" : "") + t.selected[i];
        out += t.group + "," + to_string(t.variant) + "," + to_string(t.observability) + "," +
               to_string(t.noise) + "," + selected + "," + (t.correct ? "1" : "0") + "," +
               fixed(t.metrics.accuracy.to_double(), 6) + "," + fixed(t.metrics.ppv.to_double(), 6) +
               "," + to_string(t.metrics.spread) + "," + fixed(t.runtime_ms, 3) + "\n";
    }
    return out;
}

vector<TaskOutcome> parse_detail_csv(string_view text) {
    istringstream in {string(text)};
    string line;
    const string header =
        "group_id,variant,obs_level,noise,selected,correct,accuracy,ppv,spread,runtime_ms";
    if (!getline(in, line) || (line.empty() ? line : line.substr(0, header.size())) != header)
        throw InputError("detail CSV: unexpected header");
    vector<TaskOutcome> outcomes;
    size_t number = 1;
    while (getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        vector<string> fields = split(line, ',');
        if (fields.size() != 10)
            throw InputError("detail CSV line " + to_string(number) + ": expected 10 fields");
        try {
            TaskOutcome t;
            t.group = fields[0];
            t.variant = stoi(fields[1]);
            t.observability = stoi(fields[2]);
            t.noise = stoi(fields[3]);
            if (!fields[4].empty())
                t.selected = split(fields[4], ';');
            t.correct = fields[5] == "1";
            t.metrics.accuracy = Rational::parse(fields[6]);
            t.metrics.ppv = Rational::parse(fields[7]);
            t.metrics.spread = stoi(fields[8]);
            t.runtime_ms = stod(fields[9]);
            outcomes.push_back(move(t));
        } catch (const logic_error &err) {
            throw InputError("detail CSV line " + to_string(number) + ": " + err.what());
        }
    }
    return outcomes;
}

}

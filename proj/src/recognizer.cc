#include "grforge/recognizer.h"

#include <algorithm>

using namespace std;

namespace grforge {
namespace {
vector<char> evidence(const GroundedTask &task, const ObservationSequence &observations,
                      size_t &unknown) {
    vector<char> seen(task.num_facts(), 0);
    for (FactId f : task.init().facts())
        seen[f] = 1;
    unknown = 0;
    for (const string &step : observations.steps) {
        optional<ActionId> a = task.find_action(step);
        if (!a) {
            ++unknown;
            continue;
        }
        for (FactId f : task.action(*a).precondition)
            seen[f] = 1;
        for (FactId f : task.action(*a).add_effects)
            seen[f] = 1;
    }
    return seen;
}
}

AchievedLandmarks achieved_landmarks(const GroundedTask &task, const LandmarkSet &landmarks,
                                     const ObservationSequence &observations) {
    AchievedLandmarks result;
    vector<char> seen = evidence(task, observations, result.unknown_actions);
    for (const GoalLandmarks &entry : landmarks.per_goal) {
        vector<FactId> achieved;
        for (FactId f : entry.landmarks)
            if (seen[f])
                achieved.push_back(f);
        result.per_goal.push_back(move(achieved));
    }
    return result;
}

bool RecognitionResult::is_selected(const string &id) const {
    return find(selected.begin(), selected.end(), id) != selected.end();
}

LandmarkRecognizer::LandmarkRecognizer(const GroundedTask &domain, vector<Hypothesis> hypotheses,
                                       RecognizerOptions options)
    : domain_(domain), hypotheses_(move(hypotheses)), options_(options) {
    if (options_.theta < Rational(0) || options_.theta > Rational(1))
        throw invalid_argument("theta must lie in [0, 1]");
    for (const Hypothesis &hyp : hypotheses_) {
        Entry entry;
        vector<FactId> goal;
        for (const FactAtom &atom : hyp.atoms) {
            optional<FactId> f = domain.find_fact(atom);
            if (!f) {
                entry.diagnostic = "hypothesis " + hyp.id + ": unknown atom " + atom.text();
                break;
            }
            goal.push_back(*f);
        }
        if (entry.diagnostic.empty()) {
            entry.landmarks = extract_landmarks(domain, goal);
            if (goal.empty())
                entry.diagnostic = "hypothesis " + hyp.id + ": empty goal";
            else if (!entry.landmarks.all_reachable())
                entry.diagnostic = "hypothesis " + hyp.id + ": unreachable goal";
            else
                entry.eligible = true;
        }
        if (entry.eligible) {
            for (const GoalLandmarks &g : entry.landmarks.per_goal)
                entry.all_landmarks.insert(entry.all_landmarks.end(), g.landmarks.begin(),
                                           g.landmarks.end());
            sort(entry.all_landmarks.begin(), entry.all_landmarks.end());
            entry.all_landmarks.erase(unique(entry.all_landmarks.begin(), entry.all_landmarks.end()),
                                      entry.all_landmarks.end());
        }
        entries_.push_back(move(entry));
    }

    vector<int> shared_by(domain.num_facts(), 0);
    for (const Entry &entry : entries_)
        for (FactId f : entry.all_landmarks)
            ++shared_by[f];
    uniqueness_.assign(domain.num_facts(), Rational(0));
    for (FactId f = 0; f < domain.num_facts(); ++f)
        if (shared_by[f] > 0)
            uniqueness_[f] = Rational(1, shared_by[f]);
}

RecognitionResult LandmarkRecognizer::recognize(const ObservationSequence &observations) const {
    const auto start = chrono::steady_clock::now();
    RecognitionResult result;
    vector<char> seen = evidence(domain_, observations, result.unknown_observations);

    optional<Rational> best;
    for (size_t i = 0; i < hypotheses_.size(); ++i) {
        const Entry &entry = entries_[i];
        result.hypothesis_ids.push_back(hypotheses_[i].id);
        Rational score(0);
        if (!entry.eligible) {
            result.diagnostics.push_back(entry.diagnostic);
        } else if (options_.heuristic == RecognitionHeuristic::GoalCompletion) {
            for (const GoalLandmarks &g : entry.landmarks.per_goal) {
                int64_t achieved = count_if(g.landmarks.begin(), g.landmarks.end(),
                                            [&](FactId f) {return seen[f] != 0;});
                score += Rational(achieved, static_cast<int64_t>(g.landmarks.size()));
            }
            score /= Rational(static_cast<int64_t>(entry.landmarks.per_goal.size()));
        } else {
            Rational achieved(0), total(0);
            for (FactId f : entry.all_landmarks) {
                total += uniqueness_[f];
                if (seen[f])
                    achieved += uniqueness_[f];
            }
            score = achieved / total;
        }
        result.scores.push_back(score);
        if (entry.eligible && (!best || score > *best))
            best = score;
    }
    if (best) {
        for (size_t i = 0; i < hypotheses_.size(); ++i)
            if (entries_[i].eligible && result.scores[i] >= *best - options_.theta)
                result.selected.push_back(hypotheses_[i].id);
    }
    result.duration = chrono::steady_clock::now() - start;
    return result;
}

RecognitionResult recognize(const GroundedTask &domain, const vector<Hypothesis> &hypotheses,
                            const ObservationSequence &observations,
                            const RecognizerOptions &options) {
    if (hypotheses.size() < 2)
        throw invalid_argument("goal recognition needs at least two hypotheses");
    return LandmarkRecognizer(domain, hypotheses, options).recognize(observations);
}

}

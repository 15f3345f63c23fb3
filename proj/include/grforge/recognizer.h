#ifndef GRFORGE_RECOGNIZER_H
#define GRFORGE_RECOGNIZER_H

#include "hypothesis.h"
#include "landmarks.h"

#include <chrono>

namespace grforge {

struct AchievedLandmarks {
    // Aligned with LandmarkSet::per_goal; sorted fact ids.
    std::vector<std::vector<FactId>> per_goal;
    // Observations that name no action of the task (skipped).
    std::size_t unknown_actions = 0;
};

/*
  A landmark counts as achieved when it holds initially or appears among the
  preconditions or add effects of any observed action. Preconditions count
  because an executed action's preconditions must have held.
*/
AchievedLandmarks achieved_landmarks(const GroundedTask &task, const LandmarkSet &landmarks,
                                     const ObservationSequence &observations);

enum class RecognitionHeuristic {
    // Mean over goal atoms of achieved/total landmarks.
    GoalCompletion,
    // Achieved landmark mass where each landmark weighs 1/(number of
    // hypotheses sharing it).
    Uniqueness,
};

struct RecognizerOptions {
    // Every hypothesis scoring at least max - theta is selected.
    Rational theta {0};
    RecognitionHeuristic heuristic = RecognitionHeuristic::GoalCompletion;
};

struct RecognitionResult {
    std::vector<std::string> hypothesis_ids;
    std::vector<Rational> scores;
    std::vector<std::string> selected;
    std::vector<std::string> diagnostics;
    std::size_t unknown_observations = 0;
    std::chrono::duration<double, std::milli> duration {};

    bool is_selected(const std::string &id) const;
};

/*
  Landmark-based goal recogniser. Landmarks are extracted once per hypothesis
  at construction, so one instance can score many observation sequences over
  the same domain and hypothesis set. Hypotheses with atoms outside the fact
  universe or relaxed-unreachable atoms score 0 and are never selected.
*/
class LandmarkRecognizer {
public:
    LandmarkRecognizer(const GroundedTask &domain, std::vector<Hypothesis> hypotheses,
                       RecognizerOptions options = {});

    RecognitionResult recognize(const ObservationSequence &observations) const;

    const std::vector<Hypothesis> &hypotheses() const {return hypotheses_;}
    const LandmarkSet &landmarks(std::size_t hypothesis) const {return entries_[hypothesis].landmarks;}

private:
    struct Entry {
        bool eligible = false;
        std::string diagnostic;
        LandmarkSet landmarks;
        // Union over goal atoms, for the uniqueness heuristic.
        std::vector<FactId> all_landmarks;
    };

    const GroundedTask &domain_;
    std::vector<Hypothesis> hypotheses_;
    RecognizerOptions options_;
    std::vector<Entry> entries_;
    std::vector<Rational> uniqueness_;
};

// One-shot form. Requires at least two hypotheses and theta in [0, 1].
RecognitionResult recognize(const GroundedTask &domain, const std::vector<Hypothesis> &hypotheses,
                            const ObservationSequence &observations,
                            const RecognizerOptions &options = {});

}

#endif

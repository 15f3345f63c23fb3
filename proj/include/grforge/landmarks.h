#ifndef GRFORGE_LANDMARKS_H
#define GRFORGE_LANDMARKS_H

#include "task.h"

#include <span>

namespace grforge {

struct GoalLandmarks {
    FactId goal = -1;
    // False when the goal atom is not reachable even under the delete relaxation.
    bool reachable = true;
    // Sorted; always contains `goal` when reachable.
    std::vector<FactId> landmarks;
    // Landmarks already true in the initial state.
    std::vector<FactId> trivially_achieved;
};

struct LandmarkSet {
    std::vector<GoalLandmarks> per_goal;

    bool all_reachable() const;
    const GoalLandmarks *find(FactId goal) const;
};

/*
  Fact landmarks per goal atom by backchaining: starting from the goal atom,
  for every landmark f not in the initial state collect its possible first
  achievers (achievers whose preconditions are relaxed-reachable without any
  action that adds f) and add the facts shared by all their preconditions.
  Sound but incomplete; no orderings, no disjunctive landmarks.
*/
LandmarkSet extract_landmarks(const GroundedTask &task, std::span<const FactId> goal);

/*
  True iff removing every achiever of `fact` makes the goal unreachable in the
  real (not relaxed) state space. Exhaustive search; meant for small tasks.
  Throws std::invalid_argument for facts of the initial state.
*/
bool landmark_oracle(const GroundedTask &task, std::span<const FactId> goal, FactId fact,
                     std::size_t max_states = 1'000'000);

// "goal-atom : lm1, lm2, ..." per goal atom; unreachable atoms end in ": unreachable".
std::string format_landmarks(const GroundedTask &task, const LandmarkSet &landmarks);

}

#endif

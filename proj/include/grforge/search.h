#ifndef GRFORGE_SEARCH_H
#define GRFORGE_SEARCH_H

#include "task.h"

#include <chrono>
#include <optional>

namespace grforge {

// nullopt encodes an infinite estimate (dead end).
using Estimate = std::optional<Rational>;

/*
  h^max over the delete relaxation, computed with a Dijkstra-style fixpoint:
  a fact costs the cheapest achiever's cost plus its most expensive
  precondition; the estimate is the most expensive goal fact. Admissible and
  consistent.
*/
class HMaxHeuristic {
public:
    explicit HMaxHeuristic(const GroundedTask &task);

    Estimate evaluate(const State &state) const;
    Estimate evaluate(const State &state, std::span<const FactId> goal) const;

private:
    const GroundedTask &task_;
    std::vector<ActionId> precondition_free_;
};

Estimate h_max(const GroundedTask &task, const State &state, std::span<const FactId> goal);

struct SearchLimits {
    std::size_t max_expansions = 1'000'000;
    std::optional<std::chrono::milliseconds> max_time;
};

struct SearchStatistics {
    std::size_t expanded = 0;
    std::size_t generated = 0;
    std::size_t reopened = 0;
    std::size_t dead_ends = 0;
};

/*
  A* with h^max and duplicate detection. Open-list ties on f are broken by
  lower h, then by insertion order, so the returned plan is deterministic.
  Returns nullopt iff the task has no plan; throws ResourceLimitError when a
  budget is exhausted first.
*/
std::optional<Plan> plan_optimal(const GroundedTask &task, const SearchLimits &limits = {},
                                 SearchStatistics *statistics = nullptr);

}

#endif

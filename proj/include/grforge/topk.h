#ifndef GRFORGE_TOPK_H
#define GRFORGE_TOPK_H

#include "search.h"

#include <filesystem>
#include <span>

namespace grforge {

/*
  Task whose plans are exactly the plans of a source task minus a set of
  forbidden action sequences. Every action of the reformulated task is a
  copy of a source action (same cost), recorded in `origin`.

  Compilation, with all added facts positive:
    following / diverged    whether the sequence so far is still a prefix of
                            some forbidden plan
    at(v)                   current node of the prefix trie of forbidden plans
    open(b)                 source action b is NOT the label of an edge
                            leaving the current trie node
    unfinished              the sequence is not a complete forbidden plan;
                            conjoined to the goal
  Each source action gets a copy usable after divergence, a copy that leaves
  the trie (requires open(b) when b labels some trie edge), and one copy per
  trie edge it labels. Hence |A'| = 2|A| + (number of trie edges).
*/
struct ForbidReformulation {
    GroundedTask task;
    std::vector<ActionId> origin;

    // Maps a plan of the reformulated task back to source action ids.
    Plan project(const GroundedTask &source, const Plan &plan) const;
};

// Throws std::invalid_argument when the plan does not validate.
ForbidReformulation forbid_plan(const GroundedTask &task, const Plan &plan);
ForbidReformulation forbid_plans(const GroundedTask &task, std::span<const Plan> plans);

struct PlanSet {
    std::string source_task;
    std::vector<Plan> plans;
    // Set when enumeration stopped on a resource limit.
    bool truncated = false;
};

struct TopKOptions {
    SearchLimits limits;
    // Stop once the next plan would cost more than bound × optimal cost.
    std::optional<Rational> quality_bound;
};

class TopKResourceLimit : public ResourceLimitError {
public:
    TopKResourceLimit(const std::string &message, PlanSet partial)
        : ResourceLimitError(message), partial_(std::move(partial)) {}
    const PlanSet &partial() const {return partial_;}

private:
    PlanSet partial_;
};

/*
  Up to k distinct plans in non-decreasing cost order: solve optimally, keep
  the plan, forbid it, repeat. Each round reformulates the source task with
  all plans found so far, so task growth stays linear in the number of plan
  steps. Stops early when no further plan exists.
*/
PlanSet top_k(const GroundedTask &task, int k, const TopKOptions &options = {});

// Writes <dir>/sas_plan.1 ... sas_plan.n in format_plan() layout.
void write_plan_set(const std::filesystem::path &dir, const GroundedTask &task,
                    const PlanSet &plans);

}

#endif

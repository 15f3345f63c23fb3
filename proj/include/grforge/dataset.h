#ifndef GRFORGE_DATASET_H
#define GRFORGE_DATASET_H

#include "hypothesis.h"
#include "topk.h"

#include <cstdint>
#include <filesystem>
#include <functional>

namespace grforge {

struct TaskMetadata {
    std::string group;
    int observability = 100;
    int noise = 0;
    int variant = 0;
    int k = 1;
    std::uint64_t seed = 0;
    int source_plan = 0;
    std::size_t source_plan_length = 0;
    Rational source_plan_cost;

    friend bool operator==(const TaskMetadata &, const TaskMetadata &) = default;
};

// One goal recognition problem: domain, hypotheses, observations, hidden goal.
struct GoalRecognitionTask {
    std::string problem;
    std::string domain_text;
    std::string template_text;
    std::vector<Hypothesis> hypotheses;
    ObservationSequence observations;
    std::string true_goal;
    TaskMetadata meta;

    const Hypothesis &true_hypothesis() const;

    friend bool operator==(const GoalRecognitionTask &, const GoalRecognitionTask &) = default;
};

// Versions of one task that differ only in the observation sequence.
struct VariantGroup {
    std::string id;
    std::vector<GoalRecognitionTask> tasks;

    // Throws ValidationError when members disagree on shared fields.
    void check() const;

    friend bool operator==(const VariantGroup &, const VariantGroup &) = default;
};

std::string group_id(const std::string &problem, const std::string &goal_id, int observability,
                     int noise);

// The task with its goal replaced by the hypothesis. Throws InputError for
// atoms outside the fact universe.
GroundedTask update_goal(const GroundedTask &task, const Hypothesis &goal);

// hyps.dat content: one comma-separated conjunction per non-empty line.
// Ids are "h0", "h1", ... in line order.
std::vector<Hypothesis> load_hypotheses(std::string_view text);

// Union with the true goal: marks the matching hypothesis, or appends the
// goal when absent; ids are renumbered positionally.
std::vector<Hypothesis> with_true_goal(std::vector<Hypothesis> hypotheses, const Hypothesis &goal);

struct SynthesisOptions {
    int max_attempts = 2000;
    SearchLimits limits {100'000, std::nullopt};
};

/*
  Samples `count` distinct conjunctions with as many atoms as the true goal.
  Atoms come from h^2-reachable facts and are pairwise non-mutex; every
  candidate must be solvable, not already true initially, and different from
  the true goal. Throws InputError when the attempt budget runs out.
*/
std::vector<Hypothesis> synthesize_hypotheses(const GroundedTask &task, const Hypothesis &goal,
                                              int count, std::uint64_t seed,
                                              const SynthesisOptions &options = {});

enum class NoisePolicy {Replace, Insert};

// max(1, round-half-up(observability / 100 * length)).
std::size_t observation_count(int observability, std::size_t length);
// round-half-up(noise / 100 * observations).
std::size_t noise_count(int noise, std::size_t observations);

/*
  Uniform random subset of the plan's steps of size observation_count(),
  kept in plan order. Then noise_count() entries are corrupted: Replace swaps
  the chosen entries for a different, uniformly drawn action of the task;
  Insert adds that many random actions at random positions instead.
*/
ObservationSequence select_observations(const GroundedTask &task, std::span<const ActionId> plan,
                                        int observability, int noise, std::uint64_t seed,
                                        NoisePolicy policy = NoisePolicy::Replace);

struct GeneratorContext {
    std::string problem;
    std::string domain_text;
    std::string template_text;
};

struct TaskGeneratorConfig {
    int k = 1;
    int observability = 100;
    int noise = 0;
    std::uint64_t master_seed = 0;
    NoisePolicy policy = NoisePolicy::Replace;
};

using Planner = std::function<PlanSet(const GroundedTask &, int)>;
using HypothesisGenerator = std::function<std::vector<Hypothesis>(const GroundedTask &)>;

struct GeneratedTasks {
    std::vector<GoalRecognitionTask> clean;
    std::vector<GoalRecognitionTask> noisy;
    PlanSet plans;
    std::vector<std::string> warnings;
};

/*
  Builds up to k clean and k noisy recognition tasks for one true goal:
  retarget the task to the goal, enumerate k plans, generate the hypothesis
  set (always containing the goal), then sample each plan once without noise
  and once with noise. Clean and noisy samples use independent seeds,
  derived from the master seed and (problem, goal, O, N, variant); clean
  samples use N = 0.
*/
GeneratedTasks task_generator(const GroundedTask &task, const Planner &planner,
                              const Hypothesis &goal, const HypothesisGenerator &hypotheses,
                              const GeneratorContext &context, const TaskGeneratorConfig &config);

class BundleError : public InputError {
public:
    BundleError(const std::filesystem::path &file, std::size_t line, const std::string &message);
};

/*
  Layout, one directory per variant under `dir`:
    <variant>/domain.pddl     domain text as given
    <variant>/template.pddl   problem without goal
    <variant>/hyps.dat        one hypothesis per line
    <variant>/real_hyp.dat    the true goal, same format
    <variant>/obs.dat         one action label per line
    <variant>/meta.json       generation metadata
*/
void serialize_bundle(const VariantGroup &group, const std::filesystem::path &dir);
VariantGroup deserialize_bundle(const std::filesystem::path &dir);
GoalRecognitionTask read_task_bundle(const std::filesystem::path &variant_dir);

}

#endif

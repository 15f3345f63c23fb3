#ifndef GRFORGE_CLI_H
#define GRFORGE_CLI_H

#include "dataset.h"
#include "metrics.h"
#include "recognizer.h"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace grforge {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal_error = 1;
inline constexpr int input_error = 2;
inline constexpr int resource_limit = 3;
inline constexpr int validation_failure = 4;
}

struct RunConfig {
    std::string subcommand;
    std::filesystem::path domain;
    std::vector<std::filesystem::path> problems;
    // Either one file shared by all problems or one per problem.
    std::vector<std::filesystem::path> hyps;
    // Synth mode when > 0: the problem goal plus this many sampled hypotheses.
    int synth_hyps = 0;
    int k = 5;
    std::vector<int> observability {10, 30, 50, 70, 100};
    std::vector<int> noise {0, 10, 20, 30};
    // evaluate keeps only groups with these noise levels when set.
    bool filter_noise = false;
    std::vector<Rational> thresholds = default_thresholds();
    std::optional<std::uint64_t> seed;
    Rational theta {0};
    RecognitionHeuristic heuristic = RecognitionHeuristic::GoalCompletion;
    NoisePolicy noise_policy = NoisePolicy::Replace;
    SolvedPolicy solved_policy = SolvedPolicy::Membership;
    AggregationMode agg_mode = AggregationMode::Gate;
    int jobs = 1;
    // Dataset directory or detail CSV, for recognize / evaluate / validate.
    std::filesystem::path input;
    std::filesystem::path out;
    bool timing = true;
    SearchLimits limits;

    // Throws InputError on violated invariants for the subcommand.
    void check() const;
};

struct GenerateSummary {
    std::size_t bundles = 0;
    std::vector<std::string> warnings;
    bool complete = true;
};

/*
  Writes <out>/<problem>/<hyp_id>/<O>/<N>/<variant>/ for every hypothesis
  taken as the true goal, plus <out>/manifest.json. Clean tasks live under
  N = 0. On failure the manifest is still written with status "partial".
*/
GenerateSummary run_generate(const RunConfig &config);

// Recognises every bundle below config.input, in path order.
std::vector<TaskOutcome> run_recognize(const RunConfig &config);

// config.input is a detail CSV or a dataset directory.
AggregateReport run_evaluate(const RunConfig &config);

// One message per failed check; empty when the dataset is consistent.
std::vector<std::string> run_validate(const RunConfig &config);

// Bundle directories (those holding meta.json) below root, sorted.
std::vector<std::filesystem::path> find_bundles(const std::filesystem::path &root);

// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}

#endif

#include "grforge/cli.h"

#include "grforge/grounding.h"
#include "grforge/landmarks.h"
#include "grforge/parallel.h"
#include "grforge/random.h"
#include "grforge/recognizer.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

using namespace std;
using json = nlohmann::json;

namespace grforge {
namespace {
string read_text(const filesystem::path &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_text(const filesystem::path &path, const string &text) {
    if (path.has_parent_path())
        filesystem::create_directories(path.parent_path());
    ofstream out(path, ios::binary);
    if (!out || !(out << text))
        throw InputError("cannot write " + path.string());
}

const char *policy_name(NoisePolicy policy) {
    return policy == NoisePolicy::Replace ? "replace" : "insert";
}

bool goal_holds_initially(const GroundedTask &task, const Hypothesis &goal) {
    for (const FactAtom &atom : goal.atoms) {
        optional<FactId> fact = task.find_fact(atom);
        if (!fact || !task.init().contains(*fact))
            return false;
    }
    return true;
}

bool in_universe(const GroundedTask &task, const Hypothesis &goal) {
    return all_of(goal.atoms.begin(), goal.atoms.end(),
                  [&](const FactAtom &atom) {return task.find_fact(atom).has_value();});
}

struct ProblemInput {
    string name;
    filesystem::path file;
    string template_text;
    unique_ptr<GroundedTask> task;
    vector<Hypothesis> hypotheses;
    optional<uint64_t> synth_seed;
};

struct BundleRecord {
    string path;
    string group;
    int observability;
    int noise;
    int variant;
    uint64_t seed;
};

struct UnitResult {
    bool done = false;
    bool skipped = false;
    size_t plans_found = 0;
    bool truncated = false;
    vector<Rational> plan_costs;
    vector<BundleRecord> bundles;
    vector<string> warnings;
};

vector<int> noise_levels(const RunConfig &config) {
    set<int> levels(config.noise.begin(), config.noise.end());
    levels.insert(0);
    return {levels.begin(), levels.end()};
}

vector<Hypothesis> clear_flags(vector<Hypothesis> hypotheses) {
    for (Hypothesis &h : hypotheses)
        h.is_true_goal = false;
    return hypotheses;
}

ProblemInput load_problem(const RunConfig &config, const pddl::Domain &domain, size_t index) {
    ProblemInput input;
    input.file = config.problems[index];
    pddl::Problem problem = pddl::parse_problem(read_text(input.file));
    input.name = problem.name;
    input.template_text = pddl::write_problem_template(problem);
    input.task = make_unique<GroundedTask>(ground(domain, problem));

    optional<Hypothesis> goal;
    if (problem.has_goal && !input.task->goal().empty()) {
        vector<FactAtom> atoms;
        for (FactId f : input.task->goal())
            atoms.push_back(input.task->fact(f));
        goal = make_hypothesis("", move(atoms));
    }
    if (config.synth_hyps > 0) {
        if (!goal)
            throw InputError(input.file.string() + ": synthesizing hypotheses needs a problem goal");
        input.synth_seed = derive_seed(*config.seed, {input.name, "hypotheses"});
        input.hypotheses = clear_flags(with_true_goal(
            synthesize_hypotheses(*input.task, *goal, config.synth_hyps, *input.synth_seed), *goal));
    } else {
        const filesystem::path &file = config.hyps.size() == 1 ? config.hyps.front()
                                                                : config.hyps[index];
        input.hypotheses = load_hypotheses(read_text(file));
        if (goal)
            input.hypotheses = clear_flags(with_true_goal(move(input.hypotheses), *goal));
    }
    if (input.hypotheses.size() < 2)
        throw InputError(input.file.string() + ": need at least two goal hypotheses");
    return input;
}

UnitResult generate_unit(const RunConfig &config, const ProblemInput &input,
                         const string &domain_text, size_t hyp_index) {
    UnitResult result;
    const Hypothesis &goal = input.hypotheses[hyp_index];
    const string where = input.name + " " + goal.id;
    if (!in_universe(*input.task, goal)) {
        result.skipped = true;
        result.warnings.push_back(where + ": goal has unreachable atoms, skipped");
        return result;
    }
    if (goal_holds_initially(*input.task, goal)) {
        result.skipped = true;
        result.warnings.push_back(where + ": goal holds initially, skipped");
        return result;
    }

    optional<PlanSet> cached;
    Planner planner = [&](const GroundedTask &task, int k) {
        if (!cached) {
            try {
                cached = top_k(task, k, TopKOptions {config.limits, nullopt});
            } catch (const TopKResourceLimit &limit) {
                cached = limit.partial();
                result.warnings.push_back(where + ": " + limit.what() + "; keeping " +
                                          to_string(cached->plans.size()) + " plans");
            }
        }
        return *cached;
    };
    HypothesisGenerator hypotheses = [&](const GroundedTask &) {return input.hypotheses;};
    GeneratorContext context {input.name, domain_text, input.template_text};

    set<string> seen_warnings(result.warnings.begin(), result.warnings.end());
    for (int observability : config.observability) {
        for (int noise : noise_levels(config)) {
            TaskGeneratorConfig generator {config.k, observability, noise, *config.seed,
                                           config.noise_policy};
            GeneratedTasks generated =
                task_generator(*input.task, planner, goal, hypotheses, context, generator);
            for (const string &w : generated.warnings)
                if (seen_warnings.insert(w).second)
                    result.warnings.push_back(w);
            result.plans_found = generated.plans.plans.size();
            result.truncated = generated.plans.truncated;
            result.plan_costs.clear();
            for (const Plan &p : generated.plans.plans)
                result.plan_costs.push_back(p.cost);

            VariantGroup group;
            group.tasks = noise == 0 ? move(generated.clean) : move(generated.noisy);
            if (group.tasks.empty())
                continue;
            group.id = group.tasks.front().meta.group;
            const filesystem::path relative = filesystem::path(input.name) / goal.id /
                                              to_string(observability) / to_string(noise);
            serialize_bundle(group, config.out / relative);
            for (const GoalRecognitionTask &t : group.tasks)
                result.bundles.push_back({(relative / to_string(t.meta.variant)).generic_string(),
                                          group.id, observability, noise, t.meta.variant,
                                          t.meta.seed});
        }
    }
    if (result.truncated)
        result.warnings.push_back(where + ": plan enumeration truncated");
    result.done = true;
    return result;
}

json config_json(const RunConfig &config) {
    json c;
    c["domain"] = config.domain.generic_string();
    json problems = json::array();
    for (const auto &p : config.problems)
        problems.push_back(p.generic_string());
    c["problems"] = problems;
    json hyps = json::array();
    for (const auto &h : config.hyps)
        hyps.push_back(h.generic_string());
    c["hyps"] = hyps;
    c["synth_hyps"] = config.synth_hyps;
    c["k"] = config.k;
    c["observability"] = config.observability;
    c["noise"] = config.noise;
    c["seed"] = *config.seed;
    c["noise_policy"] = policy_name(config.noise_policy);
    c["max_expansions"] = config.limits.max_expansions;
    return c;
}
}

void RunConfig::check() const {
    auto percentages = [](const vector<int> &values, const char *what) {
        if (values.empty())
            throw InputError(string(what) + " list is empty");
        for (int v : values)
            if (v < 0 || v > 100)
                throw InputError(string(what) + " " + to_string(v) + " outside [0, 100]");
    };
    if (subcommand == "generate") {
        if (!seed)
            throw InputError("generate requires --seed");
        if (domain.empty() || problems.empty())
            throw InputError("generate requires --domain and --problem");
        if (out.empty())
            throw InputError("generate requires --out");
        if (k < 1)
            throw InputError("--k must be at least 1");
        if (synth_hyps < 0)
            throw InputError("--synth-hyps must be positive");
        if (synth_hyps > 0 && !hyps.empty())
            throw InputError("--hyps and --synth-hyps are mutually exclusive");
        if (synth_hyps == 0 && hyps.empty())
            throw InputError("generate requires --hyps or --synth-hyps");
        if (hyps.size() > 1 && hyps.size() != problems.size())
            throw InputError("give one --hyps file, or one per --problem");
        percentages(observability, "observability");
        percentages(noise, "noise");
        for (int o : observability)
            if (o == 0)
                throw InputError("observability must be positive");
    }
    if (subcommand == "recognize" || subcommand == "evaluate" || subcommand == "validate")
        if (input.empty())
            throw InputError(subcommand + " requires an input path");
    if (subcommand == "evaluate") {
        if (thresholds.empty())
            throw InputError("threshold list is empty");
        if (!is_sorted(thresholds.begin(), thresholds.end()))
            throw InputError("thresholds must be sorted ascending");
        for (const Rational &t : thresholds)
            if (t < Rational(0) || t > Rational(1))
                throw InputError("threshold " + t.to_string() + " outside [0, 1]");
        if (filter_noise)
            percentages(noise, "noise");
    }
    if (theta < Rational(0) || theta > Rational(1))
        throw InputError("--theta must lie in [0, 1]");
    if (jobs < 1)
        throw InputError("--jobs must be at least 1");
}

GenerateSummary run_generate(const RunConfig &config) {
    config.check();
    if (filesystem::exists(config.out) && !filesystem::is_empty(config.out))
        throw InputError("output directory " + config.out.string() + " is not empty");
    filesystem::create_directories(config.out);

    const string domain_text = read_text(config.domain);
    const pddl::Domain domain = pddl::parse_domain(domain_text);

    vector<ProblemInput> inputs;
    set<string> names;
    for (size_t i = 0; i < config.problems.size(); ++i) {
        inputs.push_back(load_problem(config, domain, i));
        if (!names.insert(inputs.back().name).second)
            throw InputError("duplicate problem name " + inputs.back().name);
    }

    vector<pair<size_t, size_t>> units;
    for (size_t p = 0; p < inputs.size(); ++p)
        for (size_t h = 0; h < inputs[p].hypotheses.size(); ++h)
            units.emplace_back(p, h);
    vector<UnitResult> results(units.size());

    exception_ptr failure;
    try {
        parallel_for(units.size(), config.jobs, [&](size_t i) {
            results[i] = generate_unit(config, inputs[units[i].first], domain_text, units[i].second);
        });
    } catch (...) {
        failure = current_exception();
    }

    GenerateSummary summary;
    json manifest;
    manifest["config"] = config_json(config);
    json problems = json::array();
    json bundles = json::array();
    json warnings = json::array();
    for (size_t p = 0; p < inputs.size(); ++p) {
        const ProblemInput &input = inputs[p];
        json entry;
        entry["name"] = input.name;
        entry["file"] = input.file.generic_string();
        if (input.synth_seed)
            entry["hypothesis_seed"] = *input.synth_seed;
        json hyps = json::array();
        json goals = json::array();
        for (size_t h = 0; h < input.hypotheses.size(); ++h) {
            hyps.push_back({{"id", input.hypotheses[h].id}, {"atoms", input.hypotheses[h].line()}});
            size_t u = find(units.begin(), units.end(), make_pair(p, h)) - units.begin();
            const UnitResult &r = results[u];
            if (!r.done && !r.skipped) {
                summary.complete = false;
                continue;
            }
            for (const string &w : r.warnings) {
                warnings.push_back(w);
                summary.warnings.push_back(w);
            }
            if (r.skipped)
                continue;
            json costs = json::array();
            for (const Rational &c : r.plan_costs)
                costs.push_back(c.to_string());
            goals.push_back({{"hyp_id", input.hypotheses[h].id},
                             {"k_effective", r.plans_found},
                             {"plan_costs", costs},
                             {"truncated", r.truncated}});
            if (r.truncated)
                summary.complete = false;
            for (const BundleRecord &b : r.bundles) {
                bundles.push_back({{"path", b.path}, {"group", b.group},
                                   {"observability", b.observability}, {"noise", b.noise},
                                   {"variant", b.variant}, {"seed", b.seed}});
                ++summary.bundles;
            }
        }
        entry["hypotheses"] = hyps;
        entry["goals"] = goals;
        problems.push_back(entry);
    }
    if (failure)
        summary.complete = false;
    manifest["problems"] = problems;
    manifest["bundles"] = bundles;
    manifest["warnings"] = warnings;
    manifest["status"] = summary.complete ? "complete" : "partial";
    if (failure) {
        try {
            rethrow_exception(failure);
        } catch (const exception &err) {
            manifest["error"] = err.what();
        }
    }
    write_text(config.out / "manifest.json", manifest.dump(2) + "\n");
    if (failure)
        rethrow_exception(failure);
    return summary;
}

vector<filesystem::path> find_bundles(const filesystem::path &root) {
    if (!filesystem::is_directory(root))
        throw InputError(root.string() + " is not a directory");
    vector<filesystem::path> result;
    for (const auto &entry : filesystem::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().filename() == "meta.json")
            result.push_back(entry.path().parent_path());
    sort(result.begin(), result.end());
    return result;
}

namespace {
struct RecognitionModel {
    unique_ptr<GroundedTask> task;
    unique_ptr<LandmarkRecognizer> recognizer;
};

string model_key(const GoalRecognitionTask &task) {
    string key = task.domain_text + '\0' + task.template_text + '\0';
    for (const Hypothesis &h : task.hypotheses)
        key += h.line() + '\n';
    return key;
}

vector<GoalRecognitionTask> read_bundles(const vector<filesystem::path> &dirs, int jobs) {
    vector<GoalRecognitionTask> tasks(dirs.size());
    parallel_for(dirs.size(), jobs, [&](size_t i) {tasks[i] = read_task_bundle(dirs[i]);});
    return tasks;
}
}

vector<TaskOutcome> run_recognize(const RunConfig &config) {
    config.check();
    const vector<filesystem::path> dirs = find_bundles(config.input);
    const vector<GoalRecognitionTask> tasks = read_bundles(dirs, config.jobs);

    map<string, RecognitionModel> models;
    vector<const GoalRecognitionTask *> representatives;
    for (const GoalRecognitionTask &t : tasks)
        if (models.try_emplace(model_key(t)).second)
            representatives.push_back(&t);
    RecognizerOptions options {config.theta, config.heuristic};
    parallel_for(representatives.size(), config.jobs, [&](size_t i) {
        const GoalRecognitionTask &t = *representatives[i];
        RecognitionModel &model = models.at(model_key(t));
        model.task = make_unique<GroundedTask>(ground_texts(t.domain_text, t.template_text));
        vector<Hypothesis> hyps = clear_flags(t.hypotheses);
        model.recognizer = make_unique<LandmarkRecognizer>(*model.task, move(hyps), options);
    });

    vector<TaskOutcome> outcomes(tasks.size());
    parallel_for(tasks.size(), config.jobs, [&](size_t i) {
        const GoalRecognitionTask &t = tasks[i];
        const RecognitionModel &model = models.at(model_key(t));
        RecognitionResult r = model.recognizer->recognize(t.observations);
        TaskOutcome &o = outcomes[i];
        o.group = t.meta.group;
        o.variant = t.meta.variant;
        o.observability = t.meta.observability;
        o.noise = t.meta.noise;
        o.selected = r.selected;
        o.correct = r.is_selected(t.true_goal);
        o.metrics = task_metrics(r.selected, r.hypothesis_ids, t.true_goal);
        o.runtime_ms = config.timing ? r.duration.count() : 0.0;
    });
    return outcomes;
}

AggregateReport run_evaluate(const RunConfig &config) {
    config.check();
    vector<TaskOutcome> outcomes;
    if (filesystem::is_directory(config.input)) {
        outcomes = run_recognize(config);
    } else {
        outcomes = parse_detail_csv(read_text(config.input));
    }
    if (config.filter_noise) {
        erase_if(outcomes, [&](const TaskOutcome &o) {
            return find(config.noise.begin(), config.noise.end(), o.noise) == config.noise.end();
        });
    }
    vector<GroupOutcome> groups = group_outcomes(outcomes, config.solved_policy);
    return aggregate(groups, config.thresholds, config.agg_mode);
}

vector<string> run_validate(const RunConfig &config) {
    config.check();
    const vector<filesystem::path> dirs = find_bundles(config.input);
    vector<string> problems;
    auto fail = [&](const filesystem::path &dir, const string &message) {
        problems.push_back(filesystem::relative(dir, config.input).generic_string() + ": " + message);
    };

    map<string, unique_ptr<GroundedTask>> grounded;
    set<filesystem::path> group_dirs;
    for (const filesystem::path &dir : dirs) {
        group_dirs.insert(dir.parent_path());
        GoalRecognitionTask t;
        try {
            t = read_task_bundle(dir);
        } catch (const InputError &err) {
            fail(dir, err.what());
            continue;
        }
        const string key = t.domain_text + '\0' + t.template_text;
        auto it = grounded.find(key);
        if (it == grounded.end()) {
            unique_ptr<GroundedTask> task;
            try {
                task = make_unique<GroundedTask>(ground_texts(t.domain_text, t.template_text));
            } catch (const InputError &err) {
                fail(dir, err.what());
            }
            it = grounded.emplace(key, move(task)).first;
        }
        if (!it->second)
            continue;
        const GroundedTask &task = *it->second;

        if (t.meta.group != group_id(t.problem, t.true_goal, t.meta.observability, t.meta.noise))
            fail(dir, "group id " + t.meta.group + " does not match the bundle");
        const size_t length = t.meta.source_plan_length;
        const size_t base = observation_count(t.meta.observability, length);
        const size_t noisy = noise_count(t.meta.noise, base);
        const size_t size = t.observations.size();
        if (length == 0)
            fail(dir, "source plan is empty");
        else if (t.observations.noise_count() != noisy || (size != base && size != base + noisy))
            fail(dir, "expected " + to_string(base) + " observations with " + to_string(noisy) +
                      " noisy, found " + to_string(size) + " with " +
                      to_string(t.observations.noise_count()));

        vector<ActionId> steps;
        bool known = true;
        for (const string &label : t.observations.steps) {
            optional<ActionId> a = task.find_action(label);
            if (!a) {
                fail(dir, "unknown action " + label);
                known = false;
            } else {
                steps.push_back(*a);
            }
        }
        if (known && t.meta.observability == 100 && t.meta.noise == 0) {
            vector<FactId> goal;
            for (const FactAtom &atom : t.true_hypothesis().atoms) {
                optional<FactId> f = task.find_fact(atom);
                if (!f) {
                    fail(dir, "true goal atom " + atom.text() + " is unreachable");
                    known = false;
                    break;
                }
                goal.push_back(*f);
            }
            if (known) {
                GroundedTask retargeted = task.with_goal(goal);
                PlanValidation v = validate_plan(retargeted, steps);
                if (!v.valid)
                    fail(dir, "observations are not a valid plan for the true goal (step " +
                              to_string(v.failing_step) + ")");
                else if (make_plan(retargeted, steps).cost != t.meta.source_plan_cost)
                    fail(dir, "plan cost differs from source_plan_cost");
            }
        }
    }
    for (const filesystem::path &dir : group_dirs) {
        try {
            VariantGroup group = deserialize_bundle(dir);
            group.check();
            set<int> sources;
            for (const GoalRecognitionTask &t : group.tasks)
                if (!sources.insert(t.meta.source_plan).second)
                    fail(dir, "variants share source plan " + to_string(t.meta.source_plan));
            if (static_cast<int>(group.tasks.size()) > group.tasks.front().meta.k)
                fail(dir, "more variants than k");
        } catch (const exception &err) {
            fail(dir, err.what());
        }
    }
    return problems;
}

namespace {
int report_error(ostream &err, const char *kind, const exception &e, int code) {
    err << "grforge: " << kind << ": " << e.what() << "\n";
    return code;
}

vector<Rational> parse_rationals(const vector<string> &texts) {
    vector<Rational> result;
    for (const string &t : texts)
        result.push_back(Rational::parse(t));
    return result;
}

void emit(const RunConfig &config, ostream &out, const string &text) {
    if (config.out.empty())
        out << text;
    else
        write_text(config.out, text);
}
}

int run_cli(int argc, const char *const *argv, ostream &out, ostream &err) {
    CLI::App app {"Goal recognition dataset generator and resilience evaluator", "grforge"};
    app.require_subcommand(1);

    RunConfig config;
    vector<string> problems, hyps, thresholds;
    string domain, theta = "0", noise_policy = "replace", solved_policy = "membership",
           agg_mode = "gate", heuristic = "goal-completion", input, output;
    uint64_t seed = 0;
    size_t max_expansions = config.limits.max_expansions;
    bool no_timing = false;

    auto add_planning = [&](CLI::App *sub) {
        sub->add_option("--domain", domain, "PDDL domain file")->required()->check(CLI::ExistingFile);
        sub->add_option("--problem", problems, "PDDL problem file (repeatable)")
            ->required()->check(CLI::ExistingFile);
        sub->add_option("--max-expansions", max_expansions, "search budget per planner call");
    };
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--jobs", config.jobs, "worker threads");
        sub->add_option("--out", output, "output path (stdout when omitted)");
    };

    CLI::App *generate = app.add_subcommand("generate", "build a goal recognition dataset");
    add_planning(generate);
    add_common(generate);
    generate->add_option("--hyps", hyps, "hypotheses file (repeatable, one per problem)")
        ->check(CLI::ExistingFile);
    generate->add_option("--synth-hyps", config.synth_hyps, "sample this many hypotheses instead");
    generate->add_option("--k", config.k, "plans (variants) per hypothesis");
    generate->add_option("--obs", config.observability, "observability percentages")->delimiter(',');
    generate->add_option("--noise", config.noise, "noise percentages")->delimiter(',');
    generate->add_option("--seed", seed, "master seed")->required();
    generate->add_option("--noise-policy", noise_policy, "replace or insert")
        ->check(CLI::IsMember({"replace", "insert"}));

    auto add_recognition = [&](CLI::App *sub) {
        sub->add_option("--theta", theta, "selection slack below the best score");
        sub->add_flag("--no-timing", no_timing, "write 0 for runtimes");
        sub->add_option("--heuristic", heuristic, "goal-completion or uniqueness")
            ->check(CLI::IsMember({"goal-completion", "uniqueness"}));
    };
    CLI::App *recognize = app.add_subcommand("recognize", "recognise every bundle of a dataset");
    recognize->add_option("dataset", input, "dataset directory")->required();
    add_common(recognize);
    add_recognition(recognize);

    CLI::App *evaluate = app.add_subcommand("evaluate", "aggregate resilience metrics");
    evaluate->add_option("input", input, "detail CSV or dataset directory")->required();
    add_common(evaluate);
    add_recognition(evaluate);
    evaluate->add_option("--thresholds", thresholds, "resilience thresholds")->delimiter(',');
    CLI::Option *noise_filter =
        evaluate->add_option("--noise", config.noise, "keep only these noise levels")->delimiter(',');
    evaluate->add_option("--solved-policy", solved_policy, "membership or strict")
        ->check(CLI::IsMember({"membership", "strict"}));
    evaluate->add_option("--agg-mode", agg_mode, "gate or filter")
        ->check(CLI::IsMember({"gate", "filter"}));

    CLI::App *validate = app.add_subcommand("validate", "check every bundle of a dataset");
    validate->add_option("dataset", input, "dataset directory")->required();

    CLI::App *topk = app.add_subcommand("topk", "enumerate the k cheapest plans of a problem");
    add_planning(topk);
    topk->add_option("--k", config.k, "number of plans");
    topk->add_option("--out", output, "directory for sas_plan.N files");

    CLI::App *landmarks = app.add_subcommand("landmarks", "print fact landmarks of a problem goal");
    add_planning(landmarks);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::input_error;
    }

    try {
        config.subcommand = app.get_subcommands().front()->get_name();
        config.domain = domain;
        for (const string &p : problems)
            config.problems.emplace_back(p);
        for (const string &h : hyps)
            config.hyps.emplace_back(h);
        if (generate->parsed())
            config.seed = seed;
        config.theta = Rational::parse(theta);
        if (!thresholds.empty())
            config.thresholds = parse_rationals(thresholds);
        config.heuristic = heuristic == "uniqueness" ? RecognitionHeuristic::Uniqueness
                                                     : RecognitionHeuristic::GoalCompletion;
        config.noise_policy = noise_policy == "insert" ? NoisePolicy::Insert : NoisePolicy::Replace;
        config.solved_policy = solved_policy == "strict" ? SolvedPolicy::Strict
                                                         : SolvedPolicy::Membership;
        config.agg_mode = agg_mode == "filter" ? AggregationMode::Filter : AggregationMode::Gate;
        config.filter_noise = noise_filter->count() > 0;
        config.input = input;
        config.out = output;
        config.timing = !no_timing;
        config.limits.max_expansions = max_expansions;
        config.check();

        if (generate->parsed()) {
            GenerateSummary summary = run_generate(config);
            for (const string &w : summary.warnings)
                err << "warning: " << w << "\n";
            out << "wrote " << summary.bundles << " bundles to " << config.out.string() << "\n";
            return summary.complete ? exit_code::ok : exit_code::resource_limit;
        }
        if (recognize->parsed()) {
            emit(config, out, emit_detail_csv(run_recognize(config)));
            return exit_code::ok;
        }
        if (evaluate->parsed()) {
            emit(config, out, emit_csv(run_evaluate(config)));
            return exit_code::ok;
        }
        if (validate->parsed()) {
            vector<string> problems_found = run_validate(config);
            for (const string &p : problems_found)
                err << p << "\n";
            if (!problems_found.empty())
                return exit_code::validation_failure;
            out << find_bundles(config.input).size() << " bundles valid\n";
            return exit_code::ok;
        }

        if (config.problems.size() != 1)
            throw InputError(config.subcommand + " takes exactly one --problem");
        GroundedTask task = ground_texts(read_text(config.domain), read_text(config.problems[0]));
        if (topk->parsed()) {
            PlanSet plans = top_k(task, config.k, TopKOptions {config.limits, nullopt});
            if (!config.out.empty())
                write_plan_set(config.out, task, plans);
            else
                for (const Plan &p : plans.plans)
                    out << format_plan(task, p) << "\n";
            if (static_cast<int>(plans.plans.size()) < config.k)
                err << "warning: only " << plans.plans.size() << " plans exist\n";
            return exit_code::ok;
        }
        out << format_landmarks(task, extract_landmarks(task, task.goal()));
        return exit_code::ok;
    } catch (const ValidationError &e) {
        return report_error(err, "validation failed", e, exit_code::validation_failure);
    } catch (const ResourceLimitError &e) {
        return report_error(err, "resource limit", e, exit_code::resource_limit);
    } catch (const InputError &e) {
        return report_error(err, "input error", e, exit_code::input_error);
    } catch (const invalid_argument &e) {
        return report_error(err, "input error", e, exit_code::input_error);
    } catch (const filesystem::filesystem_error &e) {
        return report_error(err, "input error", e, exit_code::input_error);
    } catch (const exception &e) {
        return report_error(err, "error", e, exit_code::internal_error);
    }
}

}

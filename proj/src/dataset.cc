#include "grforge/dataset.h"

#include "grforge/mutexes.h"
#include "grforge/random.h"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace std;
using json = nlohmann::json;

namespace grforge {

const Hypothesis &GoalRecognitionTask::true_hypothesis() const {
    for (const Hypothesis &h : hypotheses)
        if (h.id == true_goal)
            return h;
    throw ValidationError("true goal " + true_goal + " missing from hypotheses of " + problem);
}

void VariantGroup::check() const {
    if (tasks.empty())
        throw ValidationError("variant group " + id + " is empty");
    const GoalRecognitionTask &first = tasks.front();
    set<int> variants;
    for (const GoalRecognitionTask &t : tasks) {
        if (t.problem != first.problem || t.domain_text != first.domain_text ||
            t.template_text != first.template_text || t.hypotheses != first.hypotheses ||
            t.true_goal != first.true_goal || t.meta.observability != first.meta.observability ||
            t.meta.noise != first.meta.noise || t.meta.group != id)
            throw ValidationError("variant group " + id + " mixes different tasks");
        if (!variants.insert(t.meta.variant).second)
            throw ValidationError("variant group " + id + " repeats variant " +
                                  to_string(t.meta.variant));
        t.true_hypothesis();
    }
    if (static_cast<int>(tasks.size()) > first.meta.k)
        throw ValidationError("variant group " + id + " has more than k tasks");
}

string group_id(const string &problem, const string &goal_id, int observability, int noise) {
    return problem + "/" + goal_id + "/" + to_string(observability) + "/" + to_string(noise);
}

GroundedTask update_goal(const GroundedTask &task, const Hypothesis &goal) {
    vector<FactId> ids;
    for (const FactAtom &atom : goal.atoms) {
        optional<FactId> f = task.find_fact(atom);
        if (!f)
            throw InputError("goal atom " + atom.text() + " is not in the fact universe of " +
                             task.name());
        ids.push_back(*f);
    }
    return task.with_goal(move(ids));
}

vector<Hypothesis> load_hypotheses(string_view text) {
    vector<Hypothesis> result;
    istringstream in {string(text)};
    string line;
    size_t number = 0;
    while (getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == string::npos)
            continue;
        vector<FactAtom> atoms;
        try {
            atoms = parse_atom_list(line);
        } catch (const InputError &err) {
            throw InputError("hypotheses line " + to_string(number) + ": " + err.what());
        }
        result.push_back(make_hypothesis("h" + to_string(result.size()), move(atoms)));
    }
    return result;
}

vector<Hypothesis> with_true_goal(vector<Hypothesis> hypotheses, const Hypothesis &goal) {
    bool found = false;
    for (Hypothesis &h : hypotheses) {
        h.is_true_goal = same_goal(h, goal);
        found |= h.is_true_goal;
    }
    if (!found)
        hypotheses.push_back(make_hypothesis("", goal.atoms, true));
    for (size_t i = 0; i < hypotheses.size(); ++i)
        hypotheses[i].id = "h" + to_string(i);
    return hypotheses;
}

vector<Hypothesis> synthesize_hypotheses(const GroundedTask &task, const Hypothesis &goal,
                                         int count, uint64_t seed, const SynthesisOptions &options) {
    if (count < 1)
        throw invalid_argument("hypothesis count must be positive");
    const size_t arity = goal.atoms.size();
    if (arity == 0)
        throw InputError("cannot synthesize hypotheses for an empty goal");

    MutexTable mutexes(task);
    vector<FactId> candidates;
    for (FactId f = 0; f < task.num_facts(); ++f)
        if (mutexes.reachable(f))
            candidates.push_back(f);
    if (candidates.size() < arity)
        throw InputError("too few reachable facts to synthesize hypotheses");

    SeededRandom rng(seed);
    vector<Hypothesis> result;
    set<vector<FactId>> tried;
    for (int attempt = 0; attempt < options.max_attempts &&
         static_cast<int>(result.size()) < count; ++attempt) {
        vector<FactId> facts;
        for (size_t i : rng.sample(candidates.size(), arity))
            facts.push_back(candidates[i]);
        if (!tried.insert(facts).second)
            continue;
        bool consistent = true;
        for (size_t i = 0; i < facts.size() && consistent; ++i)
            for (size_t j = i + 1; j < facts.size() && consistent; ++j)
                consistent = !mutexes.mutex(facts[i], facts[j]);
        if (!consistent || task.init().contains_all(facts))
            continue;
        vector<FactAtom> atoms;
        for (FactId f : facts)
            atoms.push_back(task.fact(f));
        Hypothesis candidate = make_hypothesis("h" + to_string(result.size()), move(atoms));
        if (same_goal(candidate, goal))
            continue;
        try {
            if (!plan_optimal(task.with_goal(facts), options.limits))
                continue;
        } catch (const ResourceLimitError &) {
            continue;
        }
        result.push_back(move(candidate));
    }
    if (static_cast<int>(result.size()) < count)
        throw InputError("could only synthesize " + to_string(result.size()) + " of " +
                         to_string(count) + " solvable hypotheses for " + task.name());
    return result;
}

size_t observation_count(int observability, size_t length) {
    if (observability < 0 || observability > 100)
        throw invalid_argument("observability must be a percentage");
    size_t rounded = (static_cast<size_t>(observability) * length + 50) / 100;
    return max<size_t>(1, rounded);
}

size_t noise_count(int noise, size_t observations) {
    if (noise < 0 || noise > 100)
        throw invalid_argument("noise must be a percentage");
    return (static_cast<size_t>(noise) * observations + 50) / 100;
}

ObservationSequence select_observations(const GroundedTask &task, span<const ActionId> plan,
                                        int observability, int noise, uint64_t seed,
                                        NoisePolicy policy) {
    if (plan.empty())
        throw invalid_argument("cannot select observations from an empty plan");
    SeededRandom rng(seed);
    const size_t kept = observation_count(observability, plan.size());
    const size_t corrupted = noise_count(noise, kept);

    ObservationSequence result;
    vector<ActionId> chosen;
    for (size_t index : rng.sample(plan.size(), kept))
        chosen.push_back(plan[index]);
    for (ActionId a : chosen) {
        result.steps.push_back(task.action(a).label());
        result.noisy.push_back(false);
    }
    if (corrupted == 0)
        return result;

    const size_t num_actions = static_cast<size_t>(task.num_actions());
    if (policy == NoisePolicy::Replace) {
        if (num_actions < 2)
            throw InputError("noise needs at least two actions in " + task.name());
        for (size_t position : rng.sample(kept, corrupted)) {
            size_t original = static_cast<size_t>(chosen[position]);
            size_t replacement = rng.index(num_actions - 1);
            if (replacement >= original)
                ++replacement;
            result.steps[position] = task.action(static_cast<ActionId>(replacement)).label();
            result.noisy[position] = true;
        }
    } else {
        if (num_actions < 1)
            throw InputError("noise needs actions in " + task.name());
        for (size_t i = 0; i < corrupted; ++i) {
            size_t position = rng.index(result.steps.size() + 1);
            ActionId inserted = static_cast<ActionId>(rng.index(num_actions));
            result.steps.insert(result.steps.begin() + position, task.action(inserted).label());
            result.noisy.insert(result.noisy.begin() + position, true);
        }
    }
    return result;
}

GeneratedTasks task_generator(const GroundedTask &task, const Planner &planner,
                              const Hypothesis &goal, const HypothesisGenerator &hypotheses,
                              const GeneratorContext &context, const TaskGeneratorConfig &config) {
    if (config.k < 1)
        throw invalid_argument("k must be positive");
    GeneratedTasks result;
    GroundedTask retargeted = update_goal(task, goal);
    result.plans = planner(retargeted, config.k);
    vector<Hypothesis> candidates = with_true_goal(hypotheses(task), goal);
    auto true_it = find_if(candidates.begin(), candidates.end(),
                           [](const Hypothesis &h) {return h.is_true_goal;});
    const string goal_id = true_it->id;

    if (static_cast<int>(result.plans.plans.size()) < config.k)
        result.warnings.push_back(context.problem + " " + goal_id + ": only " +
                                  to_string(result.plans.plans.size()) + " of " +
                                  to_string(config.k) + " plans exist");

    auto make_task = [&](const Plan &plan, int variant, int noise) {
        GoalRecognitionTask t;
        t.problem = context.problem;
        t.domain_text = context.domain_text;
        t.template_text = context.template_text;
        t.hypotheses = candidates;
        t.true_goal = goal_id;
        t.meta.group = group_id(context.problem, goal_id, config.observability, noise);
        t.meta.observability = config.observability;
        t.meta.noise = noise;
        t.meta.variant = variant;
        t.meta.k = config.k;
        t.meta.seed = derive_seed(config.master_seed,
                                  {context.problem, goal_id, to_string(config.observability),
                                   to_string(noise), to_string(variant)});
        t.meta.source_plan = variant;
        t.meta.source_plan_length = plan.steps.size();
        t.meta.source_plan_cost = plan.cost;
        if (plan.steps.empty()) {
            result.warnings.push_back(context.problem + " " + goal_id +
                                      ": goal holds initially, no observations");
        } else {
            t.observations = select_observations(retargeted, plan.steps, config.observability,
                                                 noise, t.meta.seed, config.policy);
        }
        return t;
    };

    for (size_t i = 0; i < result.plans.plans.size(); ++i) {
        const Plan &plan = result.plans.plans[i];
        result.clean.push_back(make_task(plan, static_cast<int>(i), 0));
        result.noisy.push_back(make_task(plan, static_cast<int>(i), config.noise));
    }
    return result;
}

BundleError::BundleError(const filesystem::path &file, size_t line, const string &message)
    : InputError(file.string() + (line ? ":" + to_string(line) : string()) + ": " + message) {
}

namespace {
void write_file(const filesystem::path &path, const string &content) {
    ofstream out(path, ios::binary);
    out << content;
    if (!out)
        throw runtime_error("cannot write " + path.string());
}

string read_file(const filesystem::path &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw BundleError(path, 0, "missing file");
    ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

vector<string> lines_of(const string &text) {
    vector<string> lines;
    istringstream in(text);
    string line;
    while (getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool is_blank(const string &line) {
    return line.find_first_not_of(" \t") == string::npos;
}

json metadata_json(const GoalRecognitionTask &task) {
    json meta;
    meta["group"] = task.meta.group;
    meta["problem"] = task.problem;
    meta["observability"] = task.meta.observability;
    meta["noise"] = task.meta.noise;
    meta["variant"] = task.meta.variant;
    meta["k"] = task.meta.k;
    meta["seed"] = task.meta.seed;
    meta["source_plan"] = task.meta.source_plan;
    meta["source_plan_length"] = task.meta.source_plan_length;
    meta["source_plan_cost"] = task.meta.source_plan_cost.to_string();
    json noisy = json::array();
    for (size_t i = 0; i < task.observations.noisy.size(); ++i)
        if (task.observations.noisy[i])
            noisy.push_back(i);
    meta["noisy_steps"] = noisy;
    return meta;
}
}

void serialize_bundle(const VariantGroup &group, const filesystem::path &dir) {
    group.check();
    for (const GoalRecognitionTask &task : group.tasks) {
        filesystem::path variant_dir = dir / to_string(task.meta.variant);
        filesystem::create_directories(variant_dir);
        write_file(variant_dir / "domain.pddl", task.domain_text);
        write_file(variant_dir / "template.pddl", task.template_text);
        string hyps;
        for (const Hypothesis &h : task.hypotheses)
            hyps += h.line() + "\n";
        write_file(variant_dir / "hyps.dat", hyps);
        write_file(variant_dir / "real_hyp.dat", task.true_hypothesis().line() + "\n");
        string obs;
        for (const string &step : task.observations.steps)
            obs += step + "\n";
        write_file(variant_dir / "obs.dat", obs);
        write_file(variant_dir / "meta.json", metadata_json(task).dump(2) + "\n");
    }
}

GoalRecognitionTask read_task_bundle(const filesystem::path &variant_dir) {
    GoalRecognitionTask task;
    task.domain_text = read_file(variant_dir / "domain.pddl");
    task.template_text = read_file(variant_dir / "template.pddl");

    const filesystem::path hyps_path = variant_dir / "hyps.dat";
    vector<string> hyp_lines = lines_of(read_file(hyps_path));
    for (size_t i = 0; i < hyp_lines.size(); ++i) {
        if (is_blank(hyp_lines[i]))
            continue;
        try {
            task.hypotheses.push_back(make_hypothesis("h" + to_string(task.hypotheses.size()),
                                                      parse_atom_list(hyp_lines[i])));
        } catch (const InputError &err) {
            throw BundleError(hyps_path, i + 1, err.what());
        }
        if (task.hypotheses.back().atoms.empty())
            throw BundleError(hyps_path, i + 1, "empty hypothesis");
    }
    if (task.hypotheses.empty())
        throw BundleError(hyps_path, 0, "no hypotheses");

    const filesystem::path real_path = variant_dir / "real_hyp.dat";
    vector<string> real_lines = lines_of(read_file(real_path));
    vector<string> nonblank;
    for (const string &line : real_lines)
        if (!is_blank(line))
            nonblank.push_back(line);
    if (nonblank.size() != 1)
        throw BundleError(real_path, 0, "expected exactly one hypothesis line");
    Hypothesis real;
    try {
        real = make_hypothesis("", parse_atom_list(nonblank.front()));
    } catch (const InputError &err) {
        throw BundleError(real_path, 1, err.what());
    }
    for (Hypothesis &h : task.hypotheses)
        if (same_goal(h, real)) {
            h.is_true_goal = true;
            task.true_goal = h.id;
        }
    if (task.true_goal.empty())
        throw BundleError(real_path, 1, "true goal is not among the hypotheses in hyps.dat");

    const filesystem::path obs_path = variant_dir / "obs.dat";
    vector<string> obs_lines = lines_of(read_file(obs_path));
    for (size_t i = 0; i < obs_lines.size(); ++i) {
        if (is_blank(obs_lines[i]))
            continue;
        try {
            task.observations.steps.push_back(parse_atom(obs_lines[i]).text());
        } catch (const InputError &err) {
            throw BundleError(obs_path, i + 1, err.what());
        }
        task.observations.noisy.push_back(false);
    }

    const filesystem::path meta_path = variant_dir / "meta.json";
    string meta_text = read_file(meta_path);
    try {
        json meta = json::parse(meta_text);
        task.meta.group = meta.at("group").get<string>();
        task.problem = meta.at("problem").get<string>();
        task.meta.observability = meta.at("observability").get<int>();
        task.meta.noise = meta.at("noise").get<int>();
        task.meta.variant = meta.at("variant").get<int>();
        task.meta.k = meta.at("k").get<int>();
        task.meta.seed = meta.at("seed").get<uint64_t>();
        task.meta.source_plan = meta.at("source_plan").get<int>();
        task.meta.source_plan_length = meta.at("source_plan_length").get<size_t>();
        task.meta.source_plan_cost = Rational::parse(meta.at("source_plan_cost").get<string>());
        for (size_t index : meta.at("noisy_steps").get<vector<size_t>>()) {
            if (index >= task.observations.noisy.size())
                throw BundleError(meta_path, 0, "noisy step " + to_string(index) +
                                  " beyond the observation sequence");
            task.observations.noisy[index] = true;
        }
    } catch (const json::exception &err) {
        throw BundleError(meta_path, 0, err.what());
    } catch (const invalid_argument &err) {
        throw BundleError(meta_path, 0, err.what());
    }
    return task;
}

VariantGroup deserialize_bundle(const filesystem::path &dir) {
    if (!filesystem::is_directory(dir))
        throw BundleError(dir, 0, "not a bundle directory");
    vector<pair<int, filesystem::path>> variants;
    for (const auto &entry : filesystem::directory_iterator(dir)) {
        string name = entry.path().filename().string();
        if (entry.is_directory() && !name.empty() &&
            name.find_first_not_of("0123456789") == string::npos)
            variants.emplace_back(stoi(name), entry.path());
    }
    sort(variants.begin(), variants.end());
    if (variants.empty())
        throw BundleError(dir, 0, "bundle has no variant directories");

    VariantGroup group;
    for (const auto &[index, path] : variants) {
        group.tasks.push_back(read_task_bundle(path));
        if (group.tasks.back().meta.variant != index)
            throw BundleError(path / "meta.json", 0, "variant does not match directory name");
    }
    group.id = group.tasks.front().meta.group;
    try {
        group.check();
    } catch (const ValidationError &err) {
        throw BundleError(dir, 0, err.what());
    }
    return group;
}

}

#include "grforge/topk.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

using namespace std;

namespace grforge {
namespace {
struct Trie {
    vector<map<ActionId, int>> children {{}};
    vector<char> is_end {0};

    void insert(const vector<ActionId> &steps) {
        int node = 0;
        for (ActionId a : steps) {
            auto it = children[node].find(a);
            if (it == children[node].end()) {
                int fresh = static_cast<int>(children.size());
                children.emplace_back();
                is_end.push_back(0);
                children[node].emplace(a, fresh);
                node = fresh;
            } else {
                node = it->second;
            }
        }
        is_end[node] = 1;
    }

    int size() const {return static_cast<int>(children.size());}
};

string fresh_prefix(const GroundedTask &task) {
    for (int level = 1;; ++level) {
        string prefix = "forbid" + to_string(level) + "-";
        bool used = any_of(task.facts().begin(), task.facts().end(), [&](const FactAtom &f) {
            return f.predicate.compare(0, prefix.size(), prefix) == 0;
        });
        if (!used)
            return prefix;
    }
}

string combine_tag(const string &old_tag, const string &tag) {
    return old_tag.empty() ? tag : old_tag + "/" + tag;
}
}

Plan ForbidReformulation::project(const GroundedTask &source, const Plan &plan) const {
    vector<ActionId> steps;
    steps.reserve(plan.steps.size());
    for (ActionId a : plan.steps)
        steps.push_back(origin.at(a));
    return make_plan(source, move(steps));
}

ForbidReformulation forbid_plan(const GroundedTask &task, const Plan &plan) {
    return forbid_plans(task, span<const Plan>(&plan, 1));
}

ForbidReformulation forbid_plans(const GroundedTask &task, span<const Plan> plans) {
    Trie trie;
    for (const Plan &plan : plans) {
        PlanValidation check = validate_plan(task, plan);
        if (!check.valid)
            throw invalid_argument("cannot forbid an invalid plan (fails at step " +
                                   to_string(check.failing_step) + ")");
        trie.insert(plan.steps);
    }

    set<ActionId> labels;
    for (const auto &edges : trie.children)
        for (const auto &[a, child] : edges)
            labels.insert(a);

    const string prefix = fresh_prefix(task);
    vector<FactAtom> facts = task.facts();
    auto add_fact = [&](string predicate, vector<string> args) {
        facts.push_back(FactAtom {prefix + predicate, move(args)});
        return static_cast<FactId>(facts.size() - 1);
    };
    const FactId following = add_fact("following", {});
    const FactId diverged = add_fact("diverged", {});
    const FactId unfinished = add_fact("unfinished", {});
    vector<FactId> at(trie.size());
    for (int v = 0; v < trie.size(); ++v)
        at[v] = add_fact("at", {"n" + to_string(v)});
    map<ActionId, FactId> open;
    for (ActionId a : labels)
        open[a] = add_fact("open", {"a" + to_string(a)});

    vector<GroundAction> actions;
    vector<ActionId> origin;
    for (ActionId a = 0; a < task.num_actions(); ++a) {
        const GroundAction &source = task.action(a);

        GroundAction free_copy = source;
        free_copy.tag = combine_tag(source.tag, prefix + "free");
        free_copy.precondition.push_back(diverged);
        actions.push_back(move(free_copy));
        origin.push_back(a);

        GroundAction leave = source;
        leave.tag = combine_tag(source.tag, prefix + "leave");
        leave.precondition.push_back(following);
        if (auto it = open.find(a); it != open.end())
            leave.precondition.push_back(it->second);
        leave.delete_effects.push_back(following);
        leave.add_effects.push_back(diverged);
        leave.add_effects.push_back(unfinished);
        actions.push_back(move(leave));
        origin.push_back(a);
    }

    auto labels_of = [&](int node) {
        set<ActionId> result;
        for (const auto &[a, child] : trie.children[node])
            result.insert(a);
        return result;
    };
    for (int v = 0; v < trie.size(); ++v) {
        set<ActionId> from_labels = labels_of(v);
        for (const auto &[a, w] : trie.children[v]) {
            set<ActionId> to_labels = labels_of(w);
            GroundAction step = task.action(a);
            step.tag = combine_tag(step.tag, prefix + "e" + to_string(w));
            step.precondition.push_back(following);
            step.precondition.push_back(at[v]);
            step.delete_effects.push_back(at[v]);
            step.add_effects.push_back(at[w]);
            if (trie.is_end[w])
                step.delete_effects.push_back(unfinished);
            else
                step.add_effects.push_back(unfinished);
            for (ActionId b : from_labels)
                if (!to_labels.count(b))
                    step.add_effects.push_back(open[b]);
            for (ActionId b : to_labels)
                if (!from_labels.count(b))
                    step.delete_effects.push_back(open[b]);
            actions.push_back(move(step));
            origin.push_back(a);
        }
    }

    vector<FactId> init = task.init().facts();
    init.push_back(following);
    init.push_back(at[0]);
    set<ActionId> root_labels = labels_of(0);
    for (const auto &[a, fact] : open)
        if (!root_labels.count(a))
            init.push_back(fact);
    if (!trie.is_end[0])
        init.push_back(unfinished);

    vector<FactId> goal = task.goal();
    goal.push_back(unfinished);

    return ForbidReformulation {
        GroundedTask(task.name(), move(facts), move(actions), move(init), move(goal)),
        move(origin)};
}

PlanSet top_k(const GroundedTask &task, int k, const TopKOptions &options) {
    if (k < 1)
        throw invalid_argument("top_k requires k >= 1");
    PlanSet result;
    result.source_task = task.name();
    while (static_cast<int>(result.plans.size()) < k) {
        optional<Plan> plan;
        try {
            if (result.plans.empty()) {
                plan = plan_optimal(task, options.limits);
            } else {
                ForbidReformulation reformulated = forbid_plans(task, result.plans);
                optional<Plan> found = plan_optimal(reformulated.task, options.limits);
                if (found)
                    plan = reformulated.project(task, *found);
            }
        } catch (const ResourceLimitError &err) {
            result.truncated = true;
            throw TopKResourceLimit(err.what(), result);
        }
        if (!plan)
            break;
        if (options.quality_bound && !result.plans.empty() &&
            plan->cost > *options.quality_bound * result.plans.front().cost)
            break;
        result.plans.push_back(move(*plan));
    }
    return result;
}

void write_plan_set(const filesystem::path &dir, const GroundedTask &task, const PlanSet &plans) {
    filesystem::create_directories(dir);
    for (size_t i = 0; i < plans.plans.size(); ++i) {
        ofstream out(dir / ("sas_plan." + to_string(i + 1)), ios::binary);
        out << format_plan(task, plans.plans[i]);
        if (!out)
            throw runtime_error("cannot write plan file in " + dir.string());
    }
}

}

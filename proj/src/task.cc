#include "grforge/task.h"

#include <algorithm>
#include <bit>

using namespace std;

namespace grforge {

string GroundAction::label() const {
    string result = "(" + name;
    for (const string &arg : args)
        result += " " + arg;
    return result + ")";
}

string GroundAction::text() const {
    return tag.empty() ? label() : label() + "@" + tag;
}

State::State(int num_facts, span<const FactId> facts) : State(num_facts) {
    for (FactId f : facts)
        insert(f);
}

vector<FactId> State::facts() const {
    vector<FactId> result;
    for (size_t w = 0; w < words_.size(); ++w) {
        uint64_t bits = words_[w];
        while (bits) {
            int bit = countr_zero(bits);
            result.push_back(static_cast<FactId>(w * 64 + bit));
            bits &= bits - 1;
        }
    }
    return result;
}

bool State::contains_all(span<const FactId> facts) const {
    for (FactId f : facts)
        if (!contains(f))
            return false;
    return true;
}

size_t State::hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h ^ (h >> 33));
}

namespace {
void sort_unique(vector<FactId> &ids) {
    sort(ids.begin(), ids.end());
    ids.erase(unique(ids.begin(), ids.end()), ids.end());
}
}

GroundedTask::GroundedTask(string name, vector<FactAtom> facts, vector<GroundAction> actions,
                           vector<FactId> init, vector<FactId> goal)
    : name_(move(name)), facts_(move(facts)), actions_(move(actions)), goal_(move(goal)) {
    const int n = num_facts();
    auto check = [n](FactId f, const string &where) {
        if (f < 0 || f >= n)
            throw invalid_argument("fact id " + to_string(f) + " outside universe in " + where);
    };

    fact_texts_.reserve(facts_.size());
    for (FactId f = 0; f < n; ++f) {
        fact_texts_.push_back(facts_[f].text());
        if (!fact_index_.emplace(fact_texts_.back(), f).second)
            throw invalid_argument("duplicate fact " + fact_texts_.back());
    }

    achievers_.resize(n);
    consumers_.resize(n);
    for (ActionId a = 0; a < num_actions(); ++a) {
        GroundAction &action = actions_[a];
        sort_unique(action.precondition);
        sort_unique(action.add_effects);
        sort_unique(action.delete_effects);
        vector<FactId> deletes;
        set_difference(action.delete_effects.begin(), action.delete_effects.end(),
                       action.add_effects.begin(), action.add_effects.end(),
                       back_inserter(deletes));
        action.delete_effects = move(deletes);
        if (action.cost < Rational(0))
            throw invalid_argument("negative cost for action " + action.text());
        string text = action.text();
        for (const auto *facts : {&action.precondition, &action.add_effects, &action.delete_effects})
            for (FactId f : *facts)
                check(f, text);
        if (!action_index_.emplace(text, a).second)
            throw invalid_argument("duplicate action " + text);
        for (FactId f : action.precondition)
            consumers_[f].push_back(a);
        for (FactId f : action.add_effects)
            achievers_[f].push_back(a);
    }

    sort_unique(init);
    for (FactId f : init)
        check(f, "initial state");
    init_ = State(n, init);
    sort_unique(goal_);
    for (FactId f : goal_)
        check(f, "goal");
}

optional<FactId> GroundedTask::find_fact(const FactAtom &atom) const {
    return find_fact(atom.text());
}

optional<FactId> GroundedTask::find_fact(string_view text) const {
    auto it = fact_index_.find(string(text));
    if (it == fact_index_.end())
        return nullopt;
    return it->second;
}

optional<ActionId> GroundedTask::find_action(string_view text) const {
    auto it = action_index_.find(string(text));
    if (it == action_index_.end())
        return nullopt;
    return it->second;
}

GroundedTask GroundedTask::with_goal(vector<FactId> goal) const {
    GroundedTask copy = *this;
    sort_unique(goal);
    for (FactId f : goal)
        if (f < 0 || f >= num_facts())
            throw invalid_argument("goal fact id outside universe");
    copy.goal_ = move(goal);
    return copy;
}

bool is_applicable(const GroundAction &action, const State &state) {
    return state.contains_all(action.precondition);
}

State apply(const GroundedTask &task, const State &state, ActionId id) {
    const GroundAction &action = task.action(id);
    for (FactId f : action.precondition)
        if (!state.contains(f))
            throw InapplicableAction(action.text() + " is not applicable: missing " +
                                     task.fact_text(f));
    State next = state;
    for (FactId f : action.delete_effects)
        next.erase(f);
    for (FactId f : action.add_effects)
        next.insert(f);
    return next;
}

Plan make_plan(const GroundedTask &task, vector<ActionId> steps) {
    Plan plan;
    for (ActionId a : steps)
        plan.cost += task.action(a).cost;
    plan.steps = move(steps);
    return plan;
}

PlanValidation validate_plan(const GroundedTask &task, span<const ActionId> steps) {
    PlanValidation result;
    State state = task.init();
    for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i] < 0 || steps[i] >= task.num_actions()) {
            result.failing_step = i;
            return result;
        }
        const GroundAction &action = task.action(steps[i]);
        if (!is_applicable(action, state)) {
            result.failing_step = i;
            for (FactId f : action.precondition)
                if (!state.contains(f))
                    result.missing_facts.push_back(f);
            return result;
        }
        state = apply(task, state, steps[i]);
    }
    result.failing_step = steps.size();
    for (FactId f : task.goal())
        if (!state.contains(f))
            result.missing_facts.push_back(f);
    result.valid = result.missing_facts.empty();
    return result;
}

PlanValidation validate_plan(const GroundedTask &task, const Plan &plan) {
    return validate_plan(task, span<const ActionId>(plan.steps));
}

string format_plan(const GroundedTask &task, const Plan &plan) {
    string out;
    for (ActionId a : plan.steps)
        out += task.action(a).label() + "\n";
    out += "; cost = " + plan.cost.to_string() + "\n";
    return out;
}

string serialize_task(const GroundedTask &task) {
    auto fact_lines = [&](const vector<FactId> &ids) {
        vector<string> texts;
        for (FactId f : ids)
            texts.push_back(task.fact_text(f));
        sort(texts.begin(), texts.end());
        string out;
        for (const string &t : texts)
            out += " " + t;
        return out;
    };

    vector<string> facts(task.facts().size());
    for (FactId f = 0; f < task.num_facts(); ++f)
        facts[f] = task.fact_text(f);
    sort(facts.begin(), facts.end());

    vector<string> actions;
    for (const GroundAction &a : task.actions())
        actions.push_back(a.text() + " cost " + a.cost.to_string() + "\n  pre:" +
                          fact_lines(a.precondition) + "\n  add:" + fact_lines(a.add_effects) +
                          "\n  del:" + fact_lines(a.delete_effects) + "\n");
    sort(actions.begin(), actions.end());

    string out = "facts:\n";
    for (const string &f : facts)
        out += f + "\n";
    out += "init:" + fact_lines(task.init().facts()) + "\n";
    out += "goal:" + fact_lines(task.goal()) + "\n";
    out += "actions:\n";
    for (const string &a : actions)
        out += a;
    return out;
}

}

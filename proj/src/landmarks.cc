#include "grforge/landmarks.h"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

using namespace std;

namespace grforge {
namespace {
// Relaxed reachability from the initial state, skipping achievers of `excluded`.
vector<char> reachable_without(const GroundedTask &task, FactId excluded) {
    vector<char> reached(task.num_facts(), 0);
    vector<int> unsatisfied(task.num_actions());
    deque<FactId> queue;
    auto blocked = [&](ActionId a) {
        const auto &adds = task.action(a).add_effects;
        return binary_search(adds.begin(), adds.end(), excluded);
    };
    auto fire = [&](ActionId a) {
        for (FactId f : task.action(a).add_effects)
            if (!reached[f]) {
                reached[f] = 1;
                queue.push_back(f);
            }
    };
    for (FactId f : task.init().facts()) {
        reached[f] = 1;
        queue.push_back(f);
    }
    for (ActionId a = 0; a < task.num_actions(); ++a) {
        unsatisfied[a] = static_cast<int>(task.action(a).precondition.size());
        if (unsatisfied[a] == 0 && !blocked(a))
            fire(a);
    }
    while (!queue.empty()) {
        FactId f = queue.front();
        queue.pop_front();
        for (ActionId a : task.consumers(f))
            if (--unsatisfied[a] == 0 && !blocked(a))
                fire(a);
    }
    return reached;
}
}

bool LandmarkSet::all_reachable() const {
    return all_of(per_goal.begin(), per_goal.end(), [](const GoalLandmarks &g) {return g.reachable;});
}

const GoalLandmarks *LandmarkSet::find(FactId goal) const {
    for (const GoalLandmarks &g : per_goal)
        if (g.goal == goal)
            return &g;
    return nullptr;
}

LandmarkSet extract_landmarks(const GroundedTask &task, span<const FactId> goal) {
    // Shared preconditions of the possible first achievers, memoized per fact;
    // nullopt when the fact has no possible first achiever.
    map<FactId, optional<vector<FactId>>> shared;
    auto shared_preconditions = [&](FactId f) -> const optional<vector<FactId>> & {
        auto it = shared.find(f);
        if (it != shared.end())
            return it->second;
        vector<char> reached = reachable_without(task, f);
        optional<vector<FactId>> common;
        for (ActionId a : task.achievers(f)) {
            const auto &pre = task.action(a).precondition;
            if (!all_of(pre.begin(), pre.end(), [&](FactId p) {return reached[p];}))
                continue;
            if (!common) {
                common = pre;
            } else {
                vector<FactId> next;
                set_intersection(common->begin(), common->end(), pre.begin(), pre.end(),
                                 back_inserter(next));
                *common = move(next);
            }
        }
        return shared.emplace(f, move(common)).first->second;
    };

    vector<FactId> goals(goal.begin(), goal.end());
    sort(goals.begin(), goals.end());
    goals.erase(unique(goals.begin(), goals.end()), goals.end());

    LandmarkSet result;
    for (FactId g : goals) {
        GoalLandmarks entry;
        entry.goal = g;
        vector<char> member(task.num_facts(), 0);
        deque<FactId> queue {g};
        member[g] = 1;
        while (!queue.empty()) {
            FactId f = queue.front();
            queue.pop_front();
            if (task.init().contains(f))
                continue;
            const auto &common = shared_preconditions(f);
            if (!common) {
                entry.reachable = false;
                break;
            }
            for (FactId p : *common)
                if (!member[p]) {
                    member[p] = 1;
                    queue.push_back(p);
                }
        }
        if (entry.reachable) {
            for (FactId f = 0; f < task.num_facts(); ++f)
                if (member[f]) {
                    entry.landmarks.push_back(f);
                    if (task.init().contains(f))
                        entry.trivially_achieved.push_back(f);
                }
        }
        result.per_goal.push_back(move(entry));
    }
    return result;
}

bool landmark_oracle(const GroundedTask &task, span<const FactId> goal, FactId fact,
                     size_t max_states) {
    if (task.init().contains(fact))
        throw invalid_argument("landmark oracle needs a fact outside the initial state: " +
                               task.fact_text(fact));
    unordered_set<State, StateHash> seen {task.init()};
    deque<State> queue {task.init()};
    while (!queue.empty()) {
        State state = move(queue.front());
        queue.pop_front();
        if (state.contains_all(goal))
            return false;
        for (ActionId a = 0; a < task.num_actions(); ++a) {
            const GroundAction &action = task.action(a);
            if (!is_applicable(action, state) ||
                binary_search(action.add_effects.begin(), action.add_effects.end(), fact))
                continue;
            State next = apply(task, state, a);
            if (seen.insert(next).second) {
                if (seen.size() > max_states)
                    throw ResourceLimitError("landmark oracle exceeded state budget");
                queue.push_back(move(next));
            }
        }
    }
    return true;
}

string format_landmarks(const GroundedTask &task, const LandmarkSet &landmarks) {
    string out;
    for (const GoalLandmarks &entry : landmarks.per_goal) {
        out += task.fact_text(entry.goal) + " :";
        if (!entry.reachable) {
            out += " unreachable\n";
            continue;
        }
        vector<string> texts;
        for (FactId f : entry.landmarks)
            texts.push_back(task.fact_text(f));
        sort(texts.begin(), texts.end());
        for (size_t i = 0; i < texts.size(); ++i)
            out += (i ? ", " : " ") + texts[i];
        out += "\n";
    }
    return out;
}

}

#include "grforge/search.h"

#include <algorithm>
#include <queue>
#include <unordered_map>

using namespace std;

namespace grforge {

HMaxHeuristic::HMaxHeuristic(const GroundedTask &task) : task_(task) {
    for (ActionId a = 0; a < task.num_actions(); ++a)
        if (task.action(a).precondition.empty())
            precondition_free_.push_back(a);
}

Estimate HMaxHeuristic::evaluate(const State &state) const {
    return evaluate(state, task_.goal());
}

Estimate HMaxHeuristic::evaluate(const State &state, span<const FactId> goal) const {
    if (state.contains_all(goal))
        return Rational(0);

    const int num_facts = task_.num_facts();
    vector<optional<Rational>> cost(num_facts);
    vector<int> unsatisfied(task_.num_actions());
    for (ActionId a = 0; a < task_.num_actions(); ++a)
        unsatisfied[a] = static_cast<int>(task_.action(a).precondition.size());

    using Entry = pair<Rational, FactId>;
    priority_queue<Entry, vector<Entry>, greater<>> queue;
    auto relax = [&](FactId f, const Rational &value) {
        if (!cost[f] || value < *cost[f]) {
            cost[f] = value;
            queue.emplace(value, f);
        }
    };
    for (FactId f : state.facts())
        relax(f, Rational(0));
    for (ActionId a : precondition_free_)
        for (FactId f : task_.action(a).add_effects)
            relax(f, task_.action(a).cost);

    vector<char> done(num_facts, 0);
    size_t goals_left = goal.size();
    vector<char> is_goal(num_facts, 0);
    for (FactId g : goal)
        is_goal[g] = 1;
    Rational result(0);

    while (!queue.empty() && goals_left > 0) {
        auto [value, f] = queue.top();
        queue.pop();
        if (done[f] || value != *cost[f])
            continue;
        done[f] = 1;
        if (is_goal[f]) {
            --goals_left;
            result = max(result, value);
        }
        // Facts leave the queue in nondecreasing order, so the last
        // precondition to arrive carries the maximum.
        for (ActionId a : task_.consumers(f)) {
            if (--unsatisfied[a] == 0) {
                const GroundAction &action = task_.action(a);
                Rational reached = value + action.cost;
                for (FactId q : action.add_effects)
                    relax(q, reached);
            }
        }
    }
    if (goals_left > 0)
        return nullopt;
    return result;
}

Estimate h_max(const GroundedTask &task, const State &state, span<const FactId> goal) {
    return HMaxHeuristic(task).evaluate(state, goal);
}

namespace {
struct Node {
    State state;
    Rational g;
    Rational h;
    int parent = -1;
    ActionId action = -1;
    bool closed = false;
    bool dead_end = false;
};

struct OpenEntry {
    Rational f;
    Rational h;
    uint64_t order;
    int node;
    Rational g;
};

struct OpenOrder {
    bool operator()(const OpenEntry &a, const OpenEntry &b) const {
        if (a.f != b.f)
            return a.f > b.f;
        if (a.h != b.h)
            return a.h > b.h;
        return a.order > b.order;
    }
};
}

optional<Plan> plan_optimal(const GroundedTask &task, const SearchLimits &limits,
                            SearchStatistics *statistics) {
    SearchStatistics local_stats;
    SearchStatistics &stats = statistics ? *statistics : local_stats;
    const auto start = chrono::steady_clock::now();
    HMaxHeuristic heuristic(task);

    vector<Node> nodes;
    unordered_map<State, int, StateHash> index;
    priority_queue<OpenEntry, vector<OpenEntry>, OpenOrder> open;
    uint64_t counter = 0;

    Estimate h0 = heuristic.evaluate(task.init());
    if (!h0)
        return nullopt;
    nodes.push_back(Node {task.init(), Rational(0), *h0});
    index.emplace(task.init(), 0);
    open.push({*h0, *h0, counter++, 0, Rational(0)});
    stats.generated = 1;

    while (!open.empty()) {
        OpenEntry entry = open.top();
        open.pop();
        Node &node = nodes[entry.node];
        if (node.closed || entry.g != node.g)
            continue;
        if (task.is_goal(node.state)) {
            vector<ActionId> steps;
            for (int n = entry.node; nodes[n].parent >= 0; n = nodes[n].parent)
                steps.push_back(nodes[n].action);
            reverse(steps.begin(), steps.end());
            return make_plan(task, move(steps));
        }
        node.closed = true;
        if (++stats.expanded > limits.max_expansions)
            throw ResourceLimitError("search exceeded " + to_string(limits.max_expansions) +
                                     " expansions on task " + task.name());
        if (limits.max_time && (stats.expanded & 255) == 0 &&
            chrono::steady_clock::now() - start > *limits.max_time)
            throw ResourceLimitError("search exceeded time limit on task " + task.name());

        const State state = node.state;
        const Rational g = node.g;
        for (ActionId a = 0; a < task.num_actions(); ++a) {
            const GroundAction &action = task.action(a);
            if (!is_applicable(action, state))
                continue;
            State succ = state;
            for (FactId f : action.delete_effects)
                succ.erase(f);
            for (FactId f : action.add_effects)
                succ.insert(f);
            Rational succ_g = g + action.cost;
            ++stats.generated;

            auto it = index.find(succ);
            if (it == index.end()) {
                Estimate h = heuristic.evaluate(succ);
                int id = static_cast<int>(nodes.size());
                index.emplace(succ, id);
                if (!h) {
                    ++stats.dead_ends;
                    nodes.push_back(Node {move(succ), succ_g, Rational(0), entry.node, a, true, true});
                    continue;
                }
                nodes.push_back(Node {move(succ), succ_g, *h, entry.node, a, false});
                open.push({succ_g + *h, *h, counter++, id, succ_g});
            } else {
                Node &existing = nodes[it->second];
                if (existing.dead_end || succ_g >= existing.g)
                    continue;
                if (existing.closed)
                    ++stats.reopened;
                existing.g = succ_g;
                existing.parent = entry.node;
                existing.action = a;
                existing.closed = false;
                open.push({succ_g + existing.h, existing.h, counter++, it->second, succ_g});
            }
        }
    }
    return nullopt;
}

}

#ifndef GRFORGE_TASK_H
#define GRFORGE_TASK_H

#include "atom.h"
#include "errors.h"
#include "rational.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace grforge {

using FactId = int;
using ActionId = int;

/*
  A ground STRIPS operator. Effects follow delete-then-add semantics: a fact
  that is both added and deleted ends up true, so after normalization
  add_effects and delete_effects are disjoint.
*/
struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    // Distinguishes compiled copies of one operator (e.g. in plan-forbidding
    // reformulations). Empty for actions produced by grounding.
    std::string tag;
    std::vector<FactId> precondition;
    std::vector<FactId> add_effects;
    std::vector<FactId> delete_effects;
    Rational cost {1};

    // "(name arg1 arg2)", the form written to plan and observation files.
    std::string label() const;
    // label() plus "@tag" for compiled copies; unique within a task.
    std::string text() const;
};

class State {
    std::vector<std::uint64_t> words_;
    int num_facts_ = 0;

public:
    State() = default;
    explicit State(int num_facts) : words_((num_facts + 63) / 64, 0), num_facts_(num_facts) {}
    State(int num_facts, std::span<const FactId> facts);

    bool contains(FactId fact) const {
        return (words_[fact >> 6] >> (fact & 63)) & 1u;
    }
    void insert(FactId fact) {words_[fact >> 6] |= std::uint64_t(1) << (fact & 63);}
    void erase(FactId fact) {words_[fact >> 6] &= ~(std::uint64_t(1) << (fact & 63));}

    int universe_size() const {return num_facts_;}
    std::vector<FactId> facts() const;
    bool contains_all(std::span<const FactId> facts) const;

    std::size_t hash() const;
    friend bool operator==(const State &, const State &) = default;
};

struct StateHash {
    std::size_t operator()(const State &state) const {return state.hash();}
};

/*
  Propositional planning task: an indexed fact universe, ground actions,
  initial state and goal conjunction. Immutable once constructed; the
  constructor checks that every referenced fact is in the universe and that
  action texts are unique.
*/
class GroundedTask {
public:
    GroundedTask(std::string name, std::vector<FactAtom> facts, std::vector<GroundAction> actions,
                 std::vector<FactId> init, std::vector<FactId> goal);

    const std::string &name() const {return name_;}

    int num_facts() const {return static_cast<int>(facts_.size());}
    int num_actions() const {return static_cast<int>(actions_.size());}
    const std::vector<FactAtom> &facts() const {return facts_;}
    const FactAtom &fact(FactId id) const {return facts_[id];}
    const std::string &fact_text(FactId id) const {return fact_texts_[id];}
    const std::vector<GroundAction> &actions() const {return actions_;}
    const GroundAction &action(ActionId id) const {return actions_[id];}

    const State &init() const {return init_;}
    const std::vector<FactId> &goal() const {return goal_;}

    std::optional<FactId> find_fact(const FactAtom &atom) const;
    std::optional<FactId> find_fact(std::string_view text) const;
    // Looks up by text(); for tasks without tags this equals the label.
    std::optional<ActionId> find_action(std::string_view text) const;

    // Actions adding / requiring the fact.
    const std::vector<ActionId> &achievers(FactId fact) const {return achievers_[fact];}
    const std::vector<ActionId> &consumers(FactId fact) const {return consumers_[fact];}

    bool is_goal(const State &state) const {return state.contains_all(goal_);}

    GroundedTask with_goal(std::vector<FactId> goal) const;

private:
    std::string name_;
    std::vector<FactAtom> facts_;
    std::vector<std::string> fact_texts_;
    std::vector<GroundAction> actions_;
    State init_;
    std::vector<FactId> goal_;
    std::unordered_map<std::string, FactId> fact_index_;
    std::unordered_map<std::string, ActionId> action_index_;
    std::vector<std::vector<ActionId>> achievers_;
    std::vector<std::vector<ActionId>> consumers_;
};

class InapplicableAction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_applicable(const GroundAction &action, const State &state);

// (state \ delete-effects) ∪ add-effects. Throws InapplicableAction.
State apply(const GroundedTask &task, const State &state, ActionId action);

struct Plan {
    std::vector<ActionId> steps;
    Rational cost;

    friend bool operator==(const Plan &, const Plan &) = default;
};

Plan make_plan(const GroundedTask &task, std::vector<ActionId> steps);

struct PlanValidation {
    bool valid = false;
    // Index of the inapplicable step; equals the plan length when the goal
    // test failed at the end.
    std::size_t failing_step = 0;
    std::vector<FactId> missing_facts;
};

PlanValidation validate_plan(const GroundedTask &task, const Plan &plan);
PlanValidation validate_plan(const GroundedTask &task, std::span<const ActionId> steps);

// One action label per line followed by "; cost = <c>".
std::string format_plan(const GroundedTask &task, const Plan &plan);

// Sorted, line-oriented dump of the whole task; byte-equal for equal tasks.
std::string serialize_task(const GroundedTask &task);

}

#endif

#include "grforge/grounding.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

using namespace std;

namespace grforge {
namespace {
using pddl::ParseError;
using Kind = ParseError::Kind;

struct ObjectTable {
    vector<pddl::TypedName> objects;
    unordered_map<string, string> type_of;
};

ObjectTable collect_objects(const pddl::Domain &domain, const pddl::Problem &problem) {
    ObjectTable table;
    auto add = [&](const pddl::TypedName &obj) {
        if (!domain.has_type(obj.type))
            throw ParseError(Kind::Undeclared,
                             "object '" + obj.name + "' has undeclared type '" + obj.type + "'");
        auto [it, inserted] = table.type_of.emplace(obj.name, obj.type);
        if (!inserted) {
            if (it->second != obj.type)
                throw ParseError(Kind::TypeMismatch, "object '" + obj.name + "' declared twice "
                                 "with different types");
            return;
        }
        table.objects.push_back(obj);
    };
    for (const auto &c : domain.constants)
        add(c);
    for (const auto &o : problem.objects)
        add(o);
    return table;
}

void check_ground_atom(const pddl::Domain &domain, const ObjectTable &objects,
                       const pddl::LocatedAtom &located, const string &context) {
    const FactAtom &atom = located.atom;
    const pddl::Predicate *pred = domain.find_predicate(atom.predicate);
    if (!pred)
        throw ParseError(Kind::Undeclared,
                         "undeclared predicate '" + atom.predicate + "' in " + context,
                         located.line, located.column);
    if (pred->parameters.size() != atom.args.size())
        throw ParseError(Kind::Arity, "predicate '" + atom.predicate + "' expects " +
                         to_string(pred->parameters.size()) + " arguments in " + context,
                         located.line, located.column);
    for (size_t i = 0; i < atom.args.size(); ++i) {
        auto it = objects.type_of.find(atom.args[i]);
        if (it == objects.type_of.end())
            throw ParseError(Kind::Undeclared,
                             "undeclared object '" + atom.args[i] + "' in " + context,
                             located.line, located.column);
        if (!domain.is_subtype(it->second, pred->parameters[i].type))
            throw ParseError(Kind::TypeMismatch,
                             "object '" + atom.args[i] + "' of type " + it->second +
                             " used as " + pred->parameters[i].type + " in " + atom.text(),
                             located.line, located.column);
    }
}

struct Candidate {
    const pddl::ActionSchema *schema;
    vector<string> args;
    vector<int> pre, add, del;
};

class Instantiator {
    const pddl::Domain &domain_;
    const ObjectTable &objects_;
    const unordered_set<string> &static_init_;
    const set<string> &static_predicates_;
    unordered_map<string, int> &atom_ids_;
    vector<FactAtom> &atoms_;

public:
    Instantiator(const pddl::Domain &domain, const ObjectTable &objects,
                 const unordered_set<string> &static_init, const set<string> &static_predicates,
                 unordered_map<string, int> &atom_ids, vector<FactAtom> &atoms)
        : domain_(domain), objects_(objects), static_init_(static_init),
          static_predicates_(static_predicates), atom_ids_(atom_ids), atoms_(atoms) {
    }

    int intern(FactAtom atom) {
        string text = atom.text();
        auto [it, inserted] = atom_ids_.emplace(move(text), static_cast<int>(atoms_.size()));
        if (inserted)
            atoms_.push_back(move(atom));
        return it->second;
    }

    FactAtom bind(const pddl::AtomSchema &schema, const pddl::ActionSchema &action,
                  const vector<string> &binding) const {
        FactAtom atom;
        atom.predicate = schema.predicate;
        for (const string &term : schema.terms) {
            if (!term.empty() && term.front() == '?') {
                size_t index = 0;
                while (action.parameters[index].name != term)
                    ++index;
                atom.args.push_back(binding[index]);
            } else {
                atom.args.push_back(term);
            }
        }
        return atom;
    }

    void instantiate(const pddl::ActionSchema &action, vector<Candidate> &out) {
        const size_t arity = action.parameters.size();
        // Static preconditions are checked as soon as their last variable is bound.
        vector<vector<const pddl::AtomSchema *>> static_checks(arity + 1);
        for (const auto &pre : action.precondition) {
            if (!static_predicates_.count(pre.predicate))
                continue;
            size_t depth = 0;
            for (const string &term : pre.terms) {
                if (term.empty() || term.front() != '?')
                    continue;
                for (size_t i = 0; i < arity; ++i)
                    if (action.parameters[i].name == term)
                        depth = max(depth, i + 1);
            }
            static_checks[depth].push_back(&pre);
        }

        vector<vector<const string *>> domains(arity);
        for (size_t i = 0; i < arity; ++i)
            for (const auto &obj : objects_.objects)
                if (domain_.is_subtype(obj.type, action.parameters[i].type))
                    domains[i].push_back(&obj.name);

        vector<string> binding(arity);
        auto statics_hold = [&](size_t depth) {
            for (const auto *pre : static_checks[depth])
                if (!static_init_.count(bind(*pre, action, binding).text()))
                    return false;
            return true;
        };
        if (!statics_hold(0))
            return;

        auto recurse = [&](auto &self, size_t depth) -> void {
            if (depth == arity) {
                Candidate c;
                c.schema = &action;
                c.args = binding;
                for (const auto &pre : action.precondition)
                    c.pre.push_back(intern(bind(pre, action, binding)));
                for (const auto &add : action.add_effects)
                    c.add.push_back(intern(bind(add, action, binding)));
                for (const auto &del : action.delete_effects)
                    c.del.push_back(intern(bind(del, action, binding)));
                sort(c.pre.begin(), c.pre.end());
                c.pre.erase(unique(c.pre.begin(), c.pre.end()), c.pre.end());
                out.push_back(move(c));
                return;
            }
            for (const string *obj : domains[depth]) {
                binding[depth] = *obj;
                if (statics_hold(depth + 1))
                    self(self, depth + 1);
            }
        };
        recurse(recurse, 0);
    }
};
}

GroundedTask ground(const pddl::Domain &domain, const pddl::Problem &problem) {
    if (!problem.domain_name.empty() && problem.domain_name != domain.name)
        throw ParseError(Kind::Undeclared, "problem " + problem.name + " refers to domain '" +
                         problem.domain_name + "', expected '" + domain.name + "'");
    ObjectTable objects = collect_objects(domain, problem);
    for (const auto &fact : problem.init)
        check_ground_atom(domain, objects, fact, "initial state");
    for (const auto &fact : problem.goal)
        check_ground_atom(domain, objects, fact, "goal");

    set<string> static_predicates;
    for (const auto &pred : domain.predicates)
        static_predicates.insert(pred.name);
    for (const auto &action : domain.actions) {
        for (const auto &a : action.add_effects)
            static_predicates.erase(a.predicate);
        for (const auto &d : action.delete_effects)
            static_predicates.erase(d.predicate);
    }
    unordered_set<string> init_texts;
    for (const auto &fact : problem.init)
        init_texts.insert(fact.atom.text());

    unordered_map<string, int> atom_ids;
    vector<FactAtom> atoms;
    Instantiator instantiator(domain, objects, init_texts, static_predicates, atom_ids, atoms);
    vector<int> init_ids, goal_ids;
    for (const auto &fact : problem.init)
        init_ids.push_back(instantiator.intern(fact.atom));
    for (const auto &fact : problem.goal)
        goal_ids.push_back(instantiator.intern(fact.atom));

    vector<Candidate> candidates;
    for (const auto &action : domain.actions)
        instantiator.instantiate(action, candidates);

    // Relaxed reachability fixpoint with precondition counters.
    vector<char> reached(atoms.size(), 0);
    vector<vector<int>> waiting(atoms.size());
    vector<int> unsatisfied(candidates.size());
    vector<char> enabled(candidates.size(), 0);
    deque<int> queue;
    auto reach = [&](int fact) {
        if (!reached[fact]) {
            reached[fact] = 1;
            queue.push_back(fact);
        }
    };
    auto enable = [&](int c) {
        enabled[c] = 1;
        for (int f : candidates[c].add)
            reach(f);
    };
    for (size_t c = 0; c < candidates.size(); ++c) {
        unsatisfied[c] = static_cast<int>(candidates[c].pre.size());
        for (int f : candidates[c].pre)
            waiting[f].push_back(static_cast<int>(c));
    }
    for (int f : init_ids)
        reach(f);
    for (size_t c = 0; c < candidates.size(); ++c)
        if (unsatisfied[c] == 0)
            enable(static_cast<int>(c));
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        for (int c : waiting[f])
            if (--unsatisfied[c] == 0)
                enable(c);
    }

    vector<char> in_universe = reached;
    for (int f : goal_ids)
        in_universe[f] = 1;
    vector<int> universe;
    for (size_t f = 0; f < atoms.size(); ++f)
        if (in_universe[f])
            universe.push_back(static_cast<int>(f));
    vector<string> texts(atoms.size());
    for (int f : universe)
        texts[f] = atoms[f].text();
    sort(universe.begin(), universe.end(), [&](int a, int b) {return texts[a] < texts[b];});
    vector<FactId> remap(atoms.size(), -1);
    vector<FactAtom> facts;
    for (size_t i = 0; i < universe.size(); ++i) {
        remap[universe[i]] = static_cast<FactId>(i);
        facts.push_back(atoms[universe[i]]);
    }

    const Rational default_cost = domain.has_requirement(":action-costs") ? Rational(0) : Rational(1);
    vector<GroundAction> actions;
    for (size_t c = 0; c < candidates.size(); ++c) {
        if (!enabled[c])
            continue;
        const Candidate &cand = candidates[c];
        GroundAction action;
        action.name = cand.schema->name;
        action.args = cand.args;
        action.cost = cand.schema->cost.value_or(default_cost);
        for (int f : cand.pre)
            action.precondition.push_back(remap[f]);
        for (int f : cand.add)
            action.add_effects.push_back(remap[f]);
        for (int f : cand.del)
            if (remap[f] >= 0)
                action.delete_effects.push_back(remap[f]);
        actions.push_back(move(action));
    }
    vector<string> action_texts;
    vector<size_t> order(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
        order[i] = i;
        action_texts.push_back(actions[i].text());
    }
    sort(order.begin(), order.end(), [&](size_t a, size_t b) {return action_texts[a] < action_texts[b];});
    vector<GroundAction> sorted_actions;
    sorted_actions.reserve(actions.size());
    for (size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && action_texts[order[i]] == action_texts[order[i - 1]])
            continue;
        sorted_actions.push_back(move(actions[order[i]]));
    }

    vector<FactId> init, goal;
    for (int f : init_ids)
        init.push_back(remap[f]);
    for (int f : goal_ids)
        goal.push_back(remap[f]);
    return GroundedTask(problem.name, move(facts), move(sorted_actions), move(init), move(goal));
}

GroundedTask ground_texts(string_view domain_text, string_view problem_text) {
    return ground(pddl::parse_domain(domain_text), pddl::parse_problem(problem_text));
}

}

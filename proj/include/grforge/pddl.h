#ifndef GRFORGE_PDDL_H
#define GRFORGE_PDDL_H

#include "atom.h"
#include "errors.h"
#include "rational.h"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

/*
  Reader for the STRIPS fragment of PDDL: :strips, :typing and :action-costs
  with constant costs. Anything outside the fragment (negative preconditions,
  conditional or quantified effects, numeric fluents, derived predicates) is
  rejected with a diagnostic instead of being silently ignored.
*/
namespace grforge::pddl {

class ParseError : public InputError {
public:
    enum class Kind {
        Syntax,
        UnsupportedRequirement,
        Unsupported,
        Arity,
        Undeclared,
        TypeMismatch,
    };

    ParseError(Kind kind, const std::string &message, int line = 0, int column = 0);

    Kind kind() const {return kind_;}
    int line() const {return line_;}
    int column() const {return column_;}

private:
    Kind kind_;
    int line_;
    int column_;
};

struct TypedName {
    std::string name;
    std::string type = "object";
};

// Atom inside an action schema; terms are "?var" or constant names.
struct AtomSchema {
    std::string predicate;
    std::vector<std::string> terms;
    int line = 0;
    int column = 0;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<AtomSchema> precondition;
    std::vector<AtomSchema> add_effects;
    std::vector<AtomSchema> delete_effects;
    // Set when the effect contains (increase (total-cost) c).
    std::optional<Rational> cost;
};

struct Predicate {
    std::string name;
    std::vector<TypedName> parameters;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    // Declared types with their parent ("object" is the implicit root).
    std::vector<TypedName> types;
    std::vector<TypedName> constants;
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> actions;

    bool has_requirement(std::string_view requirement) const;
    bool has_type(std::string_view type) const;
    bool is_subtype(std::string_view type, std::string_view ancestor) const;
    const Predicate *find_predicate(std::string_view name) const;
};

struct LocatedAtom {
    FactAtom atom;
    int line = 0;
    int column = 0;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<std::string> requirements;
    std::vector<TypedName> objects;
    std::vector<LocatedAtom> init;
    std::vector<LocatedAtom> goal;
    bool has_goal = false;
    bool uses_total_cost = false;
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text);

// Problem file with the (:goal ...) section removed, in a fixed layout.
std::string write_problem_template(const Problem &problem);

}

#endif

#ifndef GRFORGE_GROUNDING_H
#define GRFORGE_GROUNDING_H

#include "pddl.h"
#include "task.h"

namespace grforge {

/*
  Instantiates every action schema with all type-consistent object tuples,
  then keeps only actions whose preconditions are reachable under the delete
  relaxation from the initial state. The fact universe is the set of
  relaxed-reachable facts plus the goal atoms; facts and actions are sorted
  by canonical text, so the result does not depend on declaration order.

  Actions without an explicit cost cost 1, or 0 when the domain declares
  :action-costs (standard PDDL semantics for unspecified increases).

  Throws pddl::ParseError for undeclared symbols, arity and type mismatches.
*/
GroundedTask ground(const pddl::Domain &domain, const pddl::Problem &problem);

// Convenience: parse both texts and ground.
GroundedTask ground_texts(std::string_view domain_text, std::string_view problem_text);

}

#endif

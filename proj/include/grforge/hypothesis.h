#ifndef GRFORGE_HYPOTHESIS_H
#define GRFORGE_HYPOTHESIS_H

#include "atom.h"

#include <string>
#include <vector>

namespace grforge {

// A candidate goal: a conjunction of atoms, kept in canonical (sorted) order.
struct Hypothesis {
    std::string id;
    std::vector<FactAtom> atoms;
    bool is_true_goal = false;

    // Comma-separated canonical atoms, the line format of hyps.dat.
    std::string line() const {return format_atom_list(atoms);}

    friend bool operator==(const Hypothesis &, const Hypothesis &) = default;
};

Hypothesis make_hypothesis(std::string id, std::vector<FactAtom> atoms, bool is_true_goal = false);

// Same atom set, regardless of ids and flags.
bool same_goal(const Hypothesis &lhs, const Hypothesis &rhs);

// Actions named by label, e.g. "(pick-up a)". `noisy` marks replaced or
// inserted entries; it is bookkeeping and never shown to a recogniser.
struct ObservationSequence {
    std::vector<std::string> steps;
    std::vector<bool> noisy;

    std::size_t size() const {return steps.size();}
    bool empty() const {return steps.empty();}
    std::size_t noise_count() const;

    friend bool operator==(const ObservationSequence &, const ObservationSequence &) = default;
};

}

#endif

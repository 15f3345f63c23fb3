#include "grforge/hypothesis.h"

#include <algorithm>

using namespace std;

namespace grforge {

Hypothesis make_hypothesis(string id, vector<FactAtom> atoms, bool is_true_goal) {
    sort(atoms.begin(), atoms.end());
    atoms.erase(unique(atoms.begin(), atoms.end()), atoms.end());
    return Hypothesis {move(id), move(atoms), is_true_goal};
}

bool same_goal(const Hypothesis &lhs, const Hypothesis &rhs) {
    return lhs.atoms == rhs.atoms;
}

size_t ObservationSequence::noise_count() const {
    return static_cast<size_t>(count(noisy.begin(), noisy.end(), true));
}

}

#include "grforge/mutexes.h"

#include <algorithm>

using namespace std;

namespace grforge {

MutexTable::MutexTable(const GroundedTask &task)
    : size_(task.num_facts()), reached_(static_cast<size_t>(size_) * size_, 0) {
    auto mark = [&](FactId a, FactId b) {
        char &cell = reached_[a * size_ + b];
        if (cell)
            return false;
        cell = 1;
        reached_[b * size_ + a] = 1;
        return true;
    };
    vector<FactId> init = task.init().facts();
    for (FactId a : init)
        for (FactId b : init)
            mark(a, b);

    auto jointly_reachable = [&](const vector<FactId> &facts, FactId extra) {
        for (FactId p : facts) {
            if (extra >= 0 && !pair_reachable(p, extra))
                return false;
            for (FactId q : facts)
                if (q >= p && !pair_reachable(p, q))
                    return false;
        }
        return extra < 0 || pair_reachable(extra, extra);
    };

    vector<char> touched(size_);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const GroundAction &action : task.actions()) {
            if (!jointly_reachable(action.precondition, -1))
                continue;
            for (FactId p : action.add_effects)
                for (FactId q : action.add_effects)
                    changed |= mark(p, q);
            fill(touched.begin(), touched.end(), 0);
            for (FactId f : action.add_effects)
                touched[f] = 1;
            for (FactId f : action.delete_effects)
                touched[f] = 1;
            // A fact untouched by the action survives alongside its adds.
            for (FactId r = 0; r < size_; ++r) {
                if (touched[r] || !jointly_reachable(action.precondition, r))
                    continue;
                for (FactId p : action.add_effects)
                    changed |= mark(p, r);
            }
        }
    }
}

}

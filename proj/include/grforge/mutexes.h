#ifndef GRFORGE_MUTEXES_H
#define GRFORGE_MUTEXES_H

#include "task.h"

namespace grforge {

// h^2 reachability: a pair of facts that is never reachable together is a mutex.
class MutexTable {
public:
    explicit MutexTable(const GroundedTask &task);

    bool reachable(FactId fact) const {return pair_reachable(fact, fact);}
    bool mutex(FactId a, FactId b) const {return !pair_reachable(a, b);}

private:
    bool pair_reachable(FactId a, FactId b) const {return reached_[a * size_ + b] != 0;}

    int size_;
    std::vector<char> reached_;
};

}

#endif

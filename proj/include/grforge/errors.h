#ifndef GRFORGE_ERRORS_H
#define GRFORGE_ERRORS_H

#include <stdexcept>
#include <string>

namespace grforge {

// Bad user input: unparsable files, undeclared symbols, unknown atoms.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured search/time budget was exhausted before an answer was found.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A dataset or plan failed a consistency check.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}

#endif

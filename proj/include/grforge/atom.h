#ifndef GRFORGE_ATOM_H
#define GRFORGE_ATOM_H

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace grforge {

/*
  A ground proposition such as (on a b). Symbols are lowercase. The canonical
  text form "(pred arg1 arg2)" is the identity used in every file format, and
  atoms are ordered lexicographically on it.
*/
struct FactAtom {
    std::string predicate;
    std::vector<std::string> args;

    std::string text() const;

    friend bool operator==(const FactAtom &, const FactAtom &) = default;
    friend std::strong_ordering operator<=>(const FactAtom &lhs, const FactAtom &rhs) {
        return lhs.text() <=> rhs.text();
    }
};

// Parses "(pred a b)" (case-insensitive, arbitrary inner whitespace).
// Throws InputError on malformed text.
FactAtom parse_atom(std::string_view text);

// Parses a comma-separated conjunction: "(on a b),(clear a)".
std::vector<FactAtom> parse_atom_list(std::string_view text);

// Inverse of parse_atom_list; atoms are written in the given order.
std::string format_atom_list(const std::vector<FactAtom> &atoms);

std::string to_lower(std::string_view text);

}

#endif

#include "grforge/atom.h"

#include "grforge/errors.h"

#include <cctype>

using namespace std;

namespace grforge {

string to_lower(string_view text) {
    string result(text);
    for (char &c : result)
        c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
    return result;
}

string FactAtom::text() const {
    string result = "(" + predicate;
    for (const string &arg : args) {
        result += ' ';
        result += arg;
    }
    result += ')';
    return result;
}

FactAtom parse_atom(string_view text) {
    size_t begin = text.find_first_not_of(" \t\r\n");
    size_t end = text.find_last_not_of(" \t\r\n");
    if (begin == string_view::npos || text[begin] != '(' || text[end] != ')')
        throw InputError("malformed atom '" + string(text) + "'");
    string_view inner = text.substr(begin + 1, end - begin - 1);

    vector<string> tokens;
    size_t pos = 0;
    while (pos < inner.size()) {
        while (pos < inner.size() && isspace(static_cast<unsigned char>(inner[pos])))
            ++pos;
        size_t start = pos;
        while (pos < inner.size() && !isspace(static_cast<unsigned char>(inner[pos])))
            ++pos;
        if (pos > start) {
            string_view token = inner.substr(start, pos - start);
            if (token.find_first_of("(),") != string_view::npos)
                throw InputError("malformed atom '" + string(text) + "'");
            tokens.push_back(to_lower(token));
        }
    }
    if (tokens.empty())
        throw InputError("atom without predicate '" + string(text) + "'");
    FactAtom atom;
    atom.predicate = tokens.front();
    atom.args.assign(tokens.begin() + 1, tokens.end());
    return atom;
}

vector<FactAtom> parse_atom_list(string_view text) {
    vector<FactAtom> atoms;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t open = text.find('(', pos);
        if (open == string_view::npos) {
            if (text.substr(pos).find_first_not_of(" \t\r\n,") != string_view::npos)
                throw InputError("trailing text in atom list '" + string(text) + "'");
            break;
        }
        if (text.substr(pos, open - pos).find_first_not_of(" \t\r\n,") != string_view::npos)
            throw InputError("unexpected text in atom list '" + string(text) + "'");
        size_t close = text.find(')', open);
        if (close == string_view::npos)
            throw InputError("unterminated atom in '" + string(text) + "'");
        atoms.push_back(parse_atom(text.substr(open, close - open + 1)));
        pos = close + 1;
    }
    return atoms;
}

string format_atom_list(const vector<FactAtom> &atoms) {
    string result;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i)
            result += ',';
        result += atoms[i].text();
    }
    return result;
}

}

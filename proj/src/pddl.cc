#include "grforge/pddl.h"

#include <algorithm>
#include <cctype>
#include <set>

using namespace std;

namespace grforge::pddl {
namespace {
using Kind = ParseError::Kind;

struct SExpr {
    bool is_list = false;
    string token;
    vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_token(string_view text) const {return !is_list && token == text;}
};

[[noreturn]] void fail(Kind kind, const string &message, const SExpr &where) {
    throw ParseError(kind, message, where.line, where.column);
}

class Reader {
    string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read_expr() {
        skip_space();
        if (pos_ >= text_.size())
            throw ParseError(Kind::Syntax, "unexpected end of input", line_, column_);
        SExpr expr;
        expr.line = line_;
        expr.column = column_;
        char c = text_[pos_];
        if (c == ')')
            throw ParseError(Kind::Syntax, "unexpected ')'", line_, column_);
        if (c == '(') {
            advance();
            expr.is_list = true;
            while (true) {
                skip_space();
                if (pos_ >= text_.size())
                    throw ParseError(Kind::Syntax, "unbalanced '(' opened here",
                                     expr.line, expr.column);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                expr.items.push_back(read_expr());
            }
            return expr;
        }
        size_t start = pos_;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || isspace(static_cast<unsigned char>(d)))
                break;
            advance();
        }
        expr.token = to_lower(text_.substr(start, pos_ - start));
        return expr;
    }

public:
    explicit Reader(string_view text) : text_(text) {}

    SExpr read_document() {
        SExpr root = read_expr();
        skip_space();
        if (pos_ < text_.size())
            throw ParseError(Kind::Syntax, "trailing content after definition", line_, column_);
        return root;
    }
};

bool is_variable(string_view token) {
    return !token.empty() && token.front() == '?';
}

const SExpr &expect_list(const SExpr &expr, const string &what) {
    if (!expr.is_list)
        fail(Kind::Syntax, "expected " + what + ", found '" + expr.token + "'", expr);
    return expr;
}

const string &expect_token(const SExpr &expr, const string &what) {
    if (expr.is_list)
        fail(Kind::Syntax, "expected " + what + ", found a list", expr);
    return expr.token;
}

vector<TypedName> parse_typed_list(const vector<SExpr> &items, size_t begin) {
    vector<TypedName> result;
    size_t untyped_start = result.size();
    for (size_t i = begin; i < items.size(); ++i) {
        const SExpr &item = items[i];
        if (item.is_list)
            fail(Kind::Syntax, "unexpected list in typed list", item);
        if (item.token == "-") {
            if (i + 1 >= items.size())
                fail(Kind::Syntax, "missing type after '-'", item);
            const SExpr &type = items[++i];
            if (type.is_list) {
                if (!type.items.empty() && type.items.front().is_token("either"))
                    fail(Kind::Unsupported, "'either' types are not supported", type);
                fail(Kind::Syntax, "malformed type", type);
            }
            if (untyped_start == result.size())
                fail(Kind::Syntax, "type '" + type.token + "' without names", type);
            for (size_t j = untyped_start; j < result.size(); ++j)
                result[j].type = type.token;
            untyped_start = result.size();
        } else {
            result.push_back(TypedName {item.token, "object"});
        }
    }
    return result;
}

vector<string> parse_requirements(const SExpr &section) {
    static const set<string, less<>> supported = {":strips", ":typing", ":action-costs"};
    vector<string> result;
    for (size_t i = 1; i < section.items.size(); ++i) {
        const string &req = expect_token(section.items[i], "requirement");
        if (!supported.count(req))
            fail(Kind::UnsupportedRequirement, "unsupported requirement " + req, section.items[i]);
        result.push_back(req);
    }
    return result;
}

[[noreturn]] void reject_connective(const SExpr &expr, const string &context) {
    const string &head = expr.items.front().token;
    if (head == "not")
        fail(Kind::Unsupported, "negative literals are not supported in " + context, expr);
    fail(Kind::Unsupported, "'" + head + "' is not supported in " + context, expr);
}

// Flattens a conjunction of positive atoms. Accepts "()" as the empty conjunction.
void collect_conjunction(const SExpr &expr, const string &context, vector<AtomSchema> &out) {
    expect_list(expr, context);
    if (expr.items.empty())
        return;
    const SExpr &head = expr.items.front();
    if (head.is_list)
        fail(Kind::Syntax, "expected predicate or connective in " + context, head);
    static const set<string, less<>> connectives = {
        "not", "or", "imply", "exists", "forall", "when", "=", "increase", "decrease",
        "assign", "preference", "either"};
    if (head.token == "and") {
        for (size_t i = 1; i < expr.items.size(); ++i)
            collect_conjunction(expr.items[i], context, out);
        return;
    }
    if (connectives.count(head.token) || (!head.token.empty() && head.token.front() == ':'))
        reject_connective(expr, context);
    AtomSchema atom;
    atom.predicate = head.token;
    atom.line = expr.line;
    atom.column = expr.column;
    for (size_t i = 1; i < expr.items.size(); ++i)
        atom.terms.push_back(expect_token(expr.items[i], "term"));
    out.push_back(move(atom));
}

Rational parse_cost_increase(const SExpr &expr) {
    if (expr.items.size() != 3)
        fail(Kind::Syntax, "malformed increase effect", expr);
    const SExpr &target = expr.items[1];
    if (!target.is_list || target.items.size() != 1 || !target.items[0].is_token("total-cost"))
        fail(Kind::Unsupported, "only (increase (total-cost) c) effects are supported", expr);
    const SExpr &amount = expr.items[2];
    if (amount.is_list)
        fail(Kind::Unsupported, "action costs must be constant numbers", amount);
    Rational cost;
    try {
        cost = Rational::parse(amount.token);
    } catch (const invalid_argument &) {
        fail(Kind::Syntax, "invalid cost '" + amount.token + "'", amount);
    }
    if (cost < Rational(0))
        fail(Kind::Unsupported, "negative action cost", amount);
    return cost;
}

void collect_effect(const SExpr &expr, ActionSchema &action) {
    expect_list(expr, "effect");
    if (expr.items.empty())
        return;
    const SExpr &head = expr.items.front();
    if (head.is_token("and")) {
        for (size_t i = 1; i < expr.items.size(); ++i)
            collect_effect(expr.items[i], action);
        return;
    }
    if (head.is_token("not")) {
        if (expr.items.size() != 2)
            fail(Kind::Syntax, "malformed negative effect", expr);
        vector<AtomSchema> atoms;
        const SExpr &inner = expr.items[1];
        if (inner.is_list && !inner.items.empty() && inner.items.front().is_token("and"))
            fail(Kind::Syntax, "(not (and ...)) is not a valid effect", expr);
        collect_conjunction(inner, "delete effects", atoms);
        action.delete_effects.insert(action.delete_effects.end(), atoms.begin(), atoms.end());
        return;
    }
    if (head.is_token("increase")) {
        if (action.cost)
            fail(Kind::Unsupported, "multiple cost increases in one action", expr);
        action.cost = parse_cost_increase(expr);
        return;
    }
    collect_conjunction(expr, "effects", action.add_effects);
}

ActionSchema parse_action(const SExpr &section) {
    if (section.items.size() < 2)
        fail(Kind::Syntax, "action without name", section);
    ActionSchema action;
    action.name = expect_token(section.items[1], "action name");
    for (size_t i = 2; i < section.items.size(); i += 2) {
        const string &key = expect_token(section.items[i], "action keyword");
        if (i + 1 >= section.items.size())
            fail(Kind::Syntax, "missing value for " + key, section.items[i]);
        const SExpr &value = section.items[i + 1];
        if (key == ":parameters") {
            action.parameters = parse_typed_list(expect_list(value, "parameter list").items, 0);
            for (const TypedName &param : action.parameters)
                if (!is_variable(param.name))
                    fail(Kind::Syntax, "parameter '" + param.name + "' must start with '?'", value);
        } else if (key == ":precondition") {
            collect_conjunction(value, "preconditions", action.precondition);
        } else if (key == ":effect") {
            collect_effect(value, action);
        } else {
            fail(Kind::Unsupported, "unsupported action keyword " + key, section.items[i]);
        }
    }
    return action;
}

void check_atom(const Domain &domain, const AtomSchema &atom, const ActionSchema &action) {
    const Predicate *pred = domain.find_predicate(atom.predicate);
    if (!pred)
        throw ParseError(Kind::Undeclared,
                         "undeclared predicate '" + atom.predicate + "' in action " + action.name,
                         atom.line, atom.column);
    if (pred->parameters.size() != atom.terms.size())
        throw ParseError(Kind::Arity,
                         "predicate '" + atom.predicate + "' expects " +
                         to_string(pred->parameters.size()) + " arguments, got " +
                         to_string(atom.terms.size()),
                         atom.line, atom.column);
    for (const string &term : atom.terms) {
        if (is_variable(term)) {
            bool bound = any_of(action.parameters.begin(), action.parameters.end(),
                                [&](const TypedName &p) {return p.name == term;});
            if (!bound)
                throw ParseError(Kind::Undeclared,
                                 "unbound variable " + term + " in action " + action.name,
                                 atom.line, atom.column);
        } else {
            bool declared = any_of(domain.constants.begin(), domain.constants.end(),
                                   [&](const TypedName &c) {return c.name == term;});
            if (!declared)
                throw ParseError(Kind::Undeclared,
                                 "undeclared constant '" + term + "' in action " + action.name,
                                 atom.line, atom.column);
        }
    }
}

void check_types(const Domain &domain, const vector<TypedName> &names, const SExpr &where) {
    for (const TypedName &n : names)
        if (!domain.has_type(n.type))
            fail(Kind::Undeclared, "undeclared type '" + n.type + "'", where);
}

vector<LocatedAtom> parse_ground_conjunction(const SExpr &expr, const string &context) {
    vector<AtomSchema> schemas;
    collect_conjunction(expr, context, schemas);
    vector<LocatedAtom> result;
    for (AtomSchema &schema : schemas) {
        for (const string &term : schema.terms)
            if (is_variable(term))
                throw ParseError(Kind::Syntax, "variable " + term + " in " + context,
                                 schema.line, schema.column);
        result.push_back({FactAtom {schema.predicate, schema.terms}, schema.line, schema.column});
    }
    return result;
}

const SExpr &expect_define(const SExpr &root, const string &kind, string &name) {
    expect_list(root, "(define ...)");
    if (root.items.size() < 2 || !root.items[0].is_token("define"))
        fail(Kind::Syntax, "expected (define ...)", root);
    const SExpr &header = root.items[1];
    if (!header.is_list || header.items.size() != 2 || !header.items[0].is_token(kind))
        fail(Kind::Syntax, "expected (" + kind + " <name>)", header);
    name = expect_token(header.items[1], kind + " name");
    return root;
}
}

ParseError::ParseError(Kind kind, const string &message, int line, int column)
    : InputError(line > 0 ? "line " + to_string(line) + ", column " + to_string(column) +
                 ": " + message : message),
      kind_(kind), line_(line), column_(column) {
}

bool Domain::has_requirement(string_view requirement) const {
    return find(requirements.begin(), requirements.end(), requirement) != requirements.end();
}

bool Domain::has_type(string_view type) const {
    return type == "object" ||
           any_of(types.begin(), types.end(), [&](const TypedName &t) {return t.name == type;});
}

bool Domain::is_subtype(string_view type, string_view ancestor) const {
    if (ancestor == "object")
        return true;
    string current(type);
    for (size_t steps = 0; steps <= types.size(); ++steps) {
        if (current == ancestor)
            return true;
        auto it = find_if(types.begin(), types.end(),
                          [&](const TypedName &t) {return t.name == current;});
        if (it == types.end())
            return false;
        current = it->type;
    }
    return false;
}

const Predicate *Domain::find_predicate(string_view name) const {
    auto it = find_if(predicates.begin(), predicates.end(),
                      [&](const Predicate &p) {return p.name == name;});
    return it == predicates.end() ? nullptr : &*it;
}

Domain parse_domain(string_view text) {
    SExpr root = Reader(text).read_document();
    Domain domain;
    expect_define(root, "domain", domain.name);

    for (size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = expect_list(root.items[i], "domain section");
        if (section.items.empty())
            fail(Kind::Syntax, "empty section", section);
        const string &key = expect_token(section.items[0], "section keyword");
        if (key == ":requirements") {
            domain.requirements = parse_requirements(section);
        } else if (key == ":types") {
            domain.types = parse_typed_list(section.items, 1);
        } else if (key == ":constants") {
            domain.constants = parse_typed_list(section.items, 1);
        } else if (key == ":predicates") {
            for (size_t j = 1; j < section.items.size(); ++j) {
                const SExpr &decl = expect_list(section.items[j], "predicate declaration");
                if (decl.items.empty())
                    fail(Kind::Syntax, "empty predicate declaration", decl);
                Predicate pred;
                pred.name = expect_token(decl.items[0], "predicate name");
                pred.parameters = parse_typed_list(decl.items, 1);
                if (domain.find_predicate(pred.name))
                    fail(Kind::Syntax, "duplicate predicate '" + pred.name + "'", decl);
                domain.predicates.push_back(move(pred));
            }
        } else if (key == ":functions") {
            for (size_t j = 1; j < section.items.size(); ++j) {
                const SExpr &item = section.items[j];
                if (item.is_list) {
                    if (item.items.size() != 1 || !item.items[0].is_token("total-cost"))
                        fail(Kind::Unsupported, "numeric fluents other than total-cost", item);
                } else if (item.token != "-" && item.token != "number") {
                    fail(Kind::Syntax, "malformed function declaration", item);
                }
            }
        } else if (key == ":action") {
            domain.actions.push_back(parse_action(section));
        } else {
            fail(Kind::Unsupported, "unsupported domain section " + key, section);
        }
    }

    for (const TypedName &type : domain.types)
        if (!domain.has_type(type.type))
            fail(Kind::Undeclared, "undeclared parent type '" + type.type + "'", root);
    check_types(domain, domain.constants, root);
    for (const Predicate &pred : domain.predicates)
        check_types(domain, pred.parameters, root);
    for (const ActionSchema &action : domain.actions) {
        check_types(domain, action.parameters, root);
        for (const auto *atoms : {&action.precondition, &action.add_effects, &action.delete_effects})
            for (const AtomSchema &atom : *atoms)
                check_atom(domain, atom, action);
        if (action.cost && !domain.has_requirement(":action-costs"))
            fail(Kind::UnsupportedRequirement,
                 "action " + action.name + " increases total-cost without :action-costs", root);
    }
    return domain;
}

Problem parse_problem(string_view text) {
    SExpr root = Reader(text).read_document();
    Problem problem;
    expect_define(root, "problem", problem.name);

    for (size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = expect_list(root.items[i], "problem section");
        if (section.items.empty())
            fail(Kind::Syntax, "empty section", section);
        const string &key = expect_token(section.items[0], "section keyword");
        if (key == ":domain") {
            if (section.items.size() != 2)
                fail(Kind::Syntax, "malformed :domain", section);
            problem.domain_name = expect_token(section.items[1], "domain name");
        } else if (key == ":requirements") {
            problem.requirements = parse_requirements(section);
        } else if (key == ":objects") {
            problem.objects = parse_typed_list(section.items, 1);
        } else if (key == ":init") {
            for (size_t j = 1; j < section.items.size(); ++j) {
                const SExpr &fact = expect_list(section.items[j], "initial fact");
                if (!fact.items.empty() && fact.items[0].is_token("=")) {
                    if (fact.items.size() != 3 || !fact.items[1].is_list ||
                        fact.items[1].items.size() != 1 ||
                        !fact.items[1].items[0].is_token("total-cost"))
                        fail(Kind::Unsupported, "numeric initial values other than total-cost", fact);
                    problem.uses_total_cost = true;
                    continue;
                }
                vector<LocatedAtom> atoms = parse_ground_conjunction(fact, "initial state");
                if (atoms.size() != 1)
                    fail(Kind::Syntax, "initial state entries must be single atoms", fact);
                problem.init.push_back(move(atoms.front()));
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2)
                fail(Kind::Syntax, "malformed :goal", section);
            problem.goal = parse_ground_conjunction(section.items[1], "goal");
            problem.has_goal = true;
        } else if (key == ":metric") {
            if (section.items.size() != 3 || !section.items[1].is_token("minimize") ||
                !section.items[2].is_list || section.items[2].items.size() != 1 ||
                !section.items[2].items[0].is_token("total-cost"))
                fail(Kind::Unsupported, "only (:metric minimize (total-cost)) is supported", section);
            problem.uses_total_cost = true;
        } else {
            fail(Kind::Unsupported, "unsupported problem section " + key, section);
        }
    }
    return problem;
}

string write_problem_template(const Problem &problem) {
    string out = "(define (problem " + problem.name + ")\n";
    out += "  (:domain " + problem.domain_name + ")\n";
    if (!problem.requirements.empty()) {
        out += "  (:requirements";
        for (const string &req : problem.requirements)
            out += " " + req;
        out += ")\n";
    }
    out += "  (:objects";
    size_t i = 0;
    while (i < problem.objects.size()) {
        size_t j = i;
        while (j < problem.objects.size() && problem.objects[j].type == problem.objects[i].type)
            out += " " + problem.objects[j++].name;
        if (problem.objects[i].type != "object" || j < problem.objects.size() || i > 0)
            out += " - " + problem.objects[i].type;
        i = j;
    }
    out += ")\n  (:init";
    for (const LocatedAtom &fact : problem.init)
        out += "\n    " + fact.atom.text();
    if (problem.uses_total_cost)
        out += "\n    (= (total-cost) 0)";
    out += ")\n";
    if (problem.uses_total_cost)
        out += "  (:metric minimize (total-cost))\n";
    out += ")\n";
    return out;
}

}

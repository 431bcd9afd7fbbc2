#pragma once

// Fixed expression grammar for scalar integrand coefficients A(s).
//
// Supported forms: numeric literals, named parameters, the variable symbol,
// + - * / ^, unary minus, sqrt(e), exp(e), log(e), parentheses.  `^` binds
// tighter than unary minus and is right associative.  Differentiation is
// symbolic, so first and second derivatives of a parsed expression are exact
// up to rounding.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace phidir::expr {

struct NodeImpl;
using Node = std::shared_ptr<const NodeImpl>;

// Variable bindings used during evaluation, e.g. {{"s", 2.0}}.
using Env = std::map<std::string, double>;

class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Parse `src`; identifiers found in `params` are substituted as constants,
// all other identifiers remain free variables.
Node parse(const std::string& src, const Env& params = {});

double eval(const Node& n, const Env& env);
double eval(const Node& n, double s);  // single free variable named "s"

// d(n)/d(var), as a new expression tree.
Node differentiate(const Node& n, const std::string& var = "s");

std::string to_string(const Node& n);

// Constructors for building trees directly (constant-folded where cheap).
Node constant(double v);
Node variable(const std::string& name);
Node add(Node a, Node b);
Node sub(Node a, Node b);
Node mul(Node a, Node b);
Node div(Node a, Node b);
Node pow(Node base, Node exponent);
Node negate(Node a);
Node sqrt(Node a);
Node exp(Node a);
Node log(Node a);

}  // namespace phidir::expr

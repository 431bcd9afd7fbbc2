#include "phidir/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace phidir::expr {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp, Log };

struct NodeImpl {
  Kind kind;
  double value = 0.0;    // Const
  std::string name;      // Var
  Node a, b;
};

namespace {

Node make(Kind k, Node a = nullptr, Node b = nullptr) {
  auto n = std::make_shared<NodeImpl>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const Node& n, double v) {
  return n->kind == Kind::Const && n->value == v;
}

}  // namespace

Node constant(double v) {
  auto n = std::make_shared<NodeImpl>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

Node variable(const std::string& name) {
  auto n = std::make_shared<NodeImpl>();
  n->kind = Kind::Var;
  n->name = name;
  return n;
}

Node add(Node a, Node b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return constant(a->value + b->value);
  return make(Kind::Add, std::move(a), std::move(b));
}

Node sub(Node a, Node b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return constant(a->value - b->value);
  if (is_const(a, 0.0)) return negate(std::move(b));
  return make(Kind::Sub, std::move(a), std::move(b));
}

Node mul(Node a, Node b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return constant(a->value * b->value);
  return make(Kind::Mul, std::move(a), std::move(b));
}

Node div(Node a, Node b) {
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const && b->value != 0.0)
    return constant(a->value / b->value);
  return make(Kind::Div, std::move(a), std::move(b));
}

Node pow(Node base, Node exponent) {
  if (is_const(exponent, 0.0)) return constant(1.0);
  if (is_const(exponent, 1.0)) return base;
  if (is_const(base, 1.0)) return constant(1.0);
  if (base->kind == Kind::Const && exponent->kind == Kind::Const)
    return constant(std::pow(base->value, exponent->value));
  return make(Kind::Pow, std::move(base), std::move(exponent));
}

Node negate(Node a) {
  if (a->kind == Kind::Const) return constant(-a->value);
  if (a->kind == Kind::Neg) return a->a;
  return make(Kind::Neg, std::move(a));
}

Node sqrt(Node a) { return make(Kind::Sqrt, std::move(a)); }
Node exp(Node a) { return make(Kind::Exp, std::move(a)); }
Node log(Node a) { return make(Kind::Log, std::move(a)); }

double eval(const Node& n, const Env& env) {
  switch (n->kind) {
    case Kind::Const: return n->value;
    case Kind::Var: {
      auto it = env.find(n->name);
      if (it == env.end())
        throw std::runtime_error("unbound variable '" + n->name + "'");
      return it->second;
    }
    case Kind::Add: return eval(n->a, env) + eval(n->b, env);
    case Kind::Sub: return eval(n->a, env) - eval(n->b, env);
    case Kind::Mul: return eval(n->a, env) * eval(n->b, env);
    case Kind::Div: return eval(n->a, env) / eval(n->b, env);
    case Kind::Pow: return std::pow(eval(n->a, env), eval(n->b, env));
    case Kind::Neg: return -eval(n->a, env);
    case Kind::Sqrt: return std::sqrt(eval(n->a, env));
    case Kind::Exp: return std::exp(eval(n->a, env));
    case Kind::Log: return std::log(eval(n->a, env));
  }
  throw std::logic_error("corrupt expression node");
}

double eval(const Node& n, double s) { return eval(n, Env{{"s", s}}); }

Node differentiate(const Node& n, const std::string& var) {
  switch (n->kind) {
    case Kind::Const: return constant(0.0);
    case Kind::Var: return constant(n->name == var ? 1.0 : 0.0);
    case Kind::Add: return add(differentiate(n->a, var), differentiate(n->b, var));
    case Kind::Sub: return sub(differentiate(n->a, var), differentiate(n->b, var));
    case Kind::Mul:
      return add(mul(differentiate(n->a, var), n->b),
                 mul(n->a, differentiate(n->b, var)));
    case Kind::Div:
      return div(sub(mul(differentiate(n->a, var), n->b),
                     mul(n->a, differentiate(n->b, var))),
                 pow(n->b, constant(2.0)));
    case Kind::Pow: {
      const Node& f = n->a;
      const Node& g = n->b;
      Node df = differentiate(f, var);
      Node dg = differentiate(g, var);
      if (g->kind == Kind::Const) {
        // d/ds f^c = c f^{c-1} f'
        return mul(mul(g, pow(f, constant(g->value - 1.0))), df);
      }
      // general case: f^g (g' log f + g f'/f)
      return mul(make(Kind::Pow, f, g),
                 add(mul(dg, log(f)), mul(g, div(df, f))));
    }
    case Kind::Neg: return negate(differentiate(n->a, var));
    case Kind::Sqrt:
      return div(differentiate(n->a, var),
                 mul(constant(2.0), sqrt(n->a)));
    case Kind::Exp: return mul(make(Kind::Exp, n->a), differentiate(n->a, var));
    case Kind::Log: return div(differentiate(n->a, var), n->a);
  }
  throw std::logic_error("corrupt expression node");
}

std::string to_string(const Node& n) {
  std::ostringstream os;
  os.precision(17);
  switch (n->kind) {
    case Kind::Const: os << n->value; break;
    case Kind::Var: os << n->name; break;
    case Kind::Add: os << "(" << to_string(n->a) << " + " << to_string(n->b) << ")"; break;
    case Kind::Sub: os << "(" << to_string(n->a) << " - " << to_string(n->b) << ")"; break;
    case Kind::Mul: os << "(" << to_string(n->a) << " * " << to_string(n->b) << ")"; break;
    case Kind::Div: os << "(" << to_string(n->a) << " / " << to_string(n->b) << ")"; break;
    case Kind::Pow: os << "(" << to_string(n->a) << ")^(" << to_string(n->b) << ")"; break;
    case Kind::Neg: os << "(-" << to_string(n->a) << ")"; break;
    case Kind::Sqrt: os << "sqrt(" << to_string(n->a) << ")"; break;
    case Kind::Exp: os << "exp(" << to_string(n->a) << ")"; break;
    case Kind::Log: os << "log(" << to_string(n->a) << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// recursive descent parser

namespace {

struct Parser {
  const std::string& src;
  const Env& params;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) { ++pos; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at position " + std::to_string(pos) + " in '" + src + "'");
  }

  Node parse_expression() {
    Node lhs = parse_term();
    for (;;) {
      if (eat('+')) lhs = add(lhs, parse_term());
      else if (eat('-')) lhs = sub(lhs, parse_term());
      else return lhs;
    }
  }

  Node parse_term() {
    Node lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = mul(lhs, parse_unary());
      else if (eat('/')) lhs = div(lhs, parse_unary());
      else return lhs;
    }
  }

  Node parse_unary() {
    if (eat('-')) return negate(parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_atom();
    if (eat('^')) {
      // right associative; exponent may carry a sign
      Node e = eat('-') ? negate(parse_power()) : parse_power();
      return pow(base, e);
    }
    return base;
  }

  Node parse_atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of expression");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      Node inner = parse_expression();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Node parse_number() {
    size_t start = pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.' ||
            src[pos] == 'e' || src[pos] == 'E' ||
            ((src[pos] == '+' || src[pos] == '-') && pos > start &&
             (src[pos - 1] == 'e' || src[pos - 1] == 'E'))))
      ++pos;
    try {
      return constant(std::stod(src.substr(start, pos - start)));
    } catch (const std::exception&) {
      fail("malformed number");
    }
  }

  Node parse_identifier() {
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name = src.substr(start, pos - start);
    if (peek() == '(') {
      ++pos;
      Node arg = parse_expression();
      if (!eat(')')) fail("expected ')' after function argument");
      if (name == "sqrt") return sqrt(arg);
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      fail("unknown function '" + name + "'");
    }
    auto it = params.find(name);
    if (it != params.end()) return constant(it->second);
    return variable(name);
  }
};

}  // namespace

Node parse(const std::string& src, const Env& params) {
  Parser p{src, params};
  Node n = p.parse_expression();
  p.skip_ws();
  if (p.pos != src.size()) p.fail("trailing characters");
  return n;
}

}  // namespace phidir::expr

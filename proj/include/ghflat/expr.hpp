#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace ghflat {

// Closed-form expressions in the single variable r.
// Grammar:
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := ["-"] power
//   power := atom ["^" exponent]          exponent is a (possibly signed,
//   atom  := number | "r" | ident "(" expr ")" | "(" expr ")"   possibly parenthesized) number
//   ident in {sin, cos, exp, abs, sqrt}
// Exponents are constants only, so the symbolic derivative stays inside the grammar.

enum class ExprOp {
  constant,
  var_r,
  add,
  sub,
  mul,
  div,
  pow,  // base^value, value constant
  sin,
  cos,
  exp,
  abs,
  sqrt
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op;
  double value = 0.0;  // constant payload (constant, pow exponent)
  ExprPtr a;
  ExprPtr b;
};

ExprPtr make_const(double v);
ExprPtr make_var();
ExprPtr make_unary(ExprOp op, ExprPtr a);
ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, double exponent);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct ProfileExpr {
  ExprPtr ast;
  std::string source_text;

  double eval(double r) const;
  // True when r sits on (or within `tol` of) an abs() kink, where only
  // one-sided derivatives exist.
  bool on_abs_kink(double r, double tol = 1e-12) const;
};

ProfileExpr parse_profile(const std::string& text);

std::string render(const ExprPtr& e);
std::string render(const ProfileExpr& e);

// Structural equality (same tree, constants compared exactly).
bool equal_ast(const ExprPtr& x, const ExprPtr& y);

// Symbolic derivative of given order (1 or 2). Derivatives across abs()
// use sign(u)*u', which is the one-sided derivative away from the kink;
// callers should consult on_abs_kink before trusting values at the kink.
ProfileExpr differentiate(const ProfileExpr& e, int order);

double eval_expr(const ExprPtr& e, double r);

}  // namespace ghflat

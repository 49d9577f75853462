#include "ghflat/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ghflat {

ExprPtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::constant;
  n->value = v;
  return n;
}

ExprPtr make_var() {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::var_r;
  return n;
}

ExprPtr make_unary(ExprOp op, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr make_pow(ExprPtr base, double exponent) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::pow;
  n->a = std::move(base);
  n->value = exponent;
  return n;
}

namespace {

bool is_const(const ExprPtr& e, double v) {
  return e->op == ExprOp::constant && e->value == v;
}

// Light constant folding; keeps derivative trees readable and cheap.
ExprPtr fold(ExprOp op, ExprPtr a, ExprPtr b) {
  if (a && b && a->op == ExprOp::constant && b->op == ExprOp::constant) {
    switch (op) {
      case ExprOp::add: return make_const(a->value + b->value);
      case ExprOp::sub: return make_const(a->value - b->value);
      case ExprOp::mul: return make_const(a->value * b->value);
      case ExprOp::div:
        if (b->value != 0.0) return make_const(a->value / b->value);
        break;
      default: break;
    }
  }
  switch (op) {
    case ExprOp::add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case ExprOp::sub:
      if (is_const(b, 0.0)) return a;
      break;
    case ExprOp::mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case ExprOp::div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    default: break;
  }
  return make_binary(op, std::move(a), std::move(b));
}

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected '") + c + "' (" + what + ")");
  }

  std::size_t pos() const { return pos_; }

  double number() {
    skip_ws();
    std::size_t start = pos_;
    std::size_t i = pos_;
    while (i < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[i])) || s_[i] == '.' || s_[i] == 'e' ||
            s_[i] == 'E' || ((s_[i] == '+' || s_[i] == '-') && i > start && (s_[i - 1] == 'e' || s_[i - 1] == 'E'))))
      ++i;
    if (i == start) throw ParseError(pos_, "expected number");
    double v;
    try {
      std::size_t used;
      v = std::stod(s_.substr(start, i - start), &used);
      i = start + used;
    } catch (const std::exception&) {
      throw ParseError(start, "malformed number");
    }
    pos_ = i;
    return v;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    if (!lex_.eof()) throw ParseError(lex_.pos(), "trailing input");
    return e;
  }

 private:
  Lexer lex_;

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (lex_.accept('+'))
        e = fold(ExprOp::add, e, term());
      else if (lex_.accept('-'))
        e = fold(ExprOp::sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (lex_.accept('*'))
        e = fold(ExprOp::mul, e, unary());
      else if (lex_.accept('/'))
        e = fold(ExprOp::div, e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    if (lex_.accept('-')) {
      ExprPtr e = power();
      if (e->op == ExprOp::constant) return make_const(-e->value);
      return fold(ExprOp::sub, make_const(0.0), std::move(e));
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (lex_.accept('^')) {
      double e = exponent();
      return make_pow(std::move(base), e);
    }
    return base;
  }

  // Constant exponents only; a parenthesized sign is allowed, e.g. ^(-0.25).
  double exponent() {
    if (lex_.accept('(')) {
      double sign = 1.0;
      if (lex_.accept('-')) sign = -1.0;
      std::size_t p = lex_.pos();
      double v = lex_.number();
      if (!lex_.accept(')')) throw ParseError(p, "non-constant exponent");
      return sign * v;
    }
    double sign = 1.0;
    if (lex_.accept('-')) sign = -1.0;
    return sign * lex_.number();
  }

  ExprPtr atom() {
    char c = lex_.peek();
    if (c == '(') {
      lex_.accept('(');
      ExprPtr e = expr();
      lex_.expect(')', "closing parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_const(lex_.number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t p = lex_.pos();
      std::string id = lex_.ident();
      if (id == "r") return make_var();
      ExprOp op;
      if (id == "sin")
        op = ExprOp::sin;
      else if (id == "cos")
        op = ExprOp::cos;
      else if (id == "exp")
        op = ExprOp::exp;
      else if (id == "abs")
        op = ExprOp::abs;
      else if (id == "sqrt")
        op = ExprOp::sqrt;
      else
        throw ParseError(p, "unknown function name '" + id + "'");
      lex_.expect('(', "function argument");
      ExprPtr arg = expr();
      lex_.expect(')', "function argument");
      return make_unary(op, std::move(arg));
    }
    throw ParseError(lex_.pos(), "expected number, 'r', function call or '('");
  }
};

void render_rec(const ExprPtr& e, std::ostream& os, int parent_prec);

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::add:
    case ExprOp::sub: return 1;
    case ExprOp::mul:
    case ExprOp::div: return 2;
    case ExprOp::pow: return 3;
    default: return 4;
  }
}

void render_number(double v, std::ostream& os) {
  if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
    os << static_cast<long long>(v);
    return;
  }
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

void render_rec(const ExprPtr& e, std::ostream& os, int parent_prec) {
  const int prec = precedence(e->op);
  switch (e->op) {
    case ExprOp::constant:
      if (e->value < 0.0) {
        os << '(';
        render_number(e->value, os);
        os << ')';
      } else {
        render_number(e->value, os);
      }
      return;
    case ExprOp::var_r: os << 'r'; return;
    case ExprOp::add:
    case ExprOp::sub:
    case ExprOp::mul:
    case ExprOp::div: {
      const bool parens = prec < parent_prec;
      if (parens) os << '(';
      render_rec(e->a, os, prec);
      os << (e->op == ExprOp::add ? "+" : e->op == ExprOp::sub ? "-" : e->op == ExprOp::mul ? "*" : "/");
      // Right operand of - and / needs strictly higher precedence.
      render_rec(e->b, os, (e->op == ExprOp::sub || e->op == ExprOp::div) ? prec + 1 : prec);
      if (parens) os << ')';
      return;
    }
    case ExprOp::pow: {
      const bool parens = prec <= parent_prec;
      if (parens) os << '(';
      render_rec(e->a, os, prec + 1);
      os << '^';
      if (e->value < 0.0) {
        os << "(-";
        render_number(-e->value, os);
        os << ')';
      } else {
        render_number(e->value, os);
      }
      if (parens) os << ')';
      return;
    }
    case ExprOp::sin:
    case ExprOp::cos:
    case ExprOp::exp:
    case ExprOp::abs:
    case ExprOp::sqrt: {
      const char* name = e->op == ExprOp::sin   ? "sin"
                         : e->op == ExprOp::cos ? "cos"
                         : e->op == ExprOp::exp ? "exp"
                         : e->op == ExprOp::abs ? "abs"
                                                : "sqrt";
      os << name << '(';
      render_rec(e->a, os, 0);
      os << ')';
      return;
    }
  }
}

ExprPtr diff(const ExprPtr& e) {
  switch (e->op) {
    case ExprOp::constant: return make_const(0.0);
    case ExprOp::var_r: return make_const(1.0);
    case ExprOp::add: return fold(ExprOp::add, diff(e->a), diff(e->b));
    case ExprOp::sub: return fold(ExprOp::sub, diff(e->a), diff(e->b));
    case ExprOp::mul:
      return fold(ExprOp::add, fold(ExprOp::mul, diff(e->a), e->b), fold(ExprOp::mul, e->a, diff(e->b)));
    case ExprOp::div:
      // (u/v)' = (u'v - uv')/v^2
      return fold(ExprOp::div,
                  fold(ExprOp::sub, fold(ExprOp::mul, diff(e->a), e->b), fold(ExprOp::mul, e->a, diff(e->b))),
                  make_pow(e->b, 2.0));
    case ExprOp::pow:
      // (u^c)' = c*u^(c-1)*u'
      if (e->value == 0.0) return make_const(0.0);
      if (e->value == 1.0) return diff(e->a);
      return fold(ExprOp::mul, fold(ExprOp::mul, make_const(e->value), make_pow(e->a, e->value - 1.0)), diff(e->a));
    case ExprOp::sin: return fold(ExprOp::mul, make_unary(ExprOp::cos, e->a), diff(e->a));
    case ExprOp::cos:
      return fold(ExprOp::sub, make_const(0.0), fold(ExprOp::mul, make_unary(ExprOp::sin, e->a), diff(e->a)));
    case ExprOp::exp: return fold(ExprOp::mul, make_unary(ExprOp::exp, e->a), diff(e->a));
    case ExprOp::abs:
      // sign(u)*u' = u/abs(u)*u'; one-sided at the kink.
      return fold(ExprOp::mul, fold(ExprOp::div, e->a, make_unary(ExprOp::abs, e->a)), diff(e->a));
    case ExprOp::sqrt:
      return fold(ExprOp::div, diff(e->a), fold(ExprOp::mul, make_const(2.0), make_unary(ExprOp::sqrt, e->a)));
  }
  throw std::logic_error("unreachable expr op");
}

bool find_abs_kink(const ExprPtr& e, double r, double tol) {
  if (!e) return false;
  if (e->op == ExprOp::abs && std::abs(eval_expr(e->a, r)) <= tol) return true;
  return find_abs_kink(e->a, r, tol) || find_abs_kink(e->b, r, tol);
}

}  // namespace

double eval_expr(const ExprPtr& e, double r) {
  switch (e->op) {
    case ExprOp::constant: return e->value;
    case ExprOp::var_r: return r;
    case ExprOp::add: return eval_expr(e->a, r) + eval_expr(e->b, r);
    case ExprOp::sub: return eval_expr(e->a, r) - eval_expr(e->b, r);
    case ExprOp::mul: return eval_expr(e->a, r) * eval_expr(e->b, r);
    case ExprOp::div: return eval_expr(e->a, r) / eval_expr(e->b, r);
    case ExprOp::pow: return std::pow(eval_expr(e->a, r), e->value);
    case ExprOp::sin: return std::sin(eval_expr(e->a, r));
    case ExprOp::cos: return std::cos(eval_expr(e->a, r));
    case ExprOp::exp: return std::exp(eval_expr(e->a, r));
    case ExprOp::abs: return std::abs(eval_expr(e->a, r));
    case ExprOp::sqrt: return std::sqrt(eval_expr(e->a, r));
  }
  throw std::logic_error("unreachable expr op");
}

double ProfileExpr::eval(double r) const { return eval_expr(ast, r); }

bool ProfileExpr::on_abs_kink(double r, double tol) const { return find_abs_kink(ast, r, tol); }

ProfileExpr parse_profile(const std::string& text) {
  Parser p(text);
  return ProfileExpr{p.parse(), text};
}

std::string render(const ExprPtr& e) {
  std::ostringstream os;
  render_rec(e, os, 0);
  return os.str();
}

std::string render(const ProfileExpr& e) { return render(e.ast); }

bool equal_ast(const ExprPtr& x, const ExprPtr& y) {
  if (!x || !y) return !x && !y;
  if (x->op != y->op || x->value != y->value) return false;
  return equal_ast(x->a, y->a) && equal_ast(x->b, y->b);
}

ProfileExpr differentiate(const ProfileExpr& e, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("differentiate: order must be 1 or 2");
  ExprPtr d = diff(e.ast);
  if (order == 2) d = diff(d);
  return ProfileExpr{d, render(d)};
}

}  // namespace ghflat

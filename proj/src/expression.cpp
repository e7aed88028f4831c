#include "qbf/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "qbf/errors.hpp"

namespace qbf {

ExprPtr number(cplx value) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->value = value;
  return e;
}

ExprPtr sym_p() {
  static const ExprPtr e = [] {
    auto x = std::make_shared<Expr>();
    x->kind = Expr::Kind::P;
    return x;
  }();
  return e;
}

ExprPtr sym_s() {
  static const ExprPtr e = [] {
    auto x = std::make_shared<Expr>();
    x->kind = Expr::Kind::S;
    return x;
  }();
  return e;
}

ExprPtr neg(ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->lhs = std::move(x);
  return e;
}

ExprPtr binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Expr::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Expr::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Expr::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(Expr::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return neg(unary());
    return primary();
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      ExprPtr e = expr();
      if (!accept(')')) throw ParseError("unclosed '(' opened at " + std::to_string(open), pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "p") return sym_p();
      if (name == "s") return sym_s();
      if (name == "i") return number({0.0, 1.0});
      throw UnknownSymbolError("unknown symbol '" + std::string(name) + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  ExprPtr literal() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ > from;
    };
    bool any = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (!digits()) throw ParseError("malformed exponent", pos_);
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ParseError("number out of range", start);
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        throw ParseError("malformed imaginary literal", start);
      return number({0.0, v});
    }
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      throw ParseError("missing operator after number", pos_);
    return number({v, 0.0});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_number(cplx v) {
  const double re = v.real() == 0.0 ? 0.0 : v.real();
  const double im = v.imag() == 0.0 ? 0.0 : v.imag();
  if (im == 0.0 && re >= 0.0) return fmt_double(re);
  if (re == 0.0 && im > 0.0) return fmt_double(im) + "i";
  if (im == 0.0) return "(-" + fmt_double(-re) + ")";
  if (re == 0.0) return "(-" + fmt_double(-im) + "i)";
  std::string out = "(";
  out += re < 0.0 ? "-" + fmt_double(-re) : fmt_double(re);
  out += im < 0.0 ? "-" + fmt_double(-im) + "i)" : "+" + fmt_double(im) + "i)";
  return out;
}

char op_char(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
      return '+';
    case Expr::Kind::Sub:
      return '-';
    case Expr::Kind::Mul:
      return '*';
    default:
      return '/';
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string print_expression(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Number:
      return print_number(e->value);
    case Expr::Kind::P:
      return "p";
    case Expr::Kind::S:
      return "s";
    case Expr::Kind::Neg: {
      const std::string inner = print_expression(e->lhs);
      return precedence(*e->lhs) < 3 ? "-(" + inner + ")" : "-" + inner;
    }
    default: {
      const int prec = precedence(*e);
      std::string l = print_expression(e->lhs);
      std::string r = print_expression(e->rhs);
      if (precedence(*e->lhs) < prec) l = "(" + l + ")";
      if (precedence(*e->rhs) <= prec) r = "(" + r + ")";
      return l + op_char(e->kind) + r;
    }
  }
}

bool structurally_equal(const ExprPtr& x, const ExprPtr& y) {
  if (!x || !y) return !x && !y;
  if (x->kind != y->kind) return false;
  if (x->kind == Expr::Kind::Number) return x->value == y->value;
  return structurally_equal(x->lhs, y->lhs) && structurally_equal(x->rhs, y->rhs);
}

int depth(const ExprPtr& e) {
  if (!e) return 0;
  return 1 + std::max(depth(e->lhs), depth(e->rhs));
}

FieldElement to_field(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Number:
      return e->value;
    case Expr::Kind::P:
      return FieldElement::p();
    case Expr::Kind::S:
      return FieldElement::s();
    case Expr::Kind::Neg:
      return -to_field(e->lhs);
    case Expr::Kind::Add:
      return to_field(e->lhs) + to_field(e->rhs);
    case Expr::Kind::Sub:
      return to_field(e->lhs) - to_field(e->rhs);
    case Expr::Kind::Mul:
      return to_field(e->lhs) * to_field(e->rhs);
    case Expr::Kind::Div:
      return to_field(e->lhs) / to_field(e->rhs);
  }
  return {};
}

cplx eval_expression(const ExprPtr& e, double p) {
  switch (e->kind) {
    case Expr::Kind::Number:
      return e->value;
    case Expr::Kind::P:
      return p;
    case Expr::Kind::S:
      return std::sqrt(p / (1.0 - p));
    case Expr::Kind::Neg:
      return -eval_expression(e->lhs, p);
    case Expr::Kind::Add:
      return eval_expression(e->lhs, p) + eval_expression(e->rhs, p);
    case Expr::Kind::Sub:
      return eval_expression(e->lhs, p) - eval_expression(e->rhs, p);
    case Expr::Kind::Mul:
      return eval_expression(e->lhs, p) * eval_expression(e->rhs, p);
    case Expr::Kind::Div:
      return eval_expression(e->lhs, p) / eval_expression(e->rhs, p);
  }
  return {};
}

namespace {

ExprPtr horner(const Poly& x) {
  if (x.is_zero()) return number(0.0);
  ExprPtr acc = number(x.leading());
  for (int i = x.degree() - 1; i >= 0; --i) {
    const bool unit = acc->kind == Expr::Kind::Number && acc->value == cplx{1.0};
    acc = unit ? sym_p() : binary(Expr::Kind::Mul, sym_p(), acc);
    const cplx c = x[static_cast<std::size_t>(i)];
    if (c != cplx{}) acc = binary(Expr::Kind::Add, number(c), acc);
  }
  return acc;
}

ExprPtr rational_expr(const RationalFn& r) {
  ExprPtr num = horner(r.num());
  if (r.den().degree() == 0 && r.den()[0] == cplx{1.0}) return num;
  return binary(Expr::Kind::Div, num, horner(r.den()));
}

}  // namespace

ExprPtr from_field(const FieldElement& x) {
  if (x.b().is_zero()) return rational_expr(x.a());
  ExprPtr bs = binary(Expr::Kind::Mul, rational_expr(x.b()), sym_s());
  if (x.a().is_zero()) return bs;
  return binary(Expr::Kind::Add, rational_expr(x.a()), bs);
}

}  // namespace qbf

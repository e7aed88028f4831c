#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "qbf/errors.hpp"
#include "qbf/expression.hpp"

using namespace qbf;
using K = Expr::Kind;

TEST_CASE("parse examples") {
  const ExprPtr e = parse_expression("2*p-1");
  REQUIRE(e->kind == K::Sub);
  CHECK(e->lhs->kind == K::Mul);
  CHECK(e->lhs->lhs->value == cplx{2.0});
  CHECK(e->lhs->rhs->kind == K::P);
  CHECK(e->rhs->value == cplx{1.0});

  CHECK(std::abs(to_field(parse_expression("s*s")).eval(0.5) - 1.0) < 1e-12);
  CHECK((to_field(parse_expression("p/(1-p)")) - to_field(parse_expression("s*s"))).is_zero());
}

TEST_CASE("precedence and associativity") {
  CHECK(print_expression(parse_expression("1-2-3")) == "1-2-3");
  CHECK(parse_expression("1-2-3")->lhs->kind == K::Sub);
  CHECK(print_expression(parse_expression("1-(2-3)")) == "1-(2-3)");
  CHECK(print_expression(parse_expression("(1*2)/3")) == "1*2/3");
  CHECK(print_expression(parse_expression("1/(2*3)")) == "1/(2*3)");
  const ExprPtr u = parse_expression("-p*s");
  CHECK(u->kind == K::Mul);
  CHECK(u->lhs->kind == K::Neg);
  CHECK(print_expression(parse_expression("-(p*s)")) == "-(p*s)");
  CHECK(print_expression(parse_expression(" ( p + 2i ) * 3.5e-1 ")) == "(p+2i)*0.34999999999999998");
  CHECK(parse_expression("i")->value == cplx{0.0, 1.0});
  CHECK(parse_expression("--p")->lhs->kind == K::Neg);
}

TEST_CASE("parse errors") {
  auto pos = [](const char* text) -> std::size_t {
    try {
      parse_expression(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 999;
  };
  CHECK(pos("2*") == 2);
  CHECK(pos("(p+1") == 4);
  CHECK(pos("p+)") == 2);
  CHECK(pos("") == 0);
  CHECK(pos("2p") == 1);
  CHECK(pos("1.2.3") == 3);
  CHECK_THROWS_AS(parse_expression("x+1"), UnknownSymbolError);
  try {
    parse_expression("p + q");
  } catch (const UnknownSymbolError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("printer round trip on random trees") {
  std::mt19937_64 rng(6);
  std::function<ExprPtr(int)> gen = [&](int d) -> ExprPtr {
    const auto r = rng() % 10;
    if (d == 0 || r < 2) {
      switch (rng() % 5) {
        case 0:
          return sym_p();
        case 1:
          return sym_s();
        case 2:
          return number({0.0, std::ldexp(static_cast<double>(rng() % 1000), -3)});
        default:
          return number(std::ldexp(static_cast<double>(rng() % 100000), -static_cast<int>(rng() % 12)));
      }
    }
    if (r == 2) return neg(gen(d - 1));
    const K kinds[] = {K::Add, K::Sub, K::Mul, K::Div};
    return binary(kinds[rng() % 4], gen(d - 1), gen(d - 1));
  };
  for (int t = 0; t < 1000; ++t) {
    const ExprPtr e = gen(6);
    REQUIRE(depth(e) <= 7);
    const std::string text = print_expression(e);
    CAPTURE(text);
    CHECK(structurally_equal(parse_expression(text), e));
  }
}

TEST_CASE("non-token literals print as equal-valued sums") {
  const ExprPtr e = binary(K::Mul, number({-1.5, 2.0}), sym_p());
  const ExprPtr back = parse_expression(print_expression(e));
  CHECK(std::abs(eval_expression(back, 0.3) - eval_expression(e, 0.3)) < 1e-15);
}

TEST_CASE("from_field round trip") {
  const FieldElement p = FieldElement::p(), s = FieldElement::s();
  for (const FieldElement& x : {FieldElement(2.0) * p - 1.0, (1.0 + s) / (2.0 - p), s * p * cplx{0.0, 3.0}}) {
    const ExprPtr e = from_field(x);
    for (double q : {0.1, 0.55, 0.9})
      CHECK(std::abs(eval_expression(e, q) - x.eval(q)) < 1e-12 * std::max(1.0, std::abs(x.eval(q))));
  }
}

#include "qbf/amplitude_field.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qbf/errors.hpp"

namespace qbf {

FieldOptions& field_options() {
  static FieldOptions options;
  return options;
}

namespace {

// Sums that cancel to within this fraction of their inputs are exact zeros.
constexpr double kCancelTol = 1e-12;

std::vector<cplx> strip(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx{}) c.pop_back();
  return c;
}

Poly add_impl(const Poly& x, const Poly& y, double sign) {
  const auto n = std::max(x.coeffs().size(), y.coeffs().size());
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = sign * y[i];
    cplx c = xi + yi;
    if (std::abs(c) <= kCancelTol * (std::abs(xi) + std::abs(yi))) c = {};
    out[i] = c;
  }
  return Poly(std::move(out));
}

Poly monic(const Poly& x) { return x.is_zero() ? x : x.scaled(1.0 / x.leading()); }

// Zeroes coefficients that are negligible against the largest one.
Poly chop(const Poly& x, double rel) {
  const double cut = rel * x.max_abs_coeff();
  std::vector<cplx> c = x.coeffs();
  for (auto& v : c)
    if (std::abs(v) <= cut) v = {};
  return Poly(std::move(c));
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(strip(std::move(coeffs))) {}

Poly Poly::constant(cplx c) { return Poly(std::vector<cplx>{c}); }

Poly Poly::identity() { return Poly(std::vector<cplx>{0.0, 1.0}); }

cplx Poly::operator()(cplx x) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Poly::abs_eval(double x) const {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Poly Poly::conj() const {
  std::vector<cplx> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cplx v) { return std::conj(v); });
  return Poly(std::move(c));
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> c(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Poly(std::move(c));
}

Poly Poly::scaled(cplx k) const {
  std::vector<cplx> c = coeffs_;
  for (auto& v : c) v *= k;
  return Poly(std::move(c));
}

Poly operator+(const Poly& x, const Poly& y) { return add_impl(x, y, 1.0); }

Poly operator-(const Poly& x, const Poly& y) { return add_impl(x, y, -1.0); }

Poly operator*(const Poly& x, const Poly& y) {
  if (x.is_zero() || y.is_zero()) return {};
  std::vector<cplx> out(x.coeffs_.size() + y.coeffs_.size() - 1);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < y.coeffs_.size(); ++j) out[i + j] += x.coeffs_[i] * y.coeffs_[j];
  return Poly(std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& dividend, const Poly& divisor) {
  if (divisor.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<cplx> rem = dividend.coeffs_;
  const int dd = divisor.degree();
  if (dividend.degree() < dd) return {Poly{}, dividend};
  std::vector<cplx> quot(static_cast<std::size_t>(dividend.degree() - dd + 1));
  const cplx lead = divisor.leading();
  for (int k = dividend.degree() - dd; k >= 0; --k) {
    const cplx q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * divisor.coeffs_[static_cast<std::size_t>(j)];
    rem[static_cast<std::size_t>(k + dd)] = {};
  }
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::trimmed(double tol) const {
  std::vector<cplx> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
  return Poly(std::move(c));
}

Poly poly_gcd(const Poly& x, const Poly& y) {
  if (x.is_zero()) return monic(y);
  if (y.is_zero()) return monic(x);
  const Poly one = Poly::constant(1.0);
  if (x.degree() == 0 || y.degree() == 0) return one;

  Poly a = x.scaled(1.0 / x.max_abs_coeff());
  Poly b = y.scaled(1.0 / y.max_abs_coeff());
  if (a.degree() < b.degree()) std::swap(a, b);
  Poly g;
  for (;;) {
    Poly r = chop(Poly::divmod(a, b).second, 0.0);
    // Remainder negligible against the dividend: b divides a.
    const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    if (r.max_abs_coeff() <= 1e-10 * scale) {
      g = b;
      break;
    }
    r = chop(r, 1e-13);
    if (r.degree() <= 0) return one;
    a = std::move(b);
    b = r.scaled(1.0 / r.max_abs_coeff());
  }
  g = monic(chop(g, 1e-14));
  if (g.degree() <= 0) return one;

  const double tol = field_options().gcd_tol;
  for (const Poly* v : {&x, &y}) {
    const auto [q, r] = Poly::divmod(*v, g);
    if (r.max_abs_coeff() > tol * v->max_abs_coeff()) return one;
  }
  return g;
}

// ---------------------------------------------------------------- RationalFn

RationalFn::RationalFn(cplx c) : num_(Poly::constant(c)), den_(Poly::constant(1.0)) {}

RationalFn::RationalFn(Poly num, Poly den) {
  const FieldOptions& opt = field_options();
  den = chop(den, 1e-14);
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Poly::constant(1.0);
    return;
  }
  if (num.degree() > 0 && den.degree() > 0) {
    const Poly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = Poly::divmod(num, g).first;
      den = Poly::divmod(den, g).first;
    }
  }
  const cplx lead = den.leading();
  if (lead != cplx{1.0}) {
    num = num.scaled(1.0 / lead);
    den = den.scaled(1.0 / lead);
  }
  std::vector<cplx> c = num.coeffs();
  for (auto& v : c)
    if (std::abs(v) < opt.zero_tol) v = {};
  num_ = Poly(std::move(c));
  den_ = num_.is_zero() ? Poly::constant(1.0) : std::move(den);
  if (degree() > opt.degree_cap)
    throw CapacityError("rational function degree " + std::to_string(degree()) + " exceeds cap " +
                        std::to_string(opt.degree_cap));
}

RationalFn RationalFn::p() { return RationalFn(Poly::identity()); }

namespace {

Poly gcd_or_one(const Poly& x, const Poly& y) {
  if (x.degree() <= 0 || y.degree() <= 0) return Poly::constant(1.0);
  return poly_gcd(x, y);
}

Poly quotient(const Poly& x, const Poly& g) { return g.degree() > 0 ? Poly::divmod(x, g).first : x; }

}  // namespace

// (n1/d1)(n2/d2) with n1 against d2 and n2 against d1 cancelled first. Each
// gcd then sees lower-degree inputs, and repeated factors that would be
// squared by the plain product are removed before they form.
RationalFn RationalFn::cross_reduced(const Poly& n1, const Poly& d1, const Poly& n2, const Poly& d2) {
  const Poly g1 = gcd_or_one(n1, d2), g2 = gcd_or_one(n2, d1);
  return RationalFn(quotient(n1, g1) * quotient(n2, g2), quotient(d1, g2) * quotient(d2, g1));
}

cplx RationalFn::eval(double p) const {
  const cplx d = den_(p);
  if (std::abs(d) <= 1e-13 * den_.abs_eval(p)) throw EvaluationError("pole of rational function", p);
  return num_(p) / d;
}

RationalFn RationalFn::conj() const { return RationalFn(Raw{}, num_.conj(), den_.conj()); }

RationalFn RationalFn::operator-() const { return RationalFn(Raw{}, -num_, den_); }

RationalFn operator+(const RationalFn& x, const RationalFn& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  if (x.den_ == y.den_) return RationalFn(x.num_ + y.num_, x.den_);
  // Over the lcm of the denominators, so shared factors are never squared.
  const Poly g = gcd_or_one(x.den_, y.den_);
  const Poly xd = quotient(x.den_, g), yd = quotient(y.den_, g);
  return RationalFn(x.num_ * yd + y.num_ * xd, x.den_ * yd);
}

RationalFn operator-(const RationalFn& x, const RationalFn& y) { return x + (-y); }

RationalFn operator*(const RationalFn& x, const RationalFn& y) {
  if (x.is_zero() || y.is_zero()) return {};
  return RationalFn::cross_reduced(x.num_, x.den_, y.num_, y.den_);
}

RationalFn operator/(const RationalFn& x, const RationalFn& y) {
  if (y.is_zero()) throw DomainError("division by the zero rational function");
  return RationalFn::cross_reduced(x.num_, x.den_, y.den_, y.num_);
}

// ---------------------------------------------------------------- FieldElement

FieldElement::FieldElement(RationalFn a, RationalFn b) : a_(std::move(a)), b_(std::move(b)) {}

FieldElement FieldElement::s() { return {RationalFn{}, RationalFn(1.0)}; }

FieldElement FieldElement::p() { return {RationalFn::p(), RationalFn{}}; }

const RationalFn& FieldElement::s_squared() {
  static const RationalFn value(Poly::identity(), Poly{1.0, -1.0});
  return value;
}

FieldElement operator+(const FieldElement& x, const FieldElement& y) {
  return {x.a_ + y.a_, x.b_ + y.b_};
}

FieldElement operator-(const FieldElement& x, const FieldElement& y) {
  return {x.a_ - y.a_, x.b_ - y.b_};
}

FieldElement operator*(const FieldElement& x, const FieldElement& y) {
  RationalFn a = x.a_ * y.a_;
  if (!x.b_.is_zero() && !y.b_.is_zero()) a = a + x.b_ * y.b_ * FieldElement::s_squared();
  RationalFn b = x.a_ * y.b_ + x.b_ * y.a_;
  return {std::move(a), std::move(b)};
}

FieldElement operator/(const FieldElement& x, const FieldElement& y) { return x * y.inverse(); }

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DomainError("the zero element of M has no inverse");
  if (b_.is_zero()) return {RationalFn(1.0) / a_, RationalFn{}};
  const RationalFn norm = a_ * a_ - b_ * b_ * s_squared();
  if (norm.is_zero()) throw DomainError("element of M has vanishing norm");
  return {a_ / norm, -(b_ / norm)};
}

FieldElement FieldElement::mod_squared() const {
  RationalFn a = a_ * a_.conj();
  if (!b_.is_zero()) a = a + b_ * b_.conj() * s_squared();
  RationalFn b = a_ * b_.conj() + a_.conj() * b_;
  return {std::move(a), std::move(b)};
}

cplx FieldElement::eval(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw EvaluationError("parameter outside [0,1]", p);
  const cplx av = a_.eval(p);
  if (b_.is_zero()) return av;
  if (p >= 1.0) {
    // b(p) s -> 0 as p -> 1 when b has a root there, since s grows like (1-p)^(-1/2).
    const Poly& n = b_.num();
    if (std::abs(n(1.0)) <= 1e-12 * n.abs_eval(1.0) && std::abs(b_.den()(1.0)) > 1e-12 * b_.den().abs_eval(1.0))
      return av;
    throw EvaluationError("s is unbounded at p=1", p);
  }
  return av + b_.eval(p) * std::sqrt(p / (1.0 - p));
}

FieldElement field_add(const FieldElement& x, const FieldElement& y) { return x + y; }
FieldElement field_mul(const FieldElement& x, const FieldElement& y) { return x * y; }
FieldElement field_inv(const FieldElement& x) { return x.inverse(); }
cplx field_eval(const FieldElement& x, double p) { return x.eval(p); }
FieldElement field_mod_squared(const FieldElement& x) { return x.mod_squared(); }

// ---------------------------------------------------------------- printing

namespace {

void print_coeff(std::ostream& os, cplx c) {
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
}

}  // namespace

std::string to_string(const Poly& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (int i = 0; i <= x.degree(); ++i) {
    const cplx c = x[static_cast<std::size_t>(i)];
    if (c == cplx{}) continue;
    if (!first) os << " + ";
    first = false;
    print_coeff(os, c);
    if (i == 1) os << "*p";
    if (i > 1) os << "*p^" << i;
  }
  return os.str();
}

std::string to_string(const RationalFn& x) {
  if (x.den().degree() == 0 && x.den().leading() == cplx{1.0}) return "(" + to_string(x.num()) + ")";
  return "(" + to_string(x.num()) + ")/(" + to_string(x.den()) + ")";
}

std::string to_string(const FieldElement& x) {
  if (x.b().is_zero()) return to_string(x.a());
  if (x.a().is_zero()) return to_string(x.b()) + "*s";
  return to_string(x.a()) + " + " + to_string(x.b()) + "*s";
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << to_string(x); }

}  // namespace qbf

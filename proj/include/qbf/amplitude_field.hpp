#pragma once

// Arithmetic in the field M = C(p)[s] / (s^2 - p/(1-p)).
//
// Every relative amplitude reachable from copies of sqrt(p)|0> + sqrt(1-p)|1>
// lives in M. Elements are stored as a(p) + b(p) s with a, b complex rational
// functions of p in canonical form (monic denominator, common factors removed).
// Coefficients are floating point; cancellation and gcd detection use the
// tolerances in FieldOptions.

#include <algorithm>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qbf {

using cplx = std::complex<double>;

struct FieldOptions {
  int degree_cap = 64;
  // Coefficients below this magnitude (after the denominator is made monic)
  // count as zero.
  double zero_tol = 1e-12;
  // Relative residual accepted when verifying a numerical gcd by division.
  double gcd_tol = 1e-12;
};

// Process-wide options; read on every canonicalization.
FieldOptions& field_options();

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs);
  Poly(std::initializer_list<cplx> coeffs) : Poly(std::vector<cplx>(coeffs)) {}

  static Poly constant(cplx c);
  static Poly identity();  // the polynomial p

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : cplx{}; }
  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

  cplx operator()(cplx x) const;
  // Sum of |c_i| |x|^i, the scale of rounding error when evaluating at x.
  double abs_eval(double x) const;
  double max_abs_coeff() const;

  Poly conj() const;
  Poly derivative() const;
  Poly scaled(cplx c) const;

  friend Poly operator+(const Poly& x, const Poly& y);
  friend Poly operator-(const Poly& x, const Poly& y);
  friend Poly operator*(const Poly& x, const Poly& y);
  Poly operator-() const { return scaled(-1.0); }

  // Quotient and remainder of Euclidean division; divisor must be nonzero.
  static std::pair<Poly, Poly> divmod(const Poly& dividend, const Poly& divisor);

  // Drops coefficients with |c| <= tol from the top.
  Poly trimmed(double tol) const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<cplx> coeffs_;  // ascending degree, no trailing zero
};

// Greatest common divisor, monic. Candidates that do not divide both inputs
// within FieldOptions::gcd_tol are rejected and 1 is returned.
Poly poly_gcd(const Poly& x, const Poly& y);

class RationalFn {
 public:
  RationalFn() : num_(), den_(Poly::constant(1.0)) {}
  RationalFn(cplx c);  // NOLINT: constants convert implicitly
  RationalFn(double c) : RationalFn(cplx{c}) {}
  RationalFn(Poly num, Poly den);
  explicit RationalFn(Poly num) : RationalFn(std::move(num), Poly::constant(1.0)) {}

  static RationalFn p();

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  // Throws EvaluationError at a pole.
  cplx eval(double p) const;
  RationalFn conj() const;
  RationalFn canonical() const { return RationalFn(num_, den_); }

  friend RationalFn operator+(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator-(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator*(const RationalFn& x, const RationalFn& y);
  friend RationalFn operator/(const RationalFn& x, const RationalFn& y);
  RationalFn operator-() const;

 private:
  struct Raw {};
  RationalFn(Raw, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
  static RationalFn cross_reduced(const Poly& n1, const Poly& d1, const Poly& n2, const Poly& d2);
  Poly num_;
  Poly den_;
};

// a + b s with s = sqrt(p/(1-p)) taken on the positive real branch.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(cplx c) : a_(c) {}  // NOLINT
  FieldElement(double c) : a_(c) {}  // NOLINT
  FieldElement(RationalFn a, RationalFn b = {});

  static FieldElement s();
  static FieldElement p();
  // p / (1 - p), the value of s^2.
  static const RationalFn& s_squared();

  const RationalFn& a() const { return a_; }
  const RationalFn& b() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  int degree() const { return std::max(a_.degree(), b_.degree()); }

  // Throws DomainError for the zero element.
  FieldElement inverse() const;
  FieldElement conj() const { return {a_.conj(), b_.conj()}; }
  // |x|^2 as an element whose value is real and nonnegative on (0,1).
  FieldElement mod_squared() const;
  // Requires 0 <= p <= 1; at p = 1 the s-part must vanish there. Throws
  // EvaluationError at poles.
  cplx eval(double p) const;

  friend FieldElement operator+(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator*(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator/(const FieldElement& x, const FieldElement& y);
  FieldElement operator-() const { return {-a_, -b_}; }
  FieldElement& operator+=(const FieldElement& y) { return *this = *this + y; }
  FieldElement& operator*=(const FieldElement& y) { return *this = *this * y; }

 private:
  RationalFn a_;
  RationalFn b_;
};

FieldElement field_add(const FieldElement& x, const FieldElement& y);
FieldElement field_mul(const FieldElement& x, const FieldElement& y);
FieldElement field_inv(const FieldElement& x);
cplx field_eval(const FieldElement& x, double p);
FieldElement field_mod_squared(const FieldElement& x);

std::string to_string(const Poly& x);
std::string to_string(const RationalFn& x);
std::string to_string(const FieldElement& x);
std::ostream& operator<<(std::ostream& os, const FieldElement& x);

}  // namespace qbf

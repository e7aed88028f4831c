#include "qbf/coin_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "qbf/constructor.hpp"
#include "qbf/errors.hpp"

namespace qbf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

RationalFn one_minus_p() { return RationalFn(Poly{1.0, -1.0}); }

bool evaluable_at(const FieldElement& x, double p) {
  try {
    x.eval(p);
    return true;
  } catch (const EvaluationError&) {
    return false;
  }
}

double real_or_nan(const FieldElement& x, double p) {
  try {
    return x.eval(p).real();
  } catch (const EvaluationError&) {
    return kNaN;
  }
}

double max_abs_on_grid(const FieldElement& x, Domain dom, int points = 101) {
  double m = 0.0;
  for (int i = 0; i < points; ++i) {
    const double v = real_or_nan(x, dom.lo + (dom.hi - dom.lo) * i / (points - 1));
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  }
  return m;
}

Poly lcm(const Poly& x, const Poly& y) {
  if (x.degree() <= 0) return y;
  if (y.degree() <= 0) return x;
  const Poly g = poly_gcd(x, y);
  return g.degree() > 0 ? Poly::divmod(x, g).first * y : x * y;
}

void finalize(CoinFunction& f) {
  f.denominator_scale = max_abs_on_grid(f.denominator, f.domain);
  if (!(f.denominator_scale > 0.0)) throw DomainError("coin denominator vanishes on the whole domain");
}

// ---------------------------------------------------------------- deflation

struct Deflated {
  RationalFn value;
  bool exact = false;
};

// r / (p - z). When the numerator has a root at z it is removed by synthetic
// division; otherwise the quotient keeps a pole at z.
Deflated deflate(const RationalFn& r, double z) {
  if (r.is_zero()) return {r, true};
  const Poly& n = r.num();
  const auto& c = n.coeffs();
  const int d = n.degree();
  if (d >= 1) {
    std::vector<cplx> q(static_cast<std::size_t>(d));
    cplx acc = c[static_cast<std::size_t>(d)];
    for (int k = d - 1; k >= 0; --k) {
      q[static_cast<std::size_t>(k)] = acc;
      acc = c[static_cast<std::size_t>(k)] + z * acc;
    }
    if (std::abs(acc) <= 1e-7 * n.abs_eval(z)) return {RationalFn(Poly(std::move(q)), r.den()), true};
  }
  return {r / RationalFn(Poly{-z, 1.0}), false};
}

struct Division {
  FieldElement value;
  bool exact = false;
};

enum class Divisor { P, S, OneMinusP, InverseS, Linear, Conjugate };

// x / g for the divisor g that vanishes simply at z:
//   P          g = p                          (z = 0)
//   S          g = s                          (z = 0)
//   OneMinusP  g = 1 - p                      (z = 1)
//   InverseS   g = 1/s                        (z = 1)
//   Linear     g = p - z                      (rational elements)
//   Conjugate  g = s - s(z), through x (s + s(z)) / (s^2 - s(z)^2)
Division divide(const FieldElement& x, double z, Divisor kind) {
  switch (kind) {
    case Divisor::P: {
      const Deflated a = deflate(x.a(), 0.0), b = deflate(x.b(), 0.0);
      return {FieldElement(a.value, b.value), a.exact && b.exact};
    }
    case Divisor::S: {
      // (a + b s) / s = b + a (1-p)/p s
      const Deflated a = deflate(x.a() * one_minus_p(), 0.0);
      return {FieldElement(x.b(), a.value), a.exact};
    }
    case Divisor::OneMinusP: {
      const Deflated a = deflate(x.a(), 1.0), b = deflate(x.b(), 1.0);
      return {FieldElement(-a.value, -b.value), a.exact && b.exact};
    }
    case Divisor::InverseS: {
      // (a + b s) s = b p/(1-p) + a s
      const Deflated b = deflate(x.b() * RationalFn::p(), 1.0);
      return {FieldElement(-b.value, x.a()), b.exact};
    }
    case Divisor::Linear: {
      const Deflated a = deflate(x.a(), z), b = deflate(x.b(), z);
      return {FieldElement(a.value, b.value), a.exact && b.exact};
    }
    case Divisor::Conjugate: {
      const FieldElement y = x * (FieldElement::s() + std::sqrt(z / (1.0 - z)));
      // s^2 - s(z)^2 = (p - z) / ((1-p)(1-z))
      const RationalFn k = one_minus_p() * RationalFn(1.0 - z);
      const Deflated a = deflate(y.a() * k, z), b = deflate(y.b() * k, z);
      return {FieldElement(a.value, b.value), a.exact && b.exact};
    }
  }
  return {x, false};
}

// Whether x(z) is negligible against x a short distance away.
bool vanishes_at(const FieldElement& x, double z, Domain dom) {
  const double v = real_or_nan(x, z);
  if (!std::isfinite(v)) return false;
  double m = 0.0;
  for (double d : {-1e-3, 1e-3}) {
    const double q = z + d;
    if (q < dom.lo || q > dom.hi) continue;
    const double w = real_or_nan(x, q);
    if (std::isfinite(w)) m = std::max(m, std::abs(w));
  }
  return m > 0.0 && std::abs(v) <= 1e-8 * m;
}

double sharpen_sign_change(const FieldElement& x, double z, Domain dom) {
  const double w = 1e-5;
  double a = z - w, b = z + w;
  if (a < dom.lo || b > dom.hi) return z;
  const double fa = real_or_nan(x, a), fb = real_or_nan(x, b);
  if (!(fa * fb < 0.0)) return z;
  for (int i = 0; i < 100 && b - a > 1e-16; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = real_or_nan(x, m);
    if (!std::isfinite(fm) || fm == 0.0) return m;
    ((fm < 0.0) == (fa < 0.0) ? a : b) = m;
  }
  return 0.5 * (a + b);
}

bool all_rational(const CoinFunction& f) {
  return f.numerator.b().is_zero() && f.denominator.b().is_zero() && f.complement.b().is_zero();
}

Divisor choose_divisor(const CoinFunction& f, double z) {
  if (z <= 0.0) return divide(f.denominator, 0.0, Divisor::P).exact ? Divisor::P : Divisor::S;
  if (z >= 1.0) {
    const Division d = divide(f.denominator, 1.0, Divisor::OneMinusP);
    return d.exact && evaluable_at(d.value, 1.0) ? Divisor::OneMinusP : Divisor::InverseS;
  }
  return all_rational(f) ? Divisor::Linear : Divisor::Conjugate;
}

// ---------------------------------------------------------------- zero search

double golden_min(const ScalarFn& g, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  const double m = 0.5 * (a + b);
  // The interval may have collapsed onto an endpoint of the bracket.
  const double ga = g(a), gb = g(b), gm = g(m);
  if (ga <= gm && ga <= gb) return a;
  if (gb <= gm) return b;
  return m;
}

// Bisects on the sign of a central difference, which sharpens the location of
// a minimum well below the resolution golden-section search gets from values.
double slope_bisect(const ScalarFn& g, double z, Domain dom) {
  const double w = 1e-6, h = 1e-7;
  double a = z - w, b = z + w;
  if (a - h < dom.lo || b + h > dom.hi) return z;
  auto slope = [&](double x) { return g(x + h) - g(x - h); };
  if (!(slope(a) < 0.0 && slope(b) > 0.0)) return z;
  for (int i = 0; i < 80 && b - a > 1e-14; ++i) {
    const double m = 0.5 * (a + b);
    (slope(m) < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

double safe(const ScalarFn& g, double p) {
  try {
    return g(p);
  } catch (const EvaluationError&) {
    return kNaN;
  }
}

}  // namespace

ZeroSearch locate_zeros(const ScalarFn& g, Domain dom, double tol) {
  constexpr int n = 10000;
  std::vector<double> xs(n + 1), gs(n + 1);
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    xs[i] = i == n ? dom.hi : dom.lo + (dom.hi - dom.lo) * i / n;
    gs[i] = safe(g, xs[i]);
    if (std::isfinite(gs[i])) scale = std::max(scale, std::abs(gs[i]));
  }
  ZeroSearch out;
  if (scale == 0.0) {
    out.infinite = true;
    return out;
  }
  int small = 0;
  for (double v : gs) small += std::isfinite(v) && v <= tol * scale;
  if (small > n / 100) {
    out.infinite = true;
    return out;
  }
  const ScalarFn robust = [&](double p) {
    const double v = safe(g, p);
    return std::isfinite(v) ? v : kInf;
  };
  for (int i = 0; i <= n; ++i) {
    if (!std::isfinite(gs[i]) || gs[i] > 1e-3 * scale) continue;
    const double left = i > 0 && std::isfinite(gs[i - 1]) ? gs[i - 1] : kInf;
    const double right = i < n && std::isfinite(gs[i + 1]) ? gs[i + 1] : kInf;
    // Only the first point of a plateau starts a search.
    if (!(gs[i] < left && gs[i] <= right)) continue;
    double z = golden_min(robust, xs[std::max(i - 1, 0)], xs[std::min(i + 1, n)]);
    z = slope_bisect(robust, z, dom);
    // A zero of order k at an endpoint is only located to about eps^(1/k).
    if (z - dom.lo < 1e-9 || (z - dom.lo < 1e-5 && robust(dom.lo) <= tol * scale)) z = dom.lo;
    if (dom.hi - z < 1e-9 || (dom.hi - z < 1e-5 && robust(dom.hi) <= tol * scale)) z = dom.hi;
    if (robust(z) > tol * scale) continue;
    if (!out.zeros.empty() && std::abs(out.zeros.back() - z) < 1e-7) continue;
    out.zeros.push_back(z);
  }
  return out;
}

OrderFit estimate_order(const ScalarFn& g, double z, Domain dom) {
  OrderFit fit;
  constexpr int m = 8;
  constexpr double d0 = 1e-2;
  double dir = 0.0;
  if (z + d0 <= dom.hi)
    dir = 1.0;
  else if (z - d0 >= dom.lo)
    dir = -1.0;
  else
    return fit;
  double xs[m], ys[m];
  for (int j = 0; j < m; ++j) {
    const double d = d0 * std::pow(1e-3, j / double(m - 1));
    const double v = safe(g, z + dir * d);
    if (!(v > 0.0) || !std::isfinite(v)) return fit;
    xs[j] = std::log(d);
    ys[j] = std::log(v);
  }
  double mx = 0, my = 0;
  for (int j = 0; j < m; ++j) mx += xs[j] / m, my += ys[j] / m;
  double sxy = 0, sxx = 0;
  for (int j = 0; j < m; ++j) sxy += (xs[j] - mx) * (ys[j] - my), sxx += (xs[j] - mx) * (xs[j] - mx);
  fit.order = sxy / sxx;
  const double intercept = my - fit.order * mx;
  fit.c = std::exp(intercept);
  fit.delta = d0;
  double worst = 0.0;
  for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(ys[j] - intercept - fit.order * xs[j]));
  fit.converged = worst <= 0.1;
  return fit;
}

// ---------------------------------------------------------------- construction

CoinFunction coin_from_state(const SymbolicState& state, const std::vector<std::size_t>& basis_all,
                             const std::vector<std::size_t>& basis_head) {
  if (basis_all.empty() || basis_head.empty()) throw DomainError("coin basis sets must be nonempty");
  for (std::size_t i : basis_all)
    if (i >= state.size()) throw DomainError("basis index " + std::to_string(i) + " outside the register");
  for (std::size_t j : basis_head)
    if (std::find(basis_all.begin(), basis_all.end(), j) == basis_all.end())
      throw DomainError("head outcome " + std::to_string(j) + " is not an accepted outcome");

  Poly l = Poly::constant(1.0);
  for (std::size_t i : basis_all)
    for (const RationalFn* r : {&state[i].a(), &state[i].b()})
      if (!r->is_zero()) l = lcm(l, r->den());
  const RationalFn scale{l};

  CoinFunction f;
  for (std::size_t i : basis_all) {
    const FieldElement w = (state[i] * FieldElement(scale)).mod_squared();
    f.denominator = f.denominator + w;
    if (std::find(basis_head.begin(), basis_head.end(), i) != basis_head.end())
      f.numerator = f.numerator + w;
    else
      f.complement = f.complement + w;
  }
  // |b s|^2 carries p/(1-p); a common factor (1-p) makes p = 1 evaluable.
  for (int k = 0; k < 4 && !evaluable_at(f.denominator, 1.0); ++k) {
    const FieldElement q(one_minus_p());
    f.numerator = f.numerator * q;
    f.denominator = f.denominator * q;
    f.complement = f.complement * q;
  }
  f.basis_all = basis_all;
  f.basis_head = basis_head;
  finalize(f);
  return f;
}

CoinFunction coin_from_ratio(const FieldElement& numerator, const FieldElement& denominator, Domain domain) {
  if (!(domain.lo >= 0.0 && domain.hi <= 1.0 && domain.lo < domain.hi))
    throw DomainError("coin domain must be a nondegenerate subinterval of [0,1]");
  CoinFunction f;
  f.numerator = numerator;
  f.denominator = denominator;
  f.complement = denominator - numerator;
  f.domain = domain;
  finalize(f);
  return f;
}

double eval_coin(const CoinFunction& f, double p) {
  if (!f.domain.contains(p)) throw DomainError("p outside the coin's domain");
  const double d = f.denominator.eval(p).real();
  if (!(d > 1e-14 * f.denominator_scale)) throw EvaluationError("coin denominator vanishes", p);
  return std::clamp(f.numerator.eval(p).real() / d, 0.0, 1.0);
}

double eval_complement(const CoinFunction& f, double p) {
  if (!f.domain.contains(p)) throw DomainError("p outside the coin's domain");
  const double d = f.denominator.eval(p).real();
  if (!(d > 1e-14 * f.denominator_scale)) throw EvaluationError("coin denominator vanishes", p);
  return std::clamp(f.complement.eval(p).real() / d, 0.0, 1.0);
}

CoinFunction fc_coin() { return coin_from_state(run_symbolic(example_coin_plan()), {0, 1}, {0}); }

CoinFunction g_coin_from_psi_g() { return coin_from_state(run_symbolic(g_state_plan()), {0, 1}, {0}); }

CoinFunction g_coin_from_psi2() {
  const SymbolicState q = make_symbolic_quoin();
  SymbolicState st = apply_operator(tensor(q, q), gates::CNOT(), {0, 1});
  st = apply_operator(st, gates::H(), {0});
  return coin_from_state(st, {1, 2}, {1});
}

CoinFunction fa_coin(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("f_a needs a in [0,1]");
  const FieldElement p = FieldElement::p();
  // sqrt(p(1-p)) = (1-p) s
  const FieldElement w = (1.0 - p) * FieldElement::s();
  return coin_from_ratio(a * (1.0 - p) + (1.0 - a) * p - 2.0 * std::sqrt(a * (1.0 - a)) * w, FieldElement(1.0));
}

CoinFunction f_wedge_coin() { return coin_from_ratio(2.0 * FieldElement::p(), FieldElement(1.0), {0.0, 0.5}); }

CoinFunction constant_coin(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("constant coin needs c in [0,1]");
  return coin_from_ratio(FieldElement(c), FieldElement(1.0));
}

CoinFunction amplitude_coin(const FieldElement& h) {
  return coin_from_state(SymbolicState(1, {h, FieldElement(1.0)}), {0, 1}, {0});
}

double success_prob_surface(SurfaceKind kind, Homogeneous h1, Homogeneous h2) {
  const double n1 = std::norm(h1.k0) + std::norm(h1.k1), n2 = std::norm(h2.k0) + std::norm(h2.k1);
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateInputError("homogeneous amplitude (0:0)");
  if (kind == SurfaceKind::Multiply)
    return (std::norm(h1.k0 * h2.k0) + std::norm(h1.k1 * h2.k1)) / (8.0 * n1 * n2);
  return (std::norm(h1.k0 * h2.k1 + h2.k0 * h1.k1) + std::norm(h1.k1 * h2.k1)) / (16.0 * n1 * n2);
}

double success_prob_surface(SurfaceKind kind, cplx h1, cplx h2) {
  return success_prob_surface(kind, Homogeneous{h1, 1.0}, Homogeneous{h2, 1.0});
}

double f_a_eval(double a, double p) {
  if (!(a >= 0.0 && a <= 1.0 && p >= 0.0 && p <= 1.0)) throw DomainError("f_a needs a, p in [0,1]");
  const double v = std::sqrt(a * (1.0 - p)) - std::sqrt(p * (1.0 - a));
  return v * v;
}

// ---------------------------------------------------------------- extension

CoinFunction extend_common_zeros(const CoinFunction& f) {
  if (f.denominator.is_zero()) throw DomainError("coin denominator is identically zero");
  CoinFunction out = f;
  const double scale = max_abs_on_grid(f.denominator, f.domain);
  if (!(scale > 0.0)) throw DomainError("coin denominator vanishes on the whole domain");
  const ZeroSearch zs = locate_zeros([&](double p) { return real_or_nan(f.denominator, p) / scale; }, f.domain);
  if (zs.infinite) throw DomainError("coin denominator vanishes on an interval");
  for (double z : zs.zeros) {
    bool changed = false;
    for (int k = 0; k < 32; ++k) {
      // A zero of even order is only located to about sqrt(eps); once one
      // factor is removed the remainder changes sign there and bisects sharply.
      if (k > 0) z = sharpen_sign_change(out.denominator, z, out.domain);
      if (!vanishes_at(out.denominator, z, out.domain)) break;
      const Divisor kind = choose_divisor(out, z);
      const Division d = divide(out.denominator, z, kind);
      if (!d.exact) break;
      out.denominator = d.value;
      out.numerator = divide(out.numerator, z, kind).value;
      out.complement = divide(out.complement, z, kind).value;
      changed = true;
    }
    if (changed) out.extended_at.push_back(z);
  }
  finalize(out);
  return out;
}

// ---------------------------------------------------------------- verdicts

namespace {

bool strictly_inside_unit(double z) { return z > 1e-9 && z < 1.0 - 1e-9; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Fills a witness for a zero of g; returns an explanation when the order is
// not acceptable.
std::optional<std::string> witness(const ScalarFn& g, double z, Domain dom, ZeroWitness& w) {
  w.location = z;
  const OrderFit fit = estimate_order(g, z, dom);
  w.measured_order = fit.order;
  w.c = fit.c;
  w.delta = fit.delta;
  if (!fit.converged) return "order estimate did not converge at p=" + fmt(z);
  // Analytic nonnegative functions vanish to even order inside (0,1); at the
  // ends of [0,1] half-integer orders appear through sqrt(p) and sqrt(1-p).
  const bool interior = strictly_inside_unit(z) && z > dom.lo && z < dom.hi;
  const double step = interior ? 2.0 : 0.5;
  const double nearest = std::round(fit.order / step) * step;
  if (std::abs(fit.order - nearest) > 0.05 || nearest <= 0.0)
    return "order " + fmt(fit.order) + " at p=" + fmt(z) + " is not " +
           (interior ? "an even integer" : "a positive multiple of 1/2");
  w.order = 2 * static_cast<int>(std::ceil(nearest / 2.0));
  return std::nullopt;
}

}  // namespace

SpbVerdict spb_check(const CoinFunction& f) {
  SpbVerdict v;
  auto fail = [&](Verdict kind, std::string why) {
    v.verdict = kind;
    v.passes = false;
    v.failure_reason = std::move(why);
    return v;
  };
  CoinFunction e;
  try {
    e = extend_common_zeros(f);
  } catch (const DomainError& err) {
    return fail(Verdict::Fail, err.what());
  }
  const double scale = e.denominator_scale;
  const ZeroSearch dz = locate_zeros([&](double p) { return real_or_nan(e.denominator, p) / scale; }, e.domain);
  if (!dz.zeros.empty()) return fail(Verdict::Fail, "not continuous at p=" + fmt(dz.zeros.front()));

  const ScalarFn q = [&](double p) { return eval_coin(e, p); };
  const ScalarFn r = [&](double p) { return eval_complement(e, p); };
  const ZeroSearch zs = locate_zeros(q, e.domain), ws = locate_zeros(r, e.domain);
  if (zs.infinite) return fail(Verdict::Fail, "the zero set is not finite");
  if (ws.infinite) return fail(Verdict::Fail, "the set where f = 1 is not finite");

  std::optional<std::string> problem;
  for (double z : zs.zeros) {
    ZeroWitness w;
    if (auto why = witness(q, z, e.domain, w); why && !problem) problem = why;
    v.zeros.push_back(w);
  }
  for (double z : ws.zeros) {
    ZeroWitness w;
    if (auto why = witness(r, z, e.domain, w); why && !problem) problem = why;
    v.ones.push_back(w);
  }
  if (problem) return fail(Verdict::Inconclusive, *problem);
  v.verdict = Verdict::Pass;
  v.passes = true;
  return v;
}

CbfVerdict cbf_check(const CoinFunction& f) {
  CbfVerdict v;
  CoinFunction e;
  try {
    e = extend_common_zeros(f);
  } catch (const DomainError& err) {
    v.reason = err.what();
    return v;
  }
  const double scale = e.denominator_scale;
  const ZeroSearch dz = locate_zeros([&](double p) { return real_or_nan(e.denominator, p) / scale; }, e.domain);
  if (!dz.zeros.empty()) {
    v.reason = "not continuous at p=" + fmt(dz.zeros.front());
    return v;
  }
  const ScalarFn q = [&](double p) { return eval_coin(e, p); };
  const ScalarFn r = [&](double p) { return eval_complement(e, p); };
  const ZeroSearch zs = locate_zeros(q, e.domain), ws = locate_zeros(r, e.domain);
  if (zs.infinite || ws.infinite) {
    // Constant 0 or 1 needs no coin at all.
    const bool constant = (zs.infinite && max_abs_on_grid(e.numerator, e.domain) <= 1e-12 * scale) ||
                          (ws.infinite && max_abs_on_grid(e.complement, e.domain) <= 1e-12 * scale);
    v.passes = constant;
    v.reason = constant ? "constant coin" : "reaches 0 or 1 on an interval";
    return v;
  }
  v.zeros = zs.zeros;
  v.ones = ws.zeros;
  for (double z : v.zeros)
    if (strictly_inside_unit(z)) {
      v.reason = "reaches 0 at p=" + fmt(z);
      return v;
    }
  for (double w : v.ones)
    if (strictly_inside_unit(w)) {
      v.reason = "reaches 1 at p=" + fmt(w);
      return v;
    }
  for (double z : v.zeros)
    if (!estimate_order(q, z, e.domain).converged) {
      v.reason = "approach to 0 at p=" + fmt(z) + " is not polynomial";
      return v;
    }
  for (double w : v.ones)
    if (!estimate_order(r, w, e.domain).converged) {
      v.reason = "approach to 1 at p=" + fmt(w) + " is not polynomial";
      return v;
    }
  v.passes = true;
  v.reason = v.zeros.empty() && v.ones.empty() ? "bounded away from 0 and 1"
                                                : "touches 0 or 1 only at p = 0 or 1, polynomially";
  return v;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

nlohmann::ordered_json witness_json(const ZeroWitness& w) {
  return {{"location", w.location}, {"measured_order", w.measured_order}, {"order", w.order},
          {"c", w.c},               {"delta", w.delta}};
}

}  // namespace

std::string to_json(const SpbVerdict& v) {
  nlohmann::ordered_json j;
  j["test"] = "spb";
  j["verdict"] = to_string(v.verdict);
  j["passes"] = v.passes;
  j["zeros"] = nlohmann::ordered_json::array();
  for (const auto& w : v.zeros) j["zeros"].push_back(witness_json(w));
  j["ones"] = nlohmann::ordered_json::array();
  for (const auto& w : v.ones) j["ones"].push_back(witness_json(w));
  j["failure_reason"] = v.failure_reason ? nlohmann::ordered_json(*v.failure_reason) : nlohmann::ordered_json();
  return j.dump(2);
}

std::string to_json(const CbfVerdict& v) {
  nlohmann::ordered_json j;
  j["test"] = "cbf";
  j["passes"] = v.passes;
  j["zeros"] = v.zeros;
  j["ones"] = v.ones;
  j["reason"] = v.reason;
  return j.dump(2);
}

}  // namespace qbf

#pragma once

// Classical coins obtained by measuring Bernoulli states with post-selection,
// and numerical feasibility checks for the classical and quantum factories.
//
// A coin is q(p) = N(p) / D(p) where N sums |h_j|^2 over the head outcomes
// and D sums |h_i|^2 over all accepted outcomes. The complement D - N is kept
// separately so that 1 - q can be evaluated without cancellation near q = 1.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qbf/amplitude_field.hpp"
#include "qbf/state_engine.hpp"

namespace qbf {

struct Domain {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double p) const { return p >= lo && p <= hi; }
};

struct CoinFunction {
  FieldElement numerator;
  FieldElement denominator;
  FieldElement complement;  // denominator - numerator
  std::vector<std::size_t> basis_all;
  std::vector<std::size_t> basis_head;
  Domain domain;
  // Points where a shared zero of numerator and denominator was divided out.
  std::vector<double> extended_at;
  double denominator_scale = 1.0;  // max |D| over the domain, for zero tests
};

// Coin from measuring every qubit of `state` and keeping outcomes in
// basis_all; heads are the outcomes in basis_head. Amplitude denominators are
// cleared first so that N and D have no poles on [0,1).
CoinFunction coin_from_state(const SymbolicState& state, const std::vector<std::size_t>& basis_all,
                             const std::vector<std::size_t>& basis_head);
// Coin with the given real-valued numerator and denominator.
CoinFunction coin_from_ratio(const FieldElement& numerator, const FieldElement& denominator, Domain domain = {});

// Throws DomainError outside the domain and EvaluationError where the
// denominator vanishes.
double eval_coin(const CoinFunction& f, double p);
// 1 - q(p) from the stored complement.
double eval_complement(const CoinFunction& f, double p);

// Named coins used throughout the tests and the CLI.
CoinFunction fc_coin();                  // (2p-1)^2 / (1 + (2p-1)^2) from the example coin state
CoinFunction g_coin_from_psi_g();        // 4p(1-p) by measuring |psi_g>
CoinFunction g_coin_from_psi2();         // 4p(1-p) from the two-qubit state, outcomes {01, 10}
CoinFunction fa_coin(double a);          // |sqrt(a(1-p)) - sqrt(p(1-a))|^2
CoinFunction f_wedge_coin();             // 2p on [0, 1/2]
CoinFunction constant_coin(double c);    // c in [0,1]
// Coin from measuring h|0> + |1>.
CoinFunction amplitude_coin(const FieldElement& h);

enum class SurfaceKind { Multiply, Add };

// Pr_m or Pr_a for inputs |h1>, |h2>; the homogeneous form admits the
// infinity marker.
double success_prob_surface(SurfaceKind kind, Homogeneous h1, Homogeneous h2);
double success_prob_surface(SurfaceKind kind, cplx h1, cplx h2);

// |sqrt(a(1-p)) - sqrt(p(1-a))|^2; zero exactly at p = a.
double f_a_eval(double a, double p);

// ---------------------------------------------------------------- zeros and orders

using ScalarFn = std::function<double(double)>;

struct ZeroSearch {
  std::vector<double> zeros;
  bool infinite = false;  // a positive fraction of the grid is at zero
};

// Zeros of a nonnegative function on [lo, hi]: local minima of a 10^4-point
// grid refined by golden-section search and a derivative-sign bisection,
// accepted when the refined value is at most tol * (grid maximum).
ZeroSearch locate_zeros(const ScalarFn& g, Domain domain, double tol = 1e-10);

struct OrderFit {
  double order = 0.0;  // fitted slope of log g against log |p - z|
  double c = 0.0;      // exp(intercept)
  double delta = 0.0;  // largest distance used in the fit
  bool converged = false;
};

// Least-squares slope over 8 geometric distances from 1e-2 to 1e-5, taken on
// whichever side of z stays inside the domain.
OrderFit estimate_order(const ScalarFn& g, double z, Domain domain);

// ---------------------------------------------------------------- verdicts

struct ZeroWitness {
  double location = 0.0;
  double measured_order = 0.0;
  int order = 0;  // even integer 2k bounding the decay, from the fit
  double c = 0.0;
  double delta = 0.0;
};

enum class Verdict { Pass, Fail, Inconclusive };

struct SpbVerdict {
  Verdict verdict = Verdict::Pass;
  bool passes = false;
  std::vector<ZeroWitness> zeros;  // Z
  std::vector<ZeroWitness> ones;   // W
  std::optional<std::string> failure_reason;
};

struct CbfVerdict {
  bool passes = false;
  std::vector<double> zeros;
  std::vector<double> ones;
  std::string reason;
};

// Keane-O'Brien test. Values 0 or 1 strictly inside (0,1) fail; at p = 0 or
// p = 1 they are allowed when the approach is polynomial.
CbfVerdict cbf_check(const CoinFunction& f);
// Simple and poly-bounded test on the domain.
SpbVerdict spb_check(const CoinFunction& f);

// Divides out zeros shared by numerator and denominator so the coin is
// defined and continuous at them. Throws DomainError when the denominator is
// identically zero.
CoinFunction extend_common_zeros(const CoinFunction& f);

std::string to_json(const SpbVerdict& v);
std::string to_json(const CbfVerdict& v);
const char* to_string(Verdict v);

}  // namespace qbf

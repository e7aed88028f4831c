#pragma once

// Classical Bernoulli-factory protocols driven by coin or quoin sources, and
// the consumption accounting behind the quantum-versus-classical comparison.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qbf/constructor.hpp"
#include "qbf/ledger.hpp"
#include "qbf/rng.hpp"

namespace qbf {

// A single-owner source of coin tosses; true is head. Every draw increments
// tosses_consumed exactly once.
class CoinStream {
 public:
  enum class Kind { Analytic, Quantum, Recorded };
  enum class QuoinBasis { Z, DA };

  // Head with probability `prob`, drawn from a generator seeded with `seed`.
  static CoinStream analytic(double prob, std::uint64_t seed);
  // Measures a fresh quoin per toss: in the Z basis head is |0> (probability
  // p); in the D/A basis head is |D> (probability (1 + 2 sqrt(p(1-p))) / 2).
  static CoinStream quoin(double p, QuoinBasis basis, std::uint64_t seed);
  // Replays a fixed sequence; throws DataError once it is exhausted.
  static CoinStream recorded(std::vector<bool> tosses);

  bool toss();
  Kind kind() const { return kind_; }
  std::uint64_t tosses_consumed() const { return consumed_; }
  std::uint64_t seed() const { return seed_; }

 private:
  CoinStream(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed), rng_(seed) {}

  Kind kind_;
  std::uint64_t seed_ = 0;
  Rng rng_;
  double prob_ = 0.0;
  NumericState quoin_;
  std::vector<bool> record_;
  std::uint64_t consumed_ = 0;
};

using CoinSource = std::function<bool()>;

inline CoinSource source(CoinStream& stream) {
  return [&stream] { return stream.toss(); };
}

// Toss twice until the results differ; output the second toss.
bool von_neumann_fair(const CoinSource& coin, std::uint64_t attempt_cap = kDefaultAttemptCap);
// Head with probability 2 l (1 - l): toss twice, head when the tosses differ.
bool differ_coin(const CoinSource& coin);
// Head with probability l / (1 + l) from an l-coin: first toss tail gives
// tail, then a tail gives head, two heads repeat.
bool ratio_coin(const CoinSource& coin, std::uint64_t attempt_cap = kDefaultAttemptCap);

// ---------------------------------------------------------------- g(p) = 4p(1-p)

struct ProtocolResult {
  bool head = false;
  std::uint64_t quoins = 0;
};

// p-coins and q-coins from quoins, m = 2p(1-p) and n = 1/2 - 2p(1-p) by
// double tosses, s = m/(1+m) and t = n/(1+n) by ratio_coin, then compare s
// and t until they differ.
ProtocolResult g_protocol1(double p, Rng& rng, std::uint64_t attempt_cap = kDefaultAttemptCap);
// CNOT, H, CNOT on two quoins and one joint measurement; accepted when qubit
// 1 reads 1, head when qubit 0 reads 0.
ProtocolResult g_protocol2(double p, Rng& rng, std::uint64_t attempt_cap = kDefaultAttemptCap);
// Measures the two-qubit state CNOT then H on two quoins; accepted on
// {01, 10}, head on 01.
ProtocolResult g_protocol3(double p, Rng& rng, std::uint64_t attempt_cap = kDefaultAttemptCap);

// ---------------------------------------------------------------- costs

// Coins per output of the truncated doubling construction:
// -ln(eps^2 / 36) / eps^2. Requires 0 < eps < 1/2.
double doubling_cost_estimate(double eps);

struct ClassicalCost {
  double l = 0.0;           // max((2p-1)^2, 2 eps_c), the truncated l(p)
  double per_l_coin = 0.0;  // doubling_cost_estimate(eps_c)
  double l_tosses = 0.0;    // 2 / (1 - l)^2, infinite at l = 1
  double total = 0.0;
};

ClassicalCost classical_fct_cost(double p, double eps_c);

// Success probability of one attempt of the example coin, ((2p-1)^2 + 1)/16.
double example_coin_success(double p);

struct QuantumCost {
  double mean_quoins = 0.0;  // Monte Carlo mean per successful coin
  double stddev = 0.0;       // standard error of mean_quoins
  double predicted = 0.0;    // 2 / (Pr_c * loss_survival)
  std::uint64_t shots = 0;
};

QuantumCost quantum_cost_report(double p, double loss_survival, Rng& rng, std::uint64_t shots);

struct AdvantageReport {
  double p = 0.0;
  double eps_c = 0.0;
  double loss_survival = 1.0;
  double quantum = 0.0;    // predicted quoins per f_c coin
  double classical = 0.0;  // classical coins per f_ct coin
  double ratio = 0.0;
};

AdvantageReport advantage_compare(double p, double eps_c, double loss_survival);

std::string to_json(const AdvantageReport& r);

}  // namespace qbf

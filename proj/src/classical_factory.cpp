#include "qbf/classical_factory.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "qbf/errors.hpp"

namespace qbf {

CoinStream CoinStream::analytic(double prob, std::uint64_t seed) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("coin probability must lie in [0,1]");
  CoinStream c(Kind::Analytic, seed);
  c.prob_ = prob;
  return c;
}

CoinStream CoinStream::quoin(double p, QuoinBasis basis, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quoin parameter must lie in [0,1]");
  CoinStream c(Kind::Quantum, seed);
  c.quoin_ = make_quoin(p);
  if (basis == QuoinBasis::DA) c.quoin_ = apply_operator(c.quoin_, gates::H(), {0});
  return c;
}

CoinStream CoinStream::recorded(std::vector<bool> tosses) {
  CoinStream c(Kind::Recorded, 0);
  c.record_ = std::move(tosses);
  return c;
}

bool CoinStream::toss() {
  switch (kind_) {
    case Kind::Analytic:
      ++consumed_;
      return bernoulli(rng_, prob_);
    case Kind::Quantum:
      ++consumed_;
      return sample_measure(quoin_, rng_) == 0;
    case Kind::Recorded:
      if (consumed_ >= record_.size()) throw DataError("recorded coin stream exhausted");
      return record_[consumed_++];
  }
  return false;
}

bool von_neumann_fair(const CoinSource& coin, std::uint64_t attempt_cap) {
  for (std::uint64_t i = 0; i < attempt_cap; ++i) {
    const bool first = coin();
    const bool second = coin();
    if (first != second) return second;
  }
  throw AttemptCapExceeded("von Neumann extraction exceeded its attempt cap");
}

bool differ_coin(const CoinSource& coin) { return coin() != coin(); }

bool ratio_coin(const CoinSource& coin, std::uint64_t attempt_cap) {
  for (std::uint64_t i = 0; i < attempt_cap; ++i) {
    if (!coin()) return false;
    if (!coin()) return true;
  }
  throw AttemptCapExceeded("ratio coin exceeded its attempt cap");
}

ProtocolResult g_protocol1(double p, Rng& rng, std::uint64_t attempt_cap) {
  CoinStream pc = CoinStream::quoin(p, CoinStream::QuoinBasis::Z, rng());
  CoinStream qc = CoinStream::quoin(p, CoinStream::QuoinBasis::DA, rng());
  const CoinSource m = [&] { return differ_coin(source(pc)); };
  const CoinSource n = [&] { return differ_coin(source(qc)); };
  ProtocolResult r;
  for (std::uint64_t i = 0; i < attempt_cap; ++i) {
    const bool s = ratio_coin(m, attempt_cap);
    const bool t = ratio_coin(n, attempt_cap);
    if (s != t) {
      r.head = s;
      r.quoins = pc.tosses_consumed() + qc.tosses_consumed();
      return r;
    }
  }
  throw AttemptCapExceeded("g(p) protocol 1 exceeded its attempt cap");
}

namespace {

NumericState two_quoins(double p) {
  const NumericState q = make_quoin(p);
  return apply_operator(tensor(q, q), gates::CNOT(), {0, 1});
}

// Measures `state` until the outcome lands in `accept`; head on `head`.
template <class Accept>
ProtocolResult measure_until(const NumericState& state, Accept accept, std::size_t head, Rng& rng,
                             std::uint64_t attempt_cap) {
  ProtocolResult r;
  for (std::uint64_t i = 0; i < attempt_cap; ++i) {
    r.quoins += 2;
    const std::size_t k = sample_measure(state, rng);
    if (accept(k)) {
      r.head = k == head;
      return r;
    }
  }
  throw AttemptCapExceeded("g(p) protocol exceeded its attempt cap");
}

}  // namespace

ProtocolResult g_protocol2(double p, Rng& rng, std::uint64_t attempt_cap) {
  NumericState st = apply_operator(two_quoins(p), gates::H(), {0});
  st = apply_operator(st, gates::CNOT(), {0, 1});
  // Qubit 1 reads 1 on indices 1 and 3; qubit 0 reads 0 on index 1.
  return measure_until(st, [](std::size_t k) { return (k & 1) == 1; }, 1, rng, attempt_cap);
}

ProtocolResult g_protocol3(double p, Rng& rng, std::uint64_t attempt_cap) {
  const NumericState st = apply_operator(two_quoins(p), gates::H(), {0});
  return measure_until(st, [](std::size_t k) { return k == 1 || k == 2; }, 1, rng, attempt_cap);
}

double doubling_cost_estimate(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("doubling cost needs 0 < eps < 1/2");
  return -std::log(eps * eps / 36.0) / (eps * eps);
}

ClassicalCost classical_fct_cost(double p, double eps_c) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  ClassicalCost c;
  // g is truncated at 1 - 2 eps_c, so its reverse l = 1 - g never drops below 2 eps_c.
  c.l = std::max((2 * p - 1) * (2 * p - 1), 2 * eps_c);
  c.per_l_coin = doubling_cost_estimate(eps_c);
  c.l_tosses = c.l >= 1.0 ? std::numeric_limits<double>::infinity() : 2.0 / ((1 - c.l) * (1 - c.l));
  c.total = c.per_l_coin * c.l_tosses;
  return c;
}

double example_coin_success(double p) { return ((2 * p - 1) * (2 * p - 1) + 1) / 16.0; }

QuantumCost quantum_cost_report(double p, double loss_survival, Rng& rng, std::uint64_t shots) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(loss_survival > 0.0 && loss_survival <= 1.0)) throw DomainError("loss survival must lie in (0,1]");
  if (shots == 0) throw DomainError("shots must be positive");
  QuantumCost q;
  q.shots = shots;
  q.predicted = 2.0 / (example_coin_success(p) * loss_survival);
  SampleOptions opt;
  opt.loss_survival = loss_survival;
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double k = static_cast<double>(build_example_coin(p, rng, opt).ledger.quoins_consumed);
    sum += k;
    sum2 += k * k;
  }
  const double n = static_cast<double>(shots);
  q.mean_quoins = sum / n;
  const double var = shots > 1 ? (sum2 - n * q.mean_quoins * q.mean_quoins) / (n - 1) : 0.0;
  q.stddev = std::sqrt(std::max(var, 0.0) / n);
  return q;
}

AdvantageReport advantage_compare(double p, double eps_c, double loss_survival) {
  if (!(loss_survival > 0.0 && loss_survival <= 1.0)) throw DomainError("loss survival must lie in (0,1]");
  AdvantageReport r;
  r.p = p;
  r.eps_c = eps_c;
  r.loss_survival = loss_survival;
  r.quantum = 2.0 / (example_coin_success(p) * loss_survival);
  r.classical = classical_fct_cost(p, eps_c).total;
  r.ratio = r.classical / r.quantum;
  return r;
}

std::string to_json(const AdvantageReport& r) {
  nlohmann::ordered_json j;
  j["p"] = r.p;
  j["eps_c"] = r.eps_c;
  j["loss_survival"] = r.loss_survival;
  j["quantum"] = r.quantum;
  // JSON has no infinity; a divergent cost serializes as null.
  j["classical"] = std::isfinite(r.classical) ? nlohmann::ordered_json(r.classical) : nlohmann::ordered_json();
  j["ratio"] = std::isfinite(r.ratio) ? nlohmann::ordered_json(r.ratio) : nlohmann::ordered_json();
  return j.dump(2);
}

}  // namespace qbf

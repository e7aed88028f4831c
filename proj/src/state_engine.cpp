#include "qbf/state_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "qbf/errors.hpp"

namespace qbf {

namespace {

constexpr double kUnitaryTol = 1e-9;
constexpr double kEmptyBranch = 1e-28;

bool check_unitary(int qubits, const std::vector<cplx>& m) {
  const std::size_t d = std::size_t{1} << qubits;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cplx acc{};
      for (std::size_t r = 0; r < d; ++r) acc += std::conj(m[r * d + i]) * m[r * d + j];
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > kUnitaryTol) return false;
    }
  return true;
}

void require_qubits(int n) {
  if (n < 1) throw DomainError("state needs at least one qubit");
  if (n > kMaxQubits)
    throw CapacityError(std::to_string(n) + " qubits exceeds the cap of " + std::to_string(kMaxQubits));
}

cplx scale(cplx k, const cplx& a) { return k * a; }

FieldElement scale(cplx k, const FieldElement& a) {
  if (k == cplx{1.0}) return a;
  if (k == cplx{-1.0}) return -a;
  return FieldElement(k) * a;
}

bool is_zero(const cplx& a) { return a == cplx{}; }
bool is_zero(const FieldElement& a) { return a.is_zero(); }

}  // namespace

// ---------------------------------------------------------------- Operator

Operator::Operator(std::string name, int qubits, std::vector<cplx> matrix)
    : name_(std::move(name)), qubits_(qubits), m_(std::move(matrix)) {
  if (qubits < 1 || qubits > kMaxQubits) throw CapacityError("operator qubit count out of range");
  if (m_.size() != dim() * dim()) throw DomainError("operator matrix size does not match its qubit count");
  unitary_ = check_unitary(qubits_, m_);
}

Operator Operator::scaled(cplx k) const {
  std::vector<cplx> m = m_;
  for (auto& v : m) v *= k;
  return {name_, qubits_, std::move(m)};
}

Operator Operator::named(std::string name) const { return {std::move(name), qubits_, m_}; }

Operator operator*(const Operator& x, const Operator& y) {
  if (x.qubits() != y.qubits()) throw DomainError("operator product needs equal dimensions");
  const std::size_t d = x.dim();
  std::vector<cplx> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx{}) continue;
      for (std::size_t j = 0; j < d; ++j) m[i * d + j] += xik * y(k, j);
    }
  return {x.name() + "*" + y.name(), x.qubits(), std::move(m)};
}

Operator operator+(const Operator& x, const Operator& y) {
  if (x.qubits() != y.qubits()) throw DomainError("operator sum needs equal dimensions");
  std::vector<cplx> m = x.matrix();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += y.matrix()[i];
  return {x.name() + "+" + y.name(), x.qubits(), std::move(m)};
}

Operator kron(const Operator& x, const Operator& y) {
  const std::size_t dx = x.dim(), dy = y.dim(), d = dx * dy;
  std::vector<cplx> m(d * d);
  for (std::size_t i = 0; i < dx; ++i)
    for (std::size_t j = 0; j < dx; ++j)
      for (std::size_t k = 0; k < dy; ++k)
        for (std::size_t l = 0; l < dy; ++l) m[(i * dy + k) * d + (j * dy + l)] = x(i, j) * y(k, l);
  return {"(" + x.name() + ")x(" + y.name() + ")", x.qubits() + y.qubits(), std::move(m)};
}

namespace gates {

Operator I() { return {"I", 1, {1.0, 0.0, 0.0, 1.0}}; }
Operator X() { return {"X", 1, {0.0, 1.0, 1.0, 0.0}}; }
Operator Z() { return {"Z", 1, {1.0, 0.0, 0.0, -1.0}}; }

Operator H() {
  const double r = 1.0 / std::sqrt(2.0);
  return {"H", 1, {r, r, r, -r}};
}

Operator M0() { return {"M0", 1, {1.0, 0.0, 0.0, 0.0}}; }
Operator M1() { return {"M1", 1, {0.0, 0.0, 0.0, 1.0}}; }
Operator Md() { return {"Md", 1, {0.5, 0.5, 0.5, 0.5}}; }

Operator CNOT() {
  std::vector<cplx> m(16);
  m[0 * 4 + 0] = m[1 * 4 + 1] = m[2 * 4 + 3] = m[3 * 4 + 2] = 1.0;
  return {"CNOT", 2, std::move(m)};
}

Operator Ua(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("U_a needs a in [0,1]");
  const double x = std::sqrt(a), y = std::sqrt(1.0 - a);
  return {"U_a(" + std::to_string(a) + ")", 1, {x, y, y, -x}};
}

Operator Bn(int n, std::size_t k) {
  const std::size_t half = std::size_t{1} << n;
  if (k + 1 >= half) throw DomainError("B_n target basis must lie in [0, 2^n - 2]");
  const std::size_t d = 2 * half;
  std::vector<cplx> m(d * d);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
  const std::size_t a = half - 1, b = half + k;
  const double r = 1.0 / std::sqrt(2.0);
  m[a * d + a] = r;
  m[a * d + b] = -r;
  m[b * d + a] = r;
  m[b * d + b] = r;
  return {"B_" + std::to_string(n) + "[" + std::to_string(k) + "]", n + 1, std::move(m)};
}

Operator permutation(int qubits, const std::vector<std::size_t>& perm) {
  const std::size_t d = std::size_t{1} << qubits;
  if (perm.size() != d) throw DomainError("permutation size does not match the register");
  std::vector<cplx> m(d * d);
  std::vector<bool> seen(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (perm[i] >= d || seen[perm[i]]) throw DomainError("not a permutation");
    seen[perm[i]] = true;
    m[perm[i] * d + i] = 1.0;
  }
  return {"perm", qubits, std::move(m)};
}

Operator basis_swap(int qubits, std::size_t i, std::size_t j) {
  std::vector<std::size_t> perm(std::size_t{1} << qubits);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::swap(perm.at(i), perm.at(j));
  return permutation(qubits, perm).named("swap[" + std::to_string(i) + "," + std::to_string(j) + "]");
}

}  // namespace gates

// ---------------------------------------------------------------- states

template <class Amp>
StateVector<Amp>::StateVector(int n_qubits, std::vector<Amp> amps, double success_prob,
                              std::optional<double> p_value)
    : n_(n_qubits), amps_(std::move(amps)), success_prob_(success_prob), p_(p_value) {
  require_qubits(n_qubits);
  if (amps_.size() != (std::size_t{1} << n_qubits)) throw DomainError("amplitude count is not 2^n");
}

template class StateVector<cplx>;
template class StateVector<FieldElement>;

NumericState make_quoin(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quoin needs p in [0,1]");
  return {1, {std::sqrt(p), std::sqrt(1.0 - p)}, 1.0, p};
}

SymbolicState make_symbolic_quoin() { return {1, {FieldElement::s(), FieldElement(1.0)}}; }

NumericState make_constant_state(cplx alpha) { return make_constant_state(Homogeneous{alpha, 1.0}); }

NumericState make_constant_state(Homogeneous alpha) {
  const double nrm = std::sqrt(std::norm(alpha.k0) + std::norm(alpha.k1));
  if (nrm == 0.0) throw DomainError("constant state with both amplitudes zero");
  return {1, {alpha.k0 / nrm, alpha.k1 / nrm}};
}

SymbolicState make_symbolic_constant_state(Homogeneous alpha) {
  if (alpha.k0 == cplx{} && alpha.k1 == cplx{}) throw DomainError("constant state with both amplitudes zero");
  return {1, {FieldElement(alpha.k0), FieldElement(alpha.k1)}};
}

NumericState basis_state(int n_qubits, std::size_t index) {
  require_qubits(n_qubits);
  std::vector<cplx> amps(std::size_t{1} << n_qubits);
  amps.at(index) = 1.0;
  return {n_qubits, std::move(amps)};
}

template <class Amp>
StateVector<Amp> tensor(const StateVector<Amp>& x, const StateVector<Amp>& y) {
  const int n = x.n_qubits() + y.n_qubits();
  require_qubits(n);
  std::vector<Amp> amps;
  amps.reserve(x.size() * y.size());
  for (const auto& a : x.amps())
    for (const auto& b : y.amps()) amps.push_back(a * b);
  std::optional<double> p = x.p_value() ? x.p_value() : y.p_value();
  return {n, std::move(amps), x.success_prob() * y.success_prob(), p};
}

template <class Amp>
StateVector<Amp> apply_operator(const StateVector<Amp>& state, const Operator& op,
                                const std::vector<int>& targets) {
  const int n = state.n_qubits();
  const int k = static_cast<int>(targets.size());
  if (k != op.qubits()) throw DomainError("operator " + op.name() + " does not match the target count");
  std::size_t all = 0;
  std::vector<std::size_t> masks(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    if (targets[j] < 0 || targets[j] >= n) throw DomainError("target qubit out of range");
    masks[static_cast<std::size_t>(j)] = qubit_mask(n, targets[j]);
    if (all & masks[static_cast<std::size_t>(j)]) throw DomainError("duplicate target qubit");
    all |= masks[static_cast<std::size_t>(j)];
  }
  const std::size_t d = op.dim();
  std::vector<std::size_t> idx(d);
  std::vector<Amp> in(d);
  std::vector<Amp> out = state.amps();
  for (std::size_t base = 0; base < state.size(); ++base) {
    if (base & all) continue;
    for (std::size_t l = 0; l < d; ++l) {
      std::size_t i = base;
      for (int j = 0; j < k; ++j)
        if ((l >> (k - 1 - j)) & 1U) i |= masks[static_cast<std::size_t>(j)];
      idx[l] = i;
      in[l] = state[i];
    }
    for (std::size_t r = 0; r < d; ++r) {
      Amp acc{};
      for (std::size_t c = 0; c < d; ++c) {
        const cplx m = op(r, c);
        if (m == cplx{} || is_zero(in[c])) continue;
        acc = acc + scale(m, in[c]);
      }
      out[idx[r]] = acc;
    }
  }
  return {n, std::move(out), state.success_prob(), state.p_value()};
}

template <class Amp>
std::pair<StateVector<Amp>, double> postselect(const StateVector<Amp>& state, const std::vector<int>& qubits,
                                               const std::vector<int>& outcomes) {
  const int n = state.n_qubits();
  if (qubits.size() != outcomes.size()) throw DomainError("one outcome per post-selected qubit");
  const int m = n - static_cast<int>(qubits.size());
  if (m < 1) throw DomainError("post-selection must leave at least one qubit");
  std::size_t sel_mask = 0, sel_value = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if (qubits[j] < 0 || qubits[j] >= n) throw DomainError("post-selected qubit out of range");
    if (outcomes[j] != 0 && outcomes[j] != 1) throw DomainError("outcome must be 0 or 1");
    const std::size_t mask = qubit_mask(n, qubits[j]);
    if (sel_mask & mask) throw DomainError("duplicate post-selected qubit");
    sel_mask |= mask;
    if (outcomes[j]) sel_value |= mask;
  }
  std::vector<Amp> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t i = 0; i < state.size(); ++i)
    if ((i & sel_mask) == sel_value) out.push_back(state[i]);

  if constexpr (std::is_same_v<Amp, cplx>) {
    double mass = 0.0;
    for (const auto& a : out) mass += std::norm(a);
    if (mass <= kEmptyBranch) throw PostselectionError("post-selected branch has zero probability");
    const double r = 1.0 / std::sqrt(mass);
    for (auto& a : out) a *= r;
    return {StateVector<Amp>(m, std::move(out), state.success_prob() * mass, state.p_value()), mass};
  } else {
    if (std::all_of(out.begin(), out.end(), [](const Amp& a) { return is_zero(a); }))
      throw PostselectionError("post-selected branch is identically zero");
    return {StateVector<Amp>(m, std::move(out), state.success_prob(), state.p_value()), 1.0};
  }
}

template <class Amp>
std::pair<StateVector<Amp>, double> postselect(const StateVector<Amp>& state, int qubit, int outcome) {
  return postselect(state, std::vector<int>{qubit}, std::vector<int>{outcome});
}

template NumericState tensor(const NumericState&, const NumericState&);
template SymbolicState tensor(const SymbolicState&, const SymbolicState&);
template NumericState apply_operator(const NumericState&, const Operator&, const std::vector<int>&);
template SymbolicState apply_operator(const SymbolicState&, const Operator&, const std::vector<int>&);
template std::pair<NumericState, double> postselect(const NumericState&, int, int);
template std::pair<SymbolicState, double> postselect(const SymbolicState&, int, int);
template std::pair<NumericState, double> postselect(const NumericState&, const std::vector<int>&,
                                                    const std::vector<int>&);
template std::pair<SymbolicState, double> postselect(const SymbolicState&, const std::vector<int>&,
                                                     const std::vector<int>&);

double norm_squared(const NumericState& state) {
  double s = 0.0;
  for (const auto& a : state.amps()) s += std::norm(a);
  return s;
}

NumericState normalized(const NumericState& state) {
  const double nrm = std::sqrt(norm_squared(state));
  if (nrm == 0.0) throw DomainError("cannot normalize the zero vector");
  std::vector<cplx> amps = state.amps();
  for (auto& a : amps) a /= nrm;
  return {state.n_qubits(), std::move(amps), state.success_prob(), state.p_value()};
}

std::optional<NumericState> sample_postselect(const NumericState& state, int qubit, int outcome, Rng& rng) {
  const std::size_t mask = qubit_mask(state.n_qubits(), qubit);
  double mass = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (((i & mask) != 0) == (outcome == 1)) mass += std::norm(state[i]);
  if (u01(rng) >= mass) return std::nullopt;
  return postselect(state, qubit, outcome).first;
}

std::optional<std::size_t> sample_outcome(const NumericState& state, Rng& rng) {
  const double u = u01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc += std::norm(state[i]);
    if (u < acc) return i;
  }
  return std::nullopt;
}

std::size_t sample_measure(const NumericState& state, Rng& rng) {
  const double total = norm_squared(state);
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("sample_measure needs a normalized state");
  const double u = u01(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = std::norm(state[i]);
    if (w == 0.0) continue;
    last = i;
    acc += w;
    if (u < acc) return i;
  }
  return last;
}

std::map<std::size_t, double> born_probs(const NumericState& state, const std::set<std::size_t>& basis_set) {
  if (basis_set.empty()) throw DomainError("basis set is empty");
  std::map<std::size_t, double> out;
  double total = 0.0;
  for (std::size_t i : basis_set) {
    if (i >= state.size()) throw DomainError("basis index out of range");
    out[i] = std::norm(state[i]);
    total += out[i];
  }
  if (total <= kEmptyBranch) throw PostselectionError("basis set carries zero probability");
  for (auto& [i, v] : out) v /= total;
  return out;
}

double state_fidelity(const NumericState& x, const NumericState& y) {
  if (x.n_qubits() != y.n_qubits()) throw DomainError("fidelity needs equal qubit counts");
  cplx overlap{};
  for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
  const double nx = norm_squared(x), ny = norm_squared(y);
  if (nx == 0.0 || ny == 0.0) throw DomainError("fidelity with the zero vector");
  return std::min(1.0, std::norm(overlap) / (nx * ny));
}

NumericState evaluate(const SymbolicState& state, double p) {
  std::vector<cplx> amps;
  amps.reserve(state.size());
  for (const auto& a : state.amps()) amps.push_back(a.eval(p));
  return normalized(NumericState(state.n_qubits(), std::move(amps), 1.0, p));
}

std::vector<FieldElement> relative_amplitudes(const SymbolicState& state) {
  const FieldElement& last = state.amps().back();
  if (last.is_zero()) throw DomainError("last amplitude is zero; relative amplitudes undefined");
  const FieldElement inv = last.inverse();
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i + 1 < state.size(); ++i) out.push_back(state[i] * inv);
  return out;
}

std::vector<cplx> relative_amplitudes(const NumericState& state) {
  const cplx last = state.amps().back();
  if (last == cplx{}) throw DomainError("last amplitude is zero; relative amplitudes undefined");
  std::vector<cplx> out;
  for (std::size_t i = 0; i + 1 < state.size(); ++i) out.push_back(state[i] / last);
  return out;
}

Homogeneous relative_amplitude(const NumericState& state) {
  if (state.n_qubits() != 1) throw DomainError("relative_amplitude needs a single qubit");
  return {state[0], state[1]};
}

}  // namespace qbf

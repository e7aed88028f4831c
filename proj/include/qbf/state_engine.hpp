#pragma once

// Dense state vectors over at most 12 qubits, numeric (complex amplitudes at a
// fixed p) or symbolic (amplitudes in M).
//
// Qubit 0 is the most significant bit of a basis index, so for two qubits the
// index of |ab> is 2a + b. Operators may be non-unitary (projectors, heralded
// gates with an amplitude below one); after such an operator a numeric state
// is subnormalized and its squared norm is the probability that the branch
// survives. Post-selection renormalizes and folds that probability into
// success_prob.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qbf/amplitude_field.hpp"
#include "qbf/rng.hpp"

namespace qbf {

inline constexpr int kMaxQubits = 12;

class Operator {
 public:
  Operator(std::string name, int qubits, std::vector<cplx> matrix);

  const std::string& name() const { return name_; }
  int qubits() const { return qubits_; }
  std::size_t dim() const { return std::size_t{1} << qubits_; }
  cplx operator()(std::size_t row, std::size_t col) const { return m_[row * dim() + col]; }
  const std::vector<cplx>& matrix() const { return m_; }
  // M^dagger M = I within 1e-9.
  bool unitary() const { return unitary_; }

  Operator scaled(cplx k) const;
  Operator named(std::string name) const;

 private:
  std::string name_;
  int qubits_;
  std::vector<cplx> m_;  // row-major
  bool unitary_;
};

// Matrix product; x * y applies y first.
Operator operator*(const Operator& x, const Operator& y);
Operator operator+(const Operator& x, const Operator& y);
Operator kron(const Operator& x, const Operator& y);

namespace gates {
Operator I();
Operator X();
Operator Z();
Operator H();
Operator M0();  // |0><0|
Operator M1();  // |1><1|
Operator Md();  // |+><+|
Operator CNOT();  // control qubit 0, target qubit 1
// Type-1 unitary [[sqrt a, sqrt(1-a)], [sqrt(1-a), -sqrt a]].
Operator Ua(double a);
// (n+1)-qubit operator that rotates |0, 2^n - 1> and |1, k> into each other
// and is the identity elsewhere; the first qubit is the auxiliary one.
Operator Bn(int n, std::size_t k);
// Sends basis state i to perm[i].
Operator permutation(int qubits, const std::vector<std::size_t>& perm);
// Swaps two basis states of a register.
Operator basis_swap(int qubits, std::size_t i, std::size_t j);
}  // namespace gates

// Single-qubit relative amplitude k0/k1 in homogeneous form; k1 = 0 stands
// for the infinity marker (the state |0>).
struct Homogeneous {
  cplx k0{1.0};
  cplx k1{1.0};

  static Homogeneous infinity() { return {1.0, 0.0}; }
  bool is_infinite() const { return k1 == cplx{}; }
  cplx value() const { return k0 / k1; }
};

template <class Amp>
class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, std::vector<Amp> amps, double success_prob = 1.0,
              std::optional<double> p_value = std::nullopt);

  int n_qubits() const { return n_; }
  std::size_t size() const { return amps_.size(); }
  const std::vector<Amp>& amps() const { return amps_; }
  const Amp& operator[](std::size_t i) const { return amps_[i]; }
  double success_prob() const { return success_prob_; }
  const std::optional<double>& p_value() const { return p_; }

 private:
  int n_ = 0;
  std::vector<Amp> amps_;
  double success_prob_ = 1.0;
  std::optional<double> p_;
};

using NumericState = StateVector<cplx>;
using SymbolicState = StateVector<FieldElement>;

// Bit of `qubit` inside a basis index of an n-qubit register.
inline std::size_t qubit_mask(int n, int qubit) { return std::size_t{1} << (n - 1 - qubit); }

NumericState make_quoin(double p);
SymbolicState make_symbolic_quoin();
NumericState make_constant_state(cplx alpha);
NumericState make_constant_state(Homogeneous alpha);
SymbolicState make_symbolic_constant_state(Homogeneous alpha);
NumericState basis_state(int n_qubits, std::size_t index);

template <class Amp>
StateVector<Amp> tensor(const StateVector<Amp>& x, const StateVector<Amp>& y);

template <class Amp>
StateVector<Amp> apply_operator(const StateVector<Amp>& state, const Operator& op,
                                const std::vector<int>& targets);

// Keeps the branch where `qubit` reads `outcome` and removes that qubit. The
// branch probability is its squared norm (the state entering may already be
// subnormalized by earlier operators). Throws PostselectionError on an empty
// branch. Symbolic states are projected without normalization and report
// probability 1.
template <class Amp>
std::pair<StateVector<Amp>, double> postselect(const StateVector<Amp>& state, int qubit, int outcome);

// Projects several qubits at once; outcomes[i] belongs to qubits[i].
template <class Amp>
std::pair<StateVector<Amp>, double> postselect(const StateVector<Amp>& state, const std::vector<int>& qubits,
                                               const std::vector<int>& outcomes);

// Samples a single-qubit measurement of `qubit`; returns the collapsed state
// when the outcome equals `outcome`, nullopt otherwise. Mass missing from a
// subnormalized state counts as failure.
std::optional<NumericState> sample_postselect(const NumericState& state, int qubit, int outcome, Rng& rng);

// Full computational-basis measurement. Returns nullopt with the missing
// probability mass of a subnormalized state (a heralding failure).
std::optional<std::size_t> sample_outcome(const NumericState& state, Rng& rng);

// Normalized-state measurement; the state must have unit norm within 1e-9.
std::size_t sample_measure(const NumericState& state, Rng& rng);

// Conditional Born probabilities over `basis_set`, renormalized to sum to one.
std::map<std::size_t, double> born_probs(const NumericState& state, const std::set<std::size_t>& basis_set);

double norm_squared(const NumericState& state);
NumericState normalized(const NumericState& state);

// |<x|y>|^2 / (|x|^2 |y|^2); global phase and scale are ignored.
double state_fidelity(const NumericState& x, const NumericState& y);

// Evaluates every amplitude at p and normalizes.
NumericState evaluate(const SymbolicState& state, double p);

// k_i / k_last for i < 2^n - 1; the last amplitude must be nonzero.
std::vector<FieldElement> relative_amplitudes(const SymbolicState& state);
std::vector<cplx> relative_amplitudes(const NumericState& state);

// Relative amplitude of a single-qubit state.
Homogeneous relative_amplitude(const NumericState& state);

extern template class StateVector<cplx>;
extern template class StateVector<FieldElement>;

}  // namespace qbf

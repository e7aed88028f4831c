#pragma once

// Basic operations on relative amplitudes and circuit synthesis.
//
// A CircuitPlan is a tree of blocks. Each block owns a small local register:
// the output registers of its child blocks come first (in child order), then
// any qubits it injects. Its steps act on local wire indices, and whatever
// survives its post-selections is the block's output register. Executing a
// block therefore never holds more than the qubits of one operation, and a
// failed post-selection only needs its own subtree regenerated.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbf/expression.hpp"
#include "qbf/ledger.hpp"
#include "qbf/rng.hpp"
#include "qbf/state_engine.hpp"

namespace qbf {

// Default cap on retried attempts of a single block.
inline constexpr std::uint64_t kDefaultAttemptCap = 1'000'000;

struct Step {
  enum class Kind { InjectQuoin, InjectConstant, ApplyOperator, PostSelect };

  Kind kind = Kind::ApplyOperator;
  std::vector<int> wires;  // local to the owning block
  std::optional<Operator> op;
  Homogeneous constant;  // InjectConstant
  int outcome = 0;       // PostSelect
};

struct Block {
  std::string label;
  std::vector<int> children;
  std::vector<Step> steps;
};

struct CircuitPlan {
  std::vector<Block> blocks;  // children precede their parents
  int root = -1;
  std::string description;

  int add_block(Block b);
  int quoins_per_attempt() const;
  // Quoins injected by one block's own steps.
  int quoins_in_block(int block) const;
  int operation_count() const;
};

std::string to_json(const CircuitPlan& plan);

// ---------------------------------------------------------------- executors

// Every post-selection takes the requested branch; success_prob of the result
// is the probability that one pass through the whole tree succeeds.
NumericState run_forced(const CircuitPlan& plan, double p);
SymbolicState run_symbolic(const CircuitPlan& plan);

struct SampleOptions {
  double loss_survival = 1.0;  // per-attempt survival of blocks that post-select
  std::uint64_t attempt_cap = kDefaultAttemptCap;
};

// Runs the plan with sampled measurements; a failed block attempt regenerates
// its children and tries again. Quoins and attempts are added to the ledger.
NumericState run_sampled(const CircuitPlan& plan, double p, Rng& rng, ConsumptionLedger& ledger,
                         const SampleOptions& options = {});

// Expected quoins per successful output under run_sampled's retry policy.
double expected_quoins(const CircuitPlan& plan, double p, double loss_survival = 1.0);

// ---------------------------------------------------------------- basic single-qubit operations

enum class MulMode { Multiply, Divide };
enum class AddMode { Add, Subtract };

struct OpResult {
  std::optional<NumericState> state;  // empty when post-selection failed
  double success_prob = 0.0;          // probability of the heralded branch
};

// Heralded two-qubit logic (C (x) I)(M0 (x) A + M1 (x) B) with the 1/sqrt(8)
// amplitude of the photonic implementation.
Operator photonic_logic(const Operator& a, const Operator& b, const Operator& c);
Operator multiply_logic();
Operator add_logic();

// |h1>|h2> -> |h1 h2> (or |h1/h2>); success probability Pr_m in multiply mode.
OpResult multiply_states(const NumericState& x, const NumericState& y, MulMode mode, Rng& rng);
// |h1>|h2> -> |h1 + h2> (or |h2 - h1>); success probability Pr_a in add mode.
// x is inverted internally, which is how the simplified circuit consumes it.
OpResult add_states(const NumericState& x, const NumericState& y, AddMode mode, Rng& rng);
// |h> -> |1/h>, deterministic.
NumericState invert_state(const NumericState& x);
SymbolicState invert_state(const SymbolicState& x);

// Forced-branch versions (no sampling); used by the symbolic executor too.
template <class Amp>
std::pair<StateVector<Amp>, double> multiply_forced(const StateVector<Amp>& x, const StateVector<Amp>& y,
                                                    MulMode mode);
template <class Amp>
std::pair<StateVector<Amp>, double> add_forced(const StateVector<Amp>& x, const StateVector<Amp>& y,
                                               AddMode mode);

// ---------------------------------------------------------------- n-qubit operations

enum class BasicKind { Inverse, Multiply, Add };

// Replaces relative amplitude h_k of the n-qubit state by 1/h_k, h_k l or
// h_k + l. `aux` is |h_k> for Inverse and |l> otherwise. Add also consumes
// the constant state sqrt(2)|0> + |1> to undo the 1/sqrt(2) of B_n.
template <class Amp>
std::pair<StateVector<Amp>, double> apply_basic_general_forced(BasicKind kind, const StateVector<Amp>& state,
                                                               const StateVector<Amp>& aux, std::size_t k);

// Sampled version; the state is empty when a post-selection failed.
OpResult apply_basic_general(BasicKind kind, const NumericState& state, const NumericState& aux, std::size_t k,
                             Rng& rng);

// ---------------------------------------------------------------- synthesis

struct Synthesis {
  CircuitPlan plan;
  SymbolicState state;  // output of run_symbolic(plan)
  FieldElement target;  // the expression's value in M
};

// Compiles the expression bottom-up, one basic operation per internal node,
// with constant subexpressions folded. Throws SynthesisError when an inverse
// of the zero element is required.
Synthesis synthesize_single(const ExprPtr& expr);

// n-qubit state whose relative amplitudes are `targets` (2^n - 1 of them),
// starting from the balanced state and multiplying one amplitude at a time.
struct MultiSynthesis {
  CircuitPlan plan;
  SymbolicState state;
};
MultiSynthesis synthesize_multi(const std::vector<FieldElement>& targets);

// ---------------------------------------------------------------- canned circuits

// |f_q(p)> = (2p - 1)|0> + |1> from two quoins in one heralded step.
CircuitPlan example_coin_plan();
// |psi_g> = sqrt(4p(1-p))|0> + (2p - 1)|1>: CNOT, H, CNOT, post-select.
CircuitPlan g_state_plan();
// p|0> + |1> from two quoins through the M_d amplitude-halving logic.
CircuitPlan p_state_plan();

struct BuildResult {
  NumericState state;
  std::uint64_t attempts = 0;
  ConsumptionLedger ledger;
};

BuildResult build_example_coin(double p, Rng& rng, const SampleOptions& options = {});
BuildResult build_g_state(double p, Rng& rng, const SampleOptions& options = {});
BuildResult build_p_state(double p, Rng& rng, const SampleOptions& options = {});

}  // namespace qbf

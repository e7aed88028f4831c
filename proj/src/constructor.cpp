#include "qbf/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "qbf/errors.hpp"

namespace qbf {

namespace {

const double kSqrt2 = std::sqrt(2.0);

template <class Amp>
StateVector<Amp> constant_state(Homogeneous h);

template <>
NumericState constant_state<cplx>(Homogeneous h) {
  return make_constant_state(h);
}

template <>
SymbolicState constant_state<FieldElement>(Homogeneous h) {
  return make_symbolic_constant_state(h);
}

template <class Amp>
bool amp_is_zero(const Amp& a) {
  if constexpr (std::is_same_v<Amp, cplx>) {
    return a == cplx{};
  } else {
    return a.is_zero();
  }
}

template <class Amp>
StateVector<Amp> with_success(const StateVector<Amp>& s, double prob) {
  return {s.n_qubits(), s.amps(), prob, s.p_value()};
}

bool is_heralded(const Block& b) {
  return std::any_of(b.steps.begin(), b.steps.end(), [](const Step& s) { return s.kind == Step::Kind::PostSelect; });
}

// Executes one block's steps on the tensor product of its inputs. `select`
// performs a post-selection and returns nullopt on failure.
template <class Amp, class InjectQuoin, class Select>
std::optional<StateVector<Amp>> run_steps(const Block& b, const std::vector<StateVector<Amp>>& inputs,
                                          InjectQuoin inject_quoin, Select select) {
  std::optional<StateVector<Amp>> reg;
  std::vector<int> live;
  int next_wire = 0;
  for (const auto& in : inputs) {
    reg = reg ? tensor(*reg, in) : in;
    for (int q = 0; q < in.n_qubits(); ++q) live.push_back(next_wire++);
  }
  auto position = [&](int wire) {
    const auto it = std::find(live.begin(), live.end(), wire);
    if (it == live.end()) throw DomainError("block '" + b.label + "' references a dead wire");
    return static_cast<int>(it - live.begin());
  };
  auto append = [&](const StateVector<Amp>& st, int wire) {
    reg = reg ? tensor(*reg, st) : st;
    live.push_back(wire);
  };
  for (const Step& s : b.steps) {
    switch (s.kind) {
      case Step::Kind::InjectQuoin:
        append(inject_quoin(), s.wires.at(0));
        break;
      case Step::Kind::InjectConstant:
        append(constant_state<Amp>(s.constant), s.wires.at(0));
        break;
      case Step::Kind::ApplyOperator: {
        std::vector<int> targets;
        for (int w : s.wires) targets.push_back(position(w));
        reg = apply_operator(*reg, *s.op, targets);
        break;
      }
      case Step::Kind::PostSelect: {
        const int pos = position(s.wires.at(0));
        auto next = select(*reg, pos, s.outcome);
        if (!next) return std::nullopt;
        reg = std::move(*next);
        live.erase(live.begin() + pos);
        break;
      }
    }
  }
  if (!reg) throw DomainError("block '" + b.label + "' produces no qubits");
  return reg;
}

struct ForcedOut {
  NumericState state;
  double expected_quoins;
};

ForcedOut forced_block(const CircuitPlan& plan, int id, double p, double loss) {
  const Block& b = plan.blocks.at(static_cast<std::size_t>(id));
  std::vector<NumericState> inputs;
  double total_prob = 1.0, child_quoins = 0.0;
  for (int c : b.children) {
    ForcedOut out = forced_block(plan, c, p, loss);
    total_prob *= out.state.success_prob();
    child_quoins += out.expected_quoins;
    inputs.push_back(with_success(out.state, 1.0));
  }
  const auto out = run_steps<cplx>(
      b, inputs, [p] { return make_quoin(p); },
      [](const NumericState& st, int q, int o) { return std::optional<NumericState>(postselect(st, q, o).first); });
  const double block_prob = out->success_prob();
  const double survive = is_heralded(b) ? loss : 1.0;
  const double expected = (child_quoins + plan.quoins_in_block(id)) / (block_prob * survive);
  return {with_success(*out, total_prob * block_prob), expected};
}

// Scales the register so its last nonzero amplitude is 1. Without this, the
// factors of (1 - p) picked up from s*s pile up as repeated roots that the
// gcd cannot reliably cancel, and evaluation near p = 1 loses precision.
SymbolicState relative_form(const SymbolicState& st) {
  for (std::size_t i = st.size(); i-- > 0;) {
    if (st[i].is_zero()) continue;
    const FieldElement scale = st[i].inverse();
    std::vector<FieldElement> amps;
    for (const FieldElement& a : st.amps()) amps.push_back(a * scale);
    return SymbolicState(st.n_qubits(), std::move(amps));
  }
  return st;
}

SymbolicState symbolic_block(const CircuitPlan& plan, int id) {
  const Block& b = plan.blocks.at(static_cast<std::size_t>(id));
  std::vector<SymbolicState> inputs;
  for (int c : b.children) inputs.push_back(symbolic_block(plan, c));
  return relative_form(*run_steps<FieldElement>(
      b, inputs, [] { return make_symbolic_quoin(); },
      [](const SymbolicState& st, int q, int o) { return std::optional<SymbolicState>(postselect(st, q, o).first); }));
}

NumericState sampled_block(const CircuitPlan& plan, int id, double p, Rng& rng, ConsumptionLedger& ledger,
                           const SampleOptions& opt) {
  const Block& b = plan.blocks.at(static_cast<std::size_t>(id));
  const bool heralded = is_heralded(b);
  const int own_quoins = plan.quoins_in_block(id);
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt >= opt.attempt_cap)
      throw AttemptCapExceeded("block '" + b.label + "' failed " + std::to_string(opt.attempt_cap) + " attempts");
    ++ledger.attempts;
    std::vector<NumericState> inputs;
    for (int c : b.children) inputs.push_back(sampled_block(plan, c, p, rng, ledger, opt));
    ledger.quoins_consumed += static_cast<std::uint64_t>(own_quoins);
    if (heralded && opt.loss_survival < 1.0 && !bernoulli(rng, opt.loss_survival)) continue;
    auto out = run_steps<cplx>(
        b, inputs, [p] { return make_quoin(p); },
        [&rng](const NumericState& st, int q, int o) { return sample_postselect(st, q, o, rng); });
    if (out) return *out;
  }
}

int output_qubits(const CircuitPlan& plan, int id) {
  const Block& b = plan.blocks.at(static_cast<std::size_t>(id));
  int n = 0;
  for (int c : b.children) n += output_qubits(plan, c);
  for (const Step& s : b.steps) {
    if (s.kind == Step::Kind::InjectQuoin || s.kind == Step::Kind::InjectConstant) ++n;
    if (s.kind == Step::Kind::PostSelect) --n;
  }
  return n;
}

Step inject_quoin(int wire) {
  Step s;
  s.kind = Step::Kind::InjectQuoin;
  s.wires = {wire};
  return s;
}

Step inject_constant(int wire, Homogeneous h) {
  Step s;
  s.kind = Step::Kind::InjectConstant;
  s.wires = {wire};
  s.constant = h;
  return s;
}

Step apply(const Operator& op, std::vector<int> wires) {
  Step s;
  s.kind = Step::Kind::ApplyOperator;
  s.wires = std::move(wires);
  s.op = op;
  return s;
}

Step select(int wire, int outcome) {
  Step s;
  s.kind = Step::Kind::PostSelect;
  s.wires = {wire};
  s.outcome = outcome;
  return s;
}

std::vector<int> iota_wires(int from, int count) {
  std::vector<int> w(static_cast<std::size_t>(count));
  std::iota(w.begin(), w.end(), from);
  return w;
}

// Copies every block of `src` into `dst` and returns the new id of its root.
int graft(CircuitPlan& dst, const CircuitPlan& src) {
  const int offset = static_cast<int>(dst.blocks.size());
  for (Block b : src.blocks) {
    for (int& c : b.children) c += offset;
    dst.blocks.push_back(std::move(b));
  }
  return src.root + offset;
}

}  // namespace

// ---------------------------------------------------------------- plan

int CircuitPlan::add_block(Block b) {
  for (int c : b.children)
    if (c < 0 || c >= static_cast<int>(blocks.size())) throw DomainError("child block must precede its parent");
  blocks.push_back(std::move(b));
  return static_cast<int>(blocks.size()) - 1;
}

int CircuitPlan::quoins_in_block(int block) const {
  const Block& b = blocks.at(static_cast<std::size_t>(block));
  return static_cast<int>(
      std::count_if(b.steps.begin(), b.steps.end(), [](const Step& s) { return s.kind == Step::Kind::InjectQuoin; }));
}

int CircuitPlan::quoins_per_attempt() const {
  int n = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) n += quoins_in_block(static_cast<int>(i));
  return n;
}

int CircuitPlan::operation_count() const {
  int n = 0;
  for (const Block& b : blocks)
    n += static_cast<int>(std::count_if(b.steps.begin(), b.steps.end(), [](const Step& s) {
      return s.kind == Step::Kind::ApplyOperator;
    }));
  return n;
}

std::string to_json(const CircuitPlan& plan) {
  using nlohmann::json;
  json blocks = json::array();
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    const Block& b = plan.blocks[i];
    json steps = json::array();
    for (const Step& s : b.steps) {
      json j;
      j["wires"] = s.wires;
      switch (s.kind) {
        case Step::Kind::InjectQuoin:
          j["kind"] = "inject_quoin";
          break;
        case Step::Kind::InjectConstant:
          j["kind"] = "inject_constant";
          j["k0"] = {s.constant.k0.real(), s.constant.k0.imag()};
          j["k1"] = {s.constant.k1.real(), s.constant.k1.imag()};
          break;
        case Step::Kind::ApplyOperator:
          j["kind"] = "apply";
          j["operator"] = s.op->name();
          j["unitary"] = s.op->unitary();
          break;
        case Step::Kind::PostSelect:
          j["kind"] = "postselect";
          j["outcome"] = s.outcome;
          break;
      }
      steps.push_back(std::move(j));
    }
    blocks.push_back({{"id", i}, {"label", b.label}, {"children", b.children}, {"steps", std::move(steps)}});
  }
  json out = {{"description", plan.description},
              {"root", plan.root},
              {"quoins_per_attempt", plan.quoins_per_attempt()},
              {"blocks", std::move(blocks)}};
  return out.dump(2);
}

NumericState run_forced(const CircuitPlan& plan, double p) { return forced_block(plan, plan.root, p, 1.0).state; }

SymbolicState run_symbolic(const CircuitPlan& plan) { return symbolic_block(plan, plan.root); }

NumericState run_sampled(const CircuitPlan& plan, double p, Rng& rng, ConsumptionLedger& ledger,
                         const SampleOptions& options) {
  if (!(options.loss_survival > 0.0 && options.loss_survival <= 1.0))
    throw DomainError("loss survival must lie in (0,1]");
  return sampled_block(plan, plan.root, p, rng, ledger, options);
}

double expected_quoins(const CircuitPlan& plan, double p, double loss_survival) {
  try {
    return forced_block(plan, plan.root, p, loss_survival).expected_quoins;
  } catch (const PostselectionError&) {
    return std::numeric_limits<double>::infinity();
  }
}

// ---------------------------------------------------------------- single-qubit operations

Operator photonic_logic(const Operator& a, const Operator& b, const Operator& c) {
  const Operator body = kron(c, gates::I()) * (kron(gates::M0(), a) + kron(gates::M1(), b));
  return body.scaled(1.0 / std::sqrt(8.0));
}

Operator multiply_logic() { return photonic_logic(gates::I(), gates::X(), gates::I()).named("mul_logic"); }

Operator add_logic() { return photonic_logic(gates::I(), gates::M0() * gates::X(), gates::H()).named("add_logic"); }

template <class Amp>
std::pair<StateVector<Amp>, double> multiply_forced(const StateVector<Amp>& x, const StateVector<Amp>& y,
                                                    MulMode mode) {
  if (x.n_qubits() != 1 || y.n_qubits() != 1) throw DomainError("multiply_states takes single-qubit states");
  if (mode == MulMode::Divide && amp_is_zero(y[0])) throw DegenerateInputError("division by h2 = 0");
  const auto st = apply_operator(tensor(x, y), multiply_logic(), {0, 1});
  try {
    return postselect(st, 1, mode == MulMode::Multiply ? 0 : 1);
  } catch (const PostselectionError&) {
    throw DegenerateInputError("product of 0 and the infinity marker is undefined");
  }
}

template <class Amp>
std::pair<StateVector<Amp>, double> add_forced(const StateVector<Amp>& x, const StateVector<Amp>& y, AddMode mode) {
  if (x.n_qubits() != 1 || y.n_qubits() != 1) throw DomainError("add_states takes single-qubit states");
  const auto st = apply_operator(tensor(apply_operator(x, gates::X(), {0}), y), add_logic(), {0, 1});
  try {
    return postselect(st, 0, mode == AddMode::Add ? 0 : 1);
  } catch (const PostselectionError&) {
    throw DegenerateInputError("sum of two infinity markers is undefined");
  }
}

template std::pair<NumericState, double> multiply_forced(const NumericState&, const NumericState&, MulMode);
template std::pair<SymbolicState, double> multiply_forced(const SymbolicState&, const SymbolicState&, MulMode);
template std::pair<NumericState, double> add_forced(const NumericState&, const NumericState&, AddMode);
template std::pair<SymbolicState, double> add_forced(const SymbolicState&, const SymbolicState&, AddMode);

OpResult multiply_states(const NumericState& x, const NumericState& y, MulMode mode, Rng& rng) {
  auto [st, prob] = multiply_forced(x, y, mode);
  if (u01(rng) >= prob) return {std::nullopt, prob};
  return {std::move(st), prob};
}

OpResult add_states(const NumericState& x, const NumericState& y, AddMode mode, Rng& rng) {
  auto [st, prob] = add_forced(x, y, mode);
  if (u01(rng) >= prob) return {std::nullopt, prob};
  return {std::move(st), prob};
}

NumericState invert_state(const NumericState& x) { return apply_operator(x, gates::X(), {0}); }

SymbolicState invert_state(const SymbolicState& x) { return apply_operator(x, gates::X(), {0}); }

// ---------------------------------------------------------------- n-qubit operations

namespace {

// Permutation or B_n step on |aux>|K>, followed by post-selection of aux.
struct GeneralStage {
  Operator op;
  int outcome;
};

GeneralStage general_stage(BasicKind kind, int n, std::size_t k) {
  const std::size_t half = std::size_t{1} << n;
  switch (kind) {
    case BasicKind::Inverse:
      return {gates::basis_swap(n + 1, k, half + half - 1), 0};
    case BasicKind::Multiply:
      return {gates::basis_swap(n + 1, k, half + k), 1};
    case BasicKind::Add:
      return {gates::Bn(n, k), 1};
  }
  throw DomainError("unknown basic operation");
}

void check_general(BasicKind kind, int n, std::size_t k, int aux_qubits) {
  if (aux_qubits != 1) throw DomainError("auxiliary state must be a single qubit");
  if (n + 2 > kMaxQubits) throw CapacityError("register too large for the auxiliary qubits");
  if (k + 1 >= (std::size_t{1} << n)) throw DomainError("target basis must lie in [0, 2^n - 2]");
  (void)kind;
}

template <class Amp, class Select>
std::optional<std::pair<StateVector<Amp>, double>> general_impl(BasicKind kind, const StateVector<Amp>& state,
                                                                const StateVector<Amp>& aux, std::size_t k,
                                                                Select select) {
  const int n = state.n_qubits();
  check_general(kind, n, k, aux.n_qubits());
  if (kind == BasicKind::Inverse && amp_is_zero(state[k]))
    throw DegenerateInputError("inverse of a zero relative amplitude");
  const GeneralStage stage = general_stage(kind, n, k);
  auto full = apply_operator(tensor(aux, state), stage.op, iota_wires(0, n + 1));
  auto out = select(full, stage.outcome);
  if (!out) return std::nullopt;
  if (kind != BasicKind::Add) return out;
  // B_n leaves (h_k + l)/sqrt(2); multiply basis k by the constant sqrt(2).
  auto rest = general_impl<Amp>(BasicKind::Multiply, out->first, constant_state<Amp>({kSqrt2, 1.0}), k, select);
  if (!rest) return std::nullopt;
  rest->second *= out->second;
  return rest;
}

}  // namespace

template <class Amp>
std::pair<StateVector<Amp>, double> apply_basic_general_forced(BasicKind kind, const StateVector<Amp>& state,
                                                               const StateVector<Amp>& aux, std::size_t k) {
  auto forced = [](const StateVector<Amp>& st, int outcome) {
    return std::optional<std::pair<StateVector<Amp>, double>>(postselect(st, 0, outcome));
  };
  return *general_impl<Amp>(kind, state, aux, k, forced);
}

template std::pair<NumericState, double> apply_basic_general_forced(BasicKind, const NumericState&,
                                                                    const NumericState&, std::size_t);
template std::pair<SymbolicState, double> apply_basic_general_forced(BasicKind, const SymbolicState&,
                                                                     const SymbolicState&, std::size_t);

OpResult apply_basic_general(BasicKind kind, const NumericState& state, const NumericState& aux, std::size_t k,
                             Rng& rng) {
  auto forced = apply_basic_general_forced(kind, state, aux, k);
  auto sampled = [&rng](const NumericState& st, int outcome) -> std::optional<std::pair<NumericState, double>> {
    auto r = sample_postselect(st, 0, outcome, rng);
    if (!r) return std::nullopt;
    return std::make_pair(std::move(*r), 1.0);
  };
  auto out = general_impl<cplx>(kind, state, aux, k, sampled);
  if (!out) return {std::nullopt, forced.second};
  return {std::move(out->first), forced.second};
}

// ---------------------------------------------------------------- synthesis

namespace {

// A compiled subexpression: either a folded constant or a block whose single
// output qubit carries the value.
struct Operand {
  std::optional<int> block;
  cplx constant;
  FieldElement value;
};

class Compiler {
 public:
  explicit Compiler(CircuitPlan& plan) : plan_(plan) {}

  Operand compile(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Number:
        return constant(e->value);
      case Expr::Kind::S: {
        Block b{"quoin", {}, {inject_quoin(0)}};
        return {plan_.add_block(std::move(b)), {}, FieldElement::s()};
      }
      case Expr::Kind::P:
        return {graft(plan_, p_state_plan()), {}, FieldElement::p()};
      case Expr::Kind::Neg: {
        const Operand x = compile(e->lhs);
        if (!x.block) return constant(-x.constant);
        return multiply(x, constant(-1.0), MulMode::Multiply);
      }
      case Expr::Kind::Add:
      case Expr::Kind::Sub: {
        const Operand x = compile(e->lhs);
        const Operand y = compile(e->rhs);
        const bool sub = e->kind == Expr::Kind::Sub;
        if (!x.block && !y.block) return constant(sub ? x.constant - y.constant : x.constant + y.constant);
        if (!y.block && y.constant == cplx{}) return x;
        if (!x.block && x.constant == cplx{} && !sub) return y;
        if (!sub) return add(x, y, AddMode::Add);
        // subtract mode yields h2 - h1 for inputs (h1, h2)
        if (!y.block) return add(x, constant(-y.constant), AddMode::Add);
        return add(y, x, AddMode::Subtract);
      }
      case Expr::Kind::Mul: {
        const Operand x = compile(e->lhs);
        const Operand y = compile(e->rhs);
        if (!x.block && !y.block) return constant(x.constant * y.constant);
        if (!x.block) return scale(y, x.constant);
        if (!y.block) return scale(x, y.constant);
        return multiply(x, y, MulMode::Multiply);
      }
      case Expr::Kind::Div: {
        const Operand x = compile(e->lhs);
        const Operand y = compile(e->rhs);
        if (y.value.is_zero()) throw SynthesisError("expression divides by zero");
        if (!y.block) return x.block ? scale(x, 1.0 / y.constant) : constant(x.constant / y.constant);
        if (!x.block && x.constant == cplx{}) return constant(0.0);
        const Operand inv = invert(y);
        if (!x.block && x.constant == cplx{1.0}) return inv;
        return multiply(x, inv, MulMode::Multiply);
      }
    }
    throw SynthesisError("unknown expression node");
  }

  Operand constant(cplx c) { return {std::nullopt, c, FieldElement(c)}; }

  // Wraps a bare constant into its own block; used when the whole expression
  // folds to a constant.
  int materialize(const Operand& x) {
    if (x.block) return *x.block;
    Block b{"constant", {}, {inject_constant(0, {x.constant, 1.0})}};
    return plan_.add_block(std::move(b));
  }

 private:
  Operand scale(const Operand& x, cplx c) {
    if (c == cplx{1.0}) return x;
    if (c == cplx{}) return constant(0.0);
    return multiply(x, constant(c), MulMode::Multiply);
  }

  // Lays out wires for a two-operand block: child outputs first, then the
  // injected constants.
  Block two_operand(const std::string& label, const Operand& x, const Operand& y, int& wx, int& wy) {
    Block b;
    b.label = label;
    int wire = 0;
    if (x.block) {
      b.children.push_back(*x.block);
      wx = wire++;
    }
    if (y.block) {
      b.children.push_back(*y.block);
      wy = wire++;
    }
    if (!x.block) {
      wx = wire++;
      b.steps.push_back(inject_constant(wx, {x.constant, 1.0}));
    }
    if (!y.block) {
      wy = wire++;
      b.steps.push_back(inject_constant(wy, {y.constant, 1.0}));
    }
    return b;
  }

  Operand multiply(const Operand& x, const Operand& y, MulMode mode) {
    int wx = 0, wy = 0;
    Block b = two_operand(mode == MulMode::Multiply ? "multiply" : "divide", x, y, wx, wy);
    b.steps.push_back(apply(multiply_logic(), {wx, wy}));
    b.steps.push_back(select(wy, mode == MulMode::Multiply ? 0 : 1));
    const FieldElement v = mode == MulMode::Multiply ? x.value * y.value : x.value / y.value;
    return {plan_.add_block(std::move(b)), {}, v};
  }

  Operand add(const Operand& x, const Operand& y, AddMode mode) {
    int wx = 0, wy = 0;
    Block b = two_operand(mode == AddMode::Add ? "add" : "subtract", x, y, wx, wy);
    b.steps.push_back(apply(gates::X(), {wx}));
    b.steps.push_back(apply(add_logic(), {wx, wy}));
    b.steps.push_back(select(wx, mode == AddMode::Add ? 0 : 1));
    const FieldElement v = mode == AddMode::Add ? x.value + y.value : y.value - x.value;
    return {plan_.add_block(std::move(b)), {}, v};
  }

  Operand invert(const Operand& x) {
    if (x.value.is_zero()) throw SynthesisError("expression inverts zero");
    Block b{"invert", {*x.block}, {apply(gates::X(), {0})}};
    return {plan_.add_block(std::move(b)), {}, x.value.inverse()};
  }

  CircuitPlan& plan_;
};

}  // namespace

Synthesis synthesize_single(const ExprPtr& expr) {
  Synthesis out;
  Compiler c(out.plan);
  Operand root;
  try {
    root = c.compile(expr);
  } catch (const DomainError& e) {
    throw SynthesisError(std::string("expression is not an element of M: ") + e.what());
  }
  out.plan.root = c.materialize(root);
  out.plan.description = "single-qubit state for " + print_expression(expr);
  out.target = root.value;
  out.state = run_symbolic(out.plan);
  return out;
}

MultiSynthesis synthesize_multi(const std::vector<FieldElement>& targets) {
  std::size_t dim = targets.size() + 1;
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim || n < 2) throw DomainError("need 2^n - 1 targets with n >= 2");
  if (n + 1 > kMaxQubits) throw CapacityError("too many qubits for synthesize_multi");

  MultiSynthesis out;
  CircuitPlan& plan = out.plan;
  Block balanced;
  balanced.label = "balanced";
  for (int q = 0; q < n; ++q) balanced.steps.push_back(inject_constant(q, Homogeneous::infinity()));
  for (int q = 0; q < n; ++q) balanced.steps.push_back(apply(gates::H(), {q}));
  int current = plan.add_block(std::move(balanced));

  for (std::size_t k = 0; k < targets.size(); ++k) {
    if ((targets[k] - FieldElement(1.0)).is_zero()) continue;
    const Synthesis aux = synthesize_single(from_field(targets[k]));
    const int aux_root = graft(plan, aux.plan);
    const GeneralStage stage = general_stage(BasicKind::Multiply, n, k);
    std::vector<int> wires{n};
    for (int q = 0; q < n; ++q) wires.push_back(q);
    Block b{"multiply_basis_" + std::to_string(k), {current, aux_root}, {apply(stage.op, wires), select(n, 1)}};
    current = plan.add_block(std::move(b));
  }
  plan.root = current;
  plan.description = std::to_string(n) + "-qubit state from the balanced start";
  out.state = run_symbolic(plan);
  return out;
}

// ---------------------------------------------------------------- canned circuits

CircuitPlan example_coin_plan() {
  CircuitPlan plan;
  const Operator logic = photonic_logic(gates::I(), gates::X(), gates::X() * gates::H()).named("example_coin_logic");
  plan.root = plan.add_block({"example_coin", {}, {inject_quoin(0), inject_quoin(1), apply(logic, {0, 1}), select(1, 0)}});
  plan.description = "(2p-1)|0> + |1> from two quoins";
  return plan;
}

CircuitPlan g_state_plan() {
  CircuitPlan plan;
  plan.root = plan.add_block({"g_state",
                              {},
                              {inject_quoin(0), inject_quoin(1), apply(gates::CNOT(), {0, 1}), apply(gates::H(), {0}),
                               apply(gates::CNOT(), {0, 1}), select(1, 1)}});
  plan.description = "sqrt(4p(1-p))|0> + (2p-1)|1>";
  return plan;
}

CircuitPlan p_state_plan() {
  using namespace gates;
  const Operator logic = (kron(H() * M0(), H() * M0()) + kron(M1() * Md() * M1(), X())).named("p_state_logic");
  CircuitPlan plan;
  plan.root = plan.add_block({"p_state", {}, {inject_quoin(0), inject_quoin(1), apply(logic, {0, 1}), select(1, 0)}});
  plan.description = "p|0> + |1>";
  return plan;
}

namespace {

BuildResult build(const CircuitPlan& plan, double p, Rng& rng, const SampleOptions& options) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
  BuildResult r;
  r.ledger.loss_survival = options.loss_survival;
  r.state = run_sampled(plan, p, rng, r.ledger, options);
  r.ledger.outputs_produced = 1;
  r.attempts = r.ledger.attempts;
  return r;
}

}  // namespace

BuildResult build_example_coin(double p, Rng& rng, const SampleOptions& options) {
  static const CircuitPlan plan = example_coin_plan();
  return build(plan, p, rng, options);
}

BuildResult build_g_state(double p, Rng& rng, const SampleOptions& options) {
  static const CircuitPlan plan = g_state_plan();
  return build(plan, p, rng, options);
}

BuildResult build_p_state(double p, Rng& rng, const SampleOptions& options) {
  static const CircuitPlan plan = p_state_plan();
  return build(plan, p, rng, options);
}

}  // namespace qbf

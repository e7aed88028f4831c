#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "qbf/constructor.hpp"
#include "qbf/errors.hpp"

using namespace qbf;

namespace {

const cplx I1{0.0, 1.0};

NumericState st(cplx h) { return make_constant_state(h); }

cplx value(const NumericState& s) { return relative_amplitude(s).value(); }

double pr_m(cplx h1, cplx h2) {
  return (std::norm(h1 * h2) + 1) / (8 * (std::norm(h1) + 1) * (std::norm(h2) + 1));
}
double pr_a(cplx h1, cplx h2) {
  return (std::norm(h1 + h2) + 1) / (16 * (std::norm(h1) + 1) * (std::norm(h2) + 1));
}

struct Row {
  const char* label;
  cplx h1, h2, printed;
};

// Rows of the multiply and add tables whose printed result agrees with the
// printed inputs. C2M, C3A, C5A and C9A do not and are left out.
const Row kMulRows[] = {
    {"D1M", 1, 1, 1},           {"D2M", 1, -1, -1},          {"D3M", -1, 1, -1},
    {"D4M", -1, -1, 1},         {"H1M", 0, 0, 0},            {"H2M", 0, 1, 0},
    {"H3M", 0, 5, 0},           {"H4M", 0, 10, 0},           {"L1M", I1, I1, -1},
    {"L2M", I1, -I1, 1},        {"L3M", -I1, I1, 1},         {"L4M", -I1, -I1, -1},
    {"R1M", 0.663, 0.682, 0.452}, {"R2M", 0.080, 0.830, 0.066}, {"R3M", 0.700, 0.900, 0.630},
    {"R4M", 0.217, 0.467, 0.101}, {"R5M", 0.024, 0.719, 0.017},
    {"C1M", {-0.080, -0.093}, {-0.553, -0.821}, {-0.031, 0.117}},
    {"C3M", {-0.385, -0.934}, {-0.050, -0.155}, {-0.125, 0.107}},
    {"C4M", {-0.172, -0.784}, {-0.019, -0.353}, {-0.273, 0.075}},
    {"C5M", {0.876, 0.182}, {-0.184, -0.893}, {-0.001, -0.816}},
    {"C6M", {1.611, -1.658}, {1.119, -1.065}, {0.036, -3.576}},
    {"C7M", {1.229, 0.240}, {-0.064, -0.255}, {-0.017, -0.329}},
};

const Row kAddRows[] = {
    {"D1A", -1, 1, 0},          {"D2A", 1, 1, 2},            {"D3A", -1, -1, -2},
    {"H1A", 0, 0, 0},           {"L1A", I1, I1, 2.0 * I1},   {"L2A", -I1, -I1, -2.0 * I1},
    {"R1A", 0.5, 0.5, 1},       {"R2A", -5.347, -3.168, -8.515}, {"R3A", -8.166, -0.945, -9.111},
    {"R4A", -2.140, -1.881, -4.021}, {"R5A", -1.418, -6.335, -7.753}, {"R6A", -7.123, 0.038, -7.085},
    {"R7A", 0.256, -1.125, -0.869},
    {"C1A", {-0.400, 2.288}, {0.336, 0.948}, {-0.065, 3.237}},
    {"C2A", {-0.693, 2.360}, {0.595, 1.105}, {-0.096, 3.465}},
    {"C4A", {0.853, 1.024}, {1.945, -0.880}, {2.801, 0.143}},
    {"C6A", {-0.338, 0.836}, {0.309, 0.981}, {-0.028, 1.819}},
    {"C7A", {0.794, -0.024}, {0.904, -0.080}, {1.699, -0.106}},
    {"C8A", {0.136, 0.090}, {-0.119, -0.911}, {0.018, -0.823}},
};

// Printed inputs and outputs carry three decimals; sums and products of
// rounded inputs can drift by a few units in the last place.
constexpr double kTableTol = 6e-3;

}  // namespace

TEST_CASE("multiply_states reproduces the multiply table") {
  for (const Row& r : kMulRows) {
    CAPTURE(r.label);
    const auto [out, prob] = multiply_forced(st(r.h1), st(r.h2), MulMode::Multiply);
    CHECK(std::abs(value(out) - r.h1 * r.h2) < 1e-12);
    CHECK(std::abs(value(out) - r.printed) < kTableTol);
    CHECK(prob == doctest::Approx(pr_m(r.h1, r.h2)).epsilon(1e-12));
  }
}

TEST_CASE("add_states reproduces the add table") {
  for (const Row& r : kAddRows) {
    CAPTURE(r.label);
    const auto [out, prob] = add_forced(st(r.h1), st(r.h2), AddMode::Add);
    CHECK(std::abs(value(out) - (r.h1 + r.h2)) < 1e-12);
    CHECK(std::abs(value(out) - r.printed) < kTableTol);
    CHECK(prob == doctest::Approx(pr_a(r.h1, r.h2)).epsilon(1e-12));
  }
}

TEST_CASE("infinity marker rows of the add table") {
  const auto inf = make_constant_state(Homogeneous::infinity());
  for (cplx h2 : {cplx{0.01}, cplx{0.1}, cplx{100.0}}) {
    const auto out = add_forced(inf, st(h2), AddMode::Add).first;
    CHECK(std::abs(out[1]) < 1e-12);
  }
  const auto out = add_forced(st(0.01), inf, AddMode::Add).first;
  CHECK(std::abs(out[1]) < 1e-12);
  CHECK_THROWS_AS(add_forced(inf, inf, AddMode::Add), DegenerateInputError);
}

TEST_CASE("divide and subtract modes") {
  const auto d = multiply_forced(st(3.0), st(2.0), MulMode::Divide).first;
  CHECK(std::abs(value(d) - 1.5) < 1e-12);
  CHECK_THROWS_AS(multiply_forced(st(1.0), st(0.0), MulMode::Divide), DegenerateInputError);
  const auto s = add_forced(st(3.0), st(2.0), AddMode::Subtract).first;
  CHECK(std::abs(value(s) - (-1.0)) < 1e-12);
  CHECK_THROWS_AS(multiply_forced(st(0.0), make_constant_state(Homogeneous::infinity()), MulMode::Multiply),
                  DegenerateInputError);
}

TEST_CASE("invert_state") {
  CHECK(std::abs(value(invert_state(st(1.0))) - 1.0) < 1e-12);
  CHECK(std::abs(value(invert_state(make_quoin(0.2))) - 2.0) < 1e-12);
  const auto x = st({0.3, -1.2});
  CHECK(std::abs(value(invert_state(invert_state(x))) - cplx{0.3, -1.2}) < 1e-12);
  CHECK(relative_amplitude(invert_state(st(0.0))).is_infinite());
}

TEST_CASE("sampled multiply/add success frequencies match Pr_m and Pr_a") {
  const cplx grid[] = {0.0, 0.5, {0.0, 1.0}, -1.3, {0.7, -0.4}};
  Rng rng(31);
  const int shots = 20000;
  for (cplx h1 : grid)
    for (cplx h2 : grid) {
      int m = 0, a = 0;
      for (int i = 0; i < shots; ++i) {
        m += multiply_states(st(h1), st(h2), MulMode::Multiply, rng).state.has_value();
        a += add_states(st(h1), st(h2), AddMode::Add, rng).state.has_value();
      }
      const double qm = pr_m(h1, h2), qa = pr_a(h1, h2);
      CHECK(std::abs(m / double(shots) - qm) <= 4 * std::sqrt(qm * (1 - qm) / shots));
      CHECK(std::abs(a / double(shots) - qa) <= 4 * std::sqrt(qa * (1 - qa) / shots));
    }
}

TEST_CASE("apply_basic_general") {
  // (h0, h1, h2) = (2, 1, 1) as amplitudes (2, 1, 1, 1)
  const SymbolicState k(2, {FieldElement(2.0), FieldElement(1.0), FieldElement(1.0), FieldElement(1.0)});
  const auto added =
      apply_basic_general_forced(BasicKind::Add, k, make_symbolic_constant_state({3.0, 1.0}), 0).first;
  const auto h = relative_amplitudes(added);
  CHECK((h[0] - FieldElement(5.0)).is_zero());
  CHECK((h[1] - FieldElement(1.0)).is_zero());
  CHECK((h[2] - FieldElement(1.0)).is_zero());

  for (std::size_t b = 0; b < 3; ++b) {
    const auto same =
        apply_basic_general_forced(BasicKind::Multiply, k, make_symbolic_constant_state({1.0, 1.0}), b).first;
    const auto hs = relative_amplitudes(same);
    for (std::size_t i = 0; i < 3; ++i) CHECK((hs[i] - relative_amplitudes(k)[i]).is_zero());
  }

  // single-qubit register (s) with aux |s>
  const SymbolicState q = make_symbolic_quoin();
  const auto inv = apply_basic_general_forced(BasicKind::Inverse, q, make_symbolic_quoin(), 0).first;
  CHECK(std::abs(relative_amplitudes(inv)[0].eval(0.2) - 2.0) < 1e-12);

  const SymbolicState z(2, {FieldElement(0.0), FieldElement(1.0), FieldElement(1.0), FieldElement(1.0)});
  CHECK_THROWS_AS(apply_basic_general_forced(BasicKind::Inverse, z, make_symbolic_constant_state({0.0, 1.0}), 0),
                  DegenerateInputError);
  CHECK_THROWS_AS(apply_basic_general_forced(BasicKind::Multiply, k, make_symbolic_quoin(), 3), DomainError);
}

TEST_CASE("apply_basic_general locality") {
  Rng rng(17);
  const FieldElement s = FieldElement::s(), p = FieldElement::p();
  const std::vector<FieldElement> pool = {s, p, 1.0 + s, 2.0 * p - 1.0, s * p + cplx{0.0, 1.0}, (1.0 - s) / (2.0 + p)};
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng() % 2);
    std::vector<FieldElement> amps;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) amps.push_back(pool[rng() % pool.size()]);
    const SymbolicState k(n, amps);
    const std::size_t target = rng() % ((std::size_t{1} << n) - 1);
    const BasicKind kind = static_cast<BasicKind>(rng() % 3);
    const FieldElement l = pool[rng() % pool.size()];
    const auto before = relative_amplitudes(k);
    const SymbolicState aux =
        kind == BasicKind::Inverse ? SymbolicState(1, {before[target], 1.0}) : SymbolicState(1, {l, 1.0});
    const auto after = relative_amplitudes(apply_basic_general_forced(kind, k, aux, target).first);
    for (int r = 0; r < 10; ++r) {
      const double x = 0.05 + 0.9 * u01(rng);
      for (std::size_t i = 0; i < before.size(); ++i) {
        const cplx b = before[i].eval(x), a = after[i].eval(x);
        if (i != target) {
          CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
          continue;
        }
        const cplx lv = l.eval(x);
        const cplx want = kind == BasicKind::Inverse ? 1.0 / b : kind == BasicKind::Multiply ? b * lv : b + lv;
        CHECK(std::abs(a - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("apply_basic_general sampled run agrees with the forced branch") {
  Rng rng(2);
  const NumericState k(2, {0.5, {0.1, 0.3}, 0.2, 0.4});
  const auto kn = normalized(k);
  const auto aux = st(0.7);
  const auto forced = apply_basic_general_forced(BasicKind::Add, kn, aux, 1);
  int ok = 0;
  const int shots = 20000;
  for (int i = 0; i < shots; ++i) {
    const auto r = apply_basic_general(BasicKind::Add, kn, aux, 1, rng);
    if (!r.state) continue;
    ++ok;
    CHECK(state_fidelity(*r.state, forced.first) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const double q = forced.second;
  CHECK(std::abs(ok / double(shots) - q) <= 4 * std::sqrt(q * (1 - q) / shots));
}

TEST_CASE("synthesize_single examples") {
  const auto s = synthesize_single(sym_s());
  CHECK(s.plan.quoins_per_attempt() == 1);
  CHECK(s.plan.operation_count() == 0);

  const auto f = synthesize_single(parse_expression("(s*s-1)/(s*s+1)"));
  CHECK((f.target - (2.0 * FieldElement::p() - 1.0)).is_zero());
  // two-quoin multiplies, two constant adds, an inversion and a final multiply
  int mul = 0, add = 0, inv = 0;
  for (const auto& b : f.plan.blocks) {
    mul += b.label == "multiply";
    add += b.label == "add";
    inv += b.label == "invert";
  }
  CHECK(mul == 3);
  CHECK(add == 2);
  CHECK(inv == 1);
  for (double p : {0.1, 0.5, 0.8}) CHECK(std::abs(value(run_forced(f.plan, p)) - (2 * p - 1)) < 1e-10);

  const auto pp = synthesize_single(sym_p());
  CHECK(pp.plan.blocks.size() == 1);
  CHECK(pp.plan.blocks[0].label == "p_state");

  CHECK_THROWS_AS(synthesize_single(parse_expression("1/(s-s)")), SynthesisError);
  CHECK_THROWS_AS(synthesize_single(parse_expression("p/0")), SynthesisError);
}

TEST_CASE("synthesis soundness on random expressions") {
  Rng rng(404);
  std::function<ExprPtr(int)> gen = [&](int d) -> ExprPtr {
    const auto r = rng() % 10;
    if (d == 0 || r < 3) {
      const auto leaf = rng() % 4;
      if (leaf == 0) return sym_p();
      if (leaf == 1) return sym_s();
      return number(static_cast<double>(static_cast<int>(rng() % 7) - 3));
    }
    if (r == 3) return neg(gen(d - 1));
    const Expr::Kind kinds[] = {Expr::Kind::Add, Expr::Kind::Sub, Expr::Kind::Mul, Expr::Kind::Div};
    return binary(kinds[rng() % 4], gen(d - 1), gen(d - 1));
  };
  int checked = 0;
  while (checked < 200) {
    const ExprPtr e = gen(4);
    Synthesis syn;
    try {
      syn = synthesize_single(e);
    } catch (const SynthesisError&) {
      continue;
    }
    ++checked;
    for (int k = 0; k < 10; ++k) {
      const double p = 0.05 + 0.9 * u01(rng);
      const cplx want = eval_expression(e, p);
      if (std::abs(want) > 1e6) continue;
      const Homogeneous sym{syn.state[0].eval(p), syn.state[1].eval(p)};
      if (std::abs(sym.value() - want) > 1e-8 * std::max(1.0, std::abs(want))) MESSAGE(print_expression(e) << " p=" << p << " want=" << want << " st0=" << syn.state[0] << " st1=" << syn.state[1]);
      CHECK(std::abs(sym.value() - want) <= 1e-8 * std::max(1.0, std::abs(want)));
      CHECK(std::abs(value(run_forced(syn.plan, p)) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("synthesize_multi") {
  const auto unit = synthesize_multi({1.0, 1.0, 1.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(unit.state[i].eval(0.3) - 1.0) < 1e-12);

  const FieldElement p = FieldElement::p();
  const auto m = synthesize_multi({2.0 * p - 1.0, p, 1.0});
  const auto h = relative_amplitudes(m.state);
  for (double x : {0.15, 0.4, 0.77}) {
    CHECK(std::abs(h[0].eval(x) - (2 * x - 1)) < 1e-8);
    CHECK(std::abs(h[1].eval(x) - x) < 1e-8);
    CHECK(std::abs(h[2].eval(x) - 1.0) < 1e-8);
    const auto num = run_forced(m.plan, x);
    const NumericState want = normalized(NumericState(2, {2 * x - 1, x, 1.0, 1.0}));
    CHECK(state_fidelity(num, want) == doctest::Approx(1.0).epsilon(1e-8));
  }

  // |psi_2> ratios with |00> and |11> exchanged so the last amplitude is nonzero.
  const FieldElement s = FieldElement::s();
  const FieldElement k00 = 1.0 / std::sqrt(2.0) * (p + (1.0 - p));
  const FieldElement k01 = std::sqrt(2.0) * s * (1.0 - p);
  const FieldElement k10 = (p - (1.0 - p)) / std::sqrt(2.0);
  const auto g = synthesize_multi({FieldElement(0.0), k01 / k00, k10 / k00});
  const Operator swap = gates::basis_swap(2, 0, 3);
  for (double x : {0.3, 0.6}) {
    const auto out = apply_operator(run_forced(g.plan, x), swap, {0, 1});
    const double w = std::sqrt(x * (1 - x));
    const NumericState want = normalized(NumericState(2, {1.0, 2 * w, 2 * x - 1, 0.0}));
    CHECK(state_fidelity(out, want) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(synthesize_multi({1.0, 1.0}), DomainError);
}

TEST_CASE("canned circuits") {
  Rng rng(12);
  const auto half = build_example_coin(0.5, rng);
  CHECK(std::abs(half.state[0]) < 1e-12);
  CHECK(half.ledger.quoins_consumed == 2 * half.attempts);
  CHECK(std::abs(value(build_example_coin(1.0, rng).state) - 1.0) < 1e-12);
  CHECK(std::abs(value(build_example_coin(0.0, rng).state) + 1.0) < 1e-12);
  CHECK(run_forced(example_coin_plan(), 0.5).success_prob() == doctest::Approx(1.0 / 16).epsilon(1e-12));
  for (double p : {0.0, 0.2, 0.7, 1.0})
    CHECK(run_forced(example_coin_plan(), p).success_prob() ==
          doctest::Approx((std::pow(2 * p - 1, 2) + 1) / 16).epsilon(1e-12));

  for (double p : {0.0, 0.3, 0.5, 1.0}) {
    const auto g = run_forced(g_state_plan(), p);
    CHECK(std::norm(g[0]) == doctest::Approx(4 * p * (1 - p)).epsilon(1e-12));
    CHECK(g.success_prob() == doctest::Approx(0.5).epsilon(1e-12));
  }

  CHECK(std::abs(value(build_p_state(0.5, rng).state) - 0.5) < 1e-12);
  CHECK(std::abs(value(run_forced(p_state_plan(), 1.0 - 1e-9)) - 1.0) < 1e-8);
  const auto sym = run_symbolic(p_state_plan());
  CHECK((sym[0] / sym[1] - FieldElement::p()).is_zero());

  const auto sym_coin = run_symbolic(example_coin_plan());
  CHECK((sym_coin[0] / sym_coin[1] - (2.0 * FieldElement::p() - 1.0)).is_zero());
}

TEST_CASE("example coin per-attempt success rate") {
  Rng rng(77);
  ConsumptionLedger total;
  const int outputs = 20000;
  for (int i = 0; i < outputs; ++i) total += build_example_coin(0.5, rng).ledger;
  const double rate = outputs / double(total.attempts);
  const double sigma = std::sqrt(0.0625 * 0.9375 / double(total.attempts));
  CHECK(std::abs(rate - 0.0625) <= 4 * sigma);
  CHECK(expected_quoins(example_coin_plan(), 0.5) == doctest::Approx(32.0));
  CHECK(expected_quoins(example_coin_plan(), 0.5, 0.6) == doctest::Approx(32.0 / 0.6));
}

TEST_CASE("plan JSON") {
  const std::string j = to_json(example_coin_plan());
  CHECK(j.find("\"quoins_per_attempt\": 2") != std::string::npos);
  CHECK(j.find("postselect") != std::string::npos);
}

TEST_CASE("attempt cap") {
  Rng rng(1);
  ConsumptionLedger ledger;
  SampleOptions opt;
  opt.attempt_cap = 3;
  opt.loss_survival = 1e-9;
  CHECK_THROWS_AS(run_sampled(example_coin_plan(), 0.5, rng, ledger, opt), AttemptCapExceeded);
}

#include "qbf/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "qbf/classical_factory.hpp"
#include "qbf/constructor.hpp"
#include "qbf/errors.hpp"

namespace qbf {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double round12(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

ojson num(double x) { return std::isfinite(x) ? ojson(round12(x)) : ojson(); }

std::uint64_t blocks_for(std::uint64_t shots) { return (shots + kShotsPerBlock - 1) / kShotsPerBlock; }

std::uint64_t block_shots(std::uint64_t shots, std::uint64_t block) {
  return std::min(kShotsPerBlock, shots - block * kShotsPerBlock);
}

void validate(const RunOptions& opt) {
  if (opt.shots == 0) throw DomainError("shots must be at least 1");
  if (!(opt.loss_survival > 0.0 && opt.loss_survival <= 1.0)) throw DomainError("loss survival must lie in (0,1]");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> Grid::points() const {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop)) throw DomainError("grid must satisfy 0 <= start <= stop <= 1");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> ps;
  for (std::size_t i = 0; i <= n; ++i) ps.push_back(std::min(stop, round12(start + static_cast<double>(i) * step)));
  return ps;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- targets

CoinTarget parse_coin_target(const std::string& text) {
  CoinTarget t;
  t.name = text;
  if (text == "fc") {
    t.kind = CoinTarget::Kind::Fc;
  } else if (text == "g1") {
    t.kind = CoinTarget::Kind::G1;
  } else if (text == "g2") {
    t.kind = CoinTarget::Kind::G2;
  } else if (text == "g3") {
    t.kind = CoinTarget::Kind::G3;
  } else if (text.rfind("fa:", 0) == 0) {
    t.kind = CoinTarget::Kind::Fa;
    std::size_t used = 0;
    try {
      t.a = std::stod(text.substr(3), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 3 || !(t.a >= 0.0 && t.a <= 1.0))
      throw DomainError("fa:<a> needs a number a in [0,1]");
  } else {
    throw DomainError("unknown coin '" + text + "' (expected fc, g1, g2, g3 or fa:<a>)");
  }
  return t;
}

CoinTarget expr_target(const std::string& text) {
  CoinTarget t;
  t.kind = CoinTarget::Kind::Expr;
  t.expr = parse_expression(text);
  t.name = print_expression(t.expr);
  return t;
}

CoinFunction coin_function(const CoinTarget& t) {
  switch (t.kind) {
    case CoinTarget::Kind::Fc:
      return fc_coin();
    case CoinTarget::Kind::G1:
    case CoinTarget::Kind::G2:
    case CoinTarget::Kind::G3:
      return g_coin_from_psi2();
    case CoinTarget::Kind::Fa:
      return fa_coin(t.a);
    case CoinTarget::Kind::Expr:
      return amplitude_coin(to_field(t.expr));
  }
  throw DomainError("unknown coin target");
}

// ---------------------------------------------------------------- sweep

namespace {

struct Tally {
  std::uint64_t outputs = 0;
  std::uint64_t heads = 0;
  std::uint64_t quoins = 0;
};

// Everything a block needs at one grid point, computed once.
struct PointPlan {
  double p = 0.0;
  double theoretical = kNaN;
  double success_prob = kNaN;
  bool feasible = true;
  NumericState fa_state;
};

double g1_round_success(double p) {
  const double m = 2 * p * (1 - p), n = 0.5 - m;
  const double s = m / (1 + m), t = n / (1 + n);
  return s * (1 - t) + (1 - s) * t;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunOptions& opt, const CoinTarget& target) {
  validate(opt);
  const std::vector<double> ps = opt.grid.points();
  const CoinFunction coin = coin_function(target);
  std::optional<CircuitPlan> plan;
  if (target.kind == CoinTarget::Kind::Fc) plan = example_coin_plan();
  if (target.kind == CoinTarget::Kind::Expr) plan = synthesize_single(target.expr).plan;

  std::vector<PointPlan> points(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    PointPlan& pt = points[i];
    pt.p = ps[i];
    try {
      pt.theoretical = eval_coin(coin, pt.p);
    } catch (const EvaluationError&) {
    }
    switch (target.kind) {
      case CoinTarget::Kind::Fc:
      case CoinTarget::Kind::Expr:
        try {
          const double q = plan->quoins_per_attempt();
          pt.success_prob = q / expected_quoins(*plan, pt.p, opt.loss_survival);
          pt.feasible = run_forced(*plan, pt.p).success_prob() > 1e-12;
        } catch (const PostselectionError&) {
          pt.success_prob = 0.0;
          pt.feasible = false;
        }
        break;
      case CoinTarget::Kind::G1:
        pt.success_prob = g1_round_success(pt.p);
        break;
      case CoinTarget::Kind::G2:
      case CoinTarget::Kind::G3:
        pt.success_prob = 0.5;
        break;
      case CoinTarget::Kind::Fa:
        pt.success_prob = 1.0;
        pt.fa_state = apply_operator(make_quoin(pt.p), gates::Ua(target.a), {0});
        break;
    }
  }

  const std::uint64_t nb = blocks_for(opt.shots);
  std::vector<Tally> tallies(ps.size() * nb);
  SampleOptions so;
  so.loss_survival = opt.loss_survival;
  parallel_for(tallies.size(), opt.threads, [&](std::size_t task) {
    const std::size_t i = task / nb;
    const std::uint64_t b = task % nb;
    const PointPlan& pt = points[i];
    if (!pt.feasible) return;
    Rng rng(derive_seed(opt.seed, "coin", i, b));
    Tally& t = tallies[task];
    for (std::uint64_t k = 0, n = block_shots(opt.shots, b); k < n; ++k) {
      bool head = false;
      switch (target.kind) {
        case CoinTarget::Kind::Fc:
        case CoinTarget::Kind::Expr: {
          ConsumptionLedger ledger;
          const NumericState st = run_sampled(*plan, pt.p, rng, ledger, so);
          head = sample_measure(st, rng) == 0;
          t.quoins += ledger.quoins_consumed;
          break;
        }
        case CoinTarget::Kind::G1:
        case CoinTarget::Kind::G2:
        case CoinTarget::Kind::G3: {
          const ProtocolResult r = target.kind == CoinTarget::Kind::G1   ? g_protocol1(pt.p, rng)
                                   : target.kind == CoinTarget::Kind::G2 ? g_protocol2(pt.p, rng)
                                                                         : g_protocol3(pt.p, rng);
          head = r.head;
          t.quoins += r.quoins;
          break;
        }
        case CoinTarget::Kind::Fa:
          // U_a sends the quoin's weight f_a(p) to |1>.
          head = sample_measure(pt.fa_state, rng) == 1;
          t.quoins += 1;
          break;
      }
      ++t.outputs;
      t.heads += head;
    }
  });

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Tally total;
    for (std::uint64_t b = 0; b < nb; ++b) {
      total.outputs += tallies[i * nb + b].outputs;
      total.heads += tallies[i * nb + b].heads;
      total.quoins += tallies[i * nb + b].quoins;
    }
    SweepRow r;
    r.p = ps[i];
    r.theoretical = points[i].theoretical;
    r.success_prob = points[i].success_prob;
    r.seed = opt.seed;
    if (total.outputs == 0) {
      r.estimate = r.stddev = r.quoins_mean = kNaN;
    } else {
      const double n = static_cast<double>(total.outputs);
      r.estimate = static_cast<double>(total.heads) / n;
      r.stddev = std::sqrt(r.estimate * (1 - r.estimate) / n);
      r.quoins_mean = static_cast<double>(total.quoins) / n;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<CostRow> run_cost(const RunOptions& opt, double eps_c) {
  validate(opt);
  const std::vector<double> ps = opt.grid.points();
  const std::uint64_t nb = blocks_for(opt.shots);
  struct Sums {
    double sum = 0.0, sum2 = 0.0;
  };
  std::vector<Sums> sums(ps.size() * nb);
  SampleOptions so;
  so.loss_survival = opt.loss_survival;
  parallel_for(sums.size(), opt.threads, [&](std::size_t task) {
    const std::size_t i = task / nb;
    const std::uint64_t b = task % nb;
    Rng rng(derive_seed(opt.seed, "cost", i, b));
    for (std::uint64_t k = 0, n = block_shots(opt.shots, b); k < n; ++k) {
      const double q = static_cast<double>(build_example_coin(ps[i], rng, so).ledger.quoins_consumed);
      sums[task].sum += q;
      sums[task].sum2 += q * q;
    }
  });
  std::vector<CostRow> rows;
  const double n = static_cast<double>(opt.shots);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t b = 0; b < nb; ++b) s += sums[i * nb + b].sum, s2 += sums[i * nb + b].sum2;
    const AdvantageReport a = advantage_compare(ps[i], eps_c, opt.loss_survival);
    CostRow r;
    r.p = ps[i];
    r.eps_c = eps_c;
    r.loss_survival = opt.loss_survival;
    r.quantum_predicted = a.quantum;
    r.quantum_mean = s / n;
    const double var = n > 1 ? (s2 - n * r.quantum_mean * r.quantum_mean) / (n - 1) : 0.0;
    r.quantum_stddev = std::sqrt(std::max(var, 0.0) / n);
    r.classical = a.classical;
    r.ratio = a.ratio;
    r.seed = opt.seed;
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------- emitters

namespace {

template <class Row>
std::string emit(const std::vector<Row>& rows, OutputFormat format, const std::vector<std::string>& keys,
                 const std::function<std::vector<double>(const Row&)>& values) {
  if (rows.empty()) throw DomainError("no rows to report");
  if (format == OutputFormat::Json) {
    ojson arr = ojson::array();
    for (const Row& r : rows) {
      ojson o;
      const auto v = values(r);
      for (std::size_t k = 0; k < v.size(); ++k) o[keys[k]] = num(v[k]);
      o["seed"] = r.seed;
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (const auto& k : keys) out += k + ",";
  out += "seed\n";
  for (const Row& r : rows) {
    for (double v : values(r)) out += format_number(v) + ",";
    out += std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace

std::string emit_report(const std::vector<SweepRow>& rows, OutputFormat format) {
  return emit<SweepRow>(rows, format, {"p", "theoretical", "estimate", "stddev", "success_prob", "quoins_mean"},
                        [](const SweepRow& r) {
                          return std::vector<double>{r.p,      r.theoretical,  r.estimate,
                                                     r.stddev, r.success_prob, r.quoins_mean};
                        });
}

std::string emit_cost(const std::vector<CostRow>& rows, OutputFormat format) {
  return emit<CostRow>(rows, format,
                       {"p", "eps_c", "loss", "quantum_predicted", "quantum_mean", "quantum_stddev", "classical",
                        "ratio"},
                       [](const CostRow& r) {
                         return std::vector<double>{r.p,           r.eps_c,          r.loss_survival,
                                                    r.quantum_predicted, r.quantum_mean, r.quantum_stddev,
                                                    r.classical,   r.ratio};
                       });
}

std::string check_report(const CoinTarget& target) {
  const CoinFunction f = coin_function(target);
  ojson j;
  j["target"] = target.name;
  j["domain"] = {f.domain.lo, f.domain.hi};
  j["cbf"] = ojson::parse(to_json(cbf_check(f)));
  j["spb"] = ojson::parse(to_json(spb_check(f)));
  return j.dump(2) + "\n";
}

std::string construct_report(const std::string& expr_text, const Grid& grid) {
  const ExprPtr e = parse_expression(expr_text);
  const Synthesis syn = synthesize_single(e);
  ojson j;
  j["expression"] = print_expression(e);
  j["canonical"] = print_expression(from_field(syn.target));
  j["quoins_per_attempt"] = syn.plan.quoins_per_attempt();
  j["operations"] = syn.plan.operation_count();
  j["plan"] = ojson::parse(to_json(syn.plan));
  ojson pts = ojson::array();
  for (double p : grid.points()) {
    ojson o;
    o["p"] = num(p);
    try {
      const cplx h = syn.target.eval(p);
      o["h_re"] = num(h.real());
      o["h_im"] = num(h.imag());
    } catch (const EvaluationError&) {
      o["h_re"] = o["h_im"] = nullptr;  // pole: the output is |0>
    }
    try {
      const NumericState out = run_forced(syn.plan, p);
      o["success_prob"] = num(out.success_prob());
      o["expected_quoins"] = num(expected_quoins(syn.plan, p));
      o["relative_amplitude"] = {num(relative_amplitude(out).k0.real()), num(relative_amplitude(out).k0.imag()),
                                 num(relative_amplitude(out).k1.real()), num(relative_amplitude(out).k1.imag())};
    } catch (const PostselectionError&) {
      o["success_prob"] = 0.0;
      o["expected_quoins"] = nullptr;
      o["relative_amplitude"] = nullptr;
    }
    pts.push_back(o);
  }
  j["grid"] = pts;
  return j.dump(2) + "\n";
}

std::string fidelity_report(const TruthTable& hv, const TruthTable& da) {
  const double f_hv = classical_fidelity(hv), f_da = classical_fidelity(da);
  const auto [lo, hi] = process_fidelity_bounds(f_hv, f_da);
  ojson j;
  j["f_hv"] = num(f_hv);
  j["f_da"] = num(f_da);
  j["process_lower"] = num(lo);
  j["process_upper"] = num(hi);
  j["average_lower"] = num(average_fidelity(lo, 4));
  j["average_upper"] = num(average_fidelity(hi, 4));
  j["tables"] = {ojson::parse(to_json(hv)), ojson::parse(to_json(da))};
  return j.dump(2) + "\n";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace qbf

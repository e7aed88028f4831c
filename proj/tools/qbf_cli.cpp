// qbf: command-line front end for sweeps, cost tables, feasibility checks,
// circuit synthesis and truth-table fidelities.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 1 otherwise.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qbf/errors.hpp"
#include "qbf/fidelity_eval.hpp"
#include "qbf/report.hpp"

using namespace qbf;

namespace {

constexpr int kConfigError = 2;
constexpr int kDataError = 3;

struct Flags {
  RunOptions run;
  std::string out;
  std::string format = "csv";
  std::string expr;
  std::string coin = "fc";
  double eps_c = 0.0221;
  std::string hv, da;
  double noise = -1.0;
};

void add_grid(CLI::App* cmd, Flags& f) {
  cmd->add_option("--p-start", f.run.grid.start, "first p of the grid")->capture_default_str();
  cmd->add_option("--p-stop", f.run.grid.stop, "last p of the grid")->capture_default_str();
  cmd->add_option("--p-step", f.run.grid.step, "grid spacing")->capture_default_str();
}

void add_run(CLI::App* cmd, Flags& f) {
  add_grid(cmd, f);
  cmd->add_option("--shots", f.run.shots, "Monte Carlo outputs per grid point")->capture_default_str();
  cmd->add_option("--seed", f.run.seed, "master seed")->capture_default_str();
  cmd->add_option("--loss", f.run.loss_survival, "per-attempt survival probability in (0,1]")->capture_default_str();
  cmd->add_option("--threads", f.run.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_output(CLI::App* cmd, Flags& f, bool with_format) {
  cmd->add_option("--out", f.out, "output file (default: standard output)");
  if (with_format)
    cmd->add_option("--format", f.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat format_of(const Flags& f) { return f.format == "json" ? OutputFormat::Json : OutputFormat::Csv; }

CoinTarget target_of(const Flags& f) { return f.expr.empty() ? parse_coin_target(f.coin) : expr_target(f.expr); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Bernoulli factory toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* construct = app.add_subcommand("construct", "synthesize a circuit for h(p)|0> + |1> and report it (JSON)");
  construct->add_option("--expr", f.expr, "amplitude expression over p and s")->required();
  add_grid(construct, f);
  add_output(construct, f, false);

  auto* coin = app.add_subcommand("coin", "sweep a coin over p: theoretical value against Monte Carlo");
  coin->add_option("--coin", f.coin, "fc, g1, g2, g3 or fa:<a>")->capture_default_str();
  coin->add_option("--expr", f.expr, "coin from measuring h(p)|0> + |1>; overrides --coin");
  add_run(coin, f);
  add_output(coin, f, true);

  auto* cost = app.add_subcommand("cost", "quantum against classical coin consumption for the f_c coin");
  cost->add_option("--eps-c", f.eps_c, "classical truncation level")->capture_default_str();
  add_run(cost, f);
  add_output(cost, f, true);

  auto* fidelity = app.add_subcommand("fidelity", "truth-table fidelities and the bounds they imply (JSON)");
  fidelity->add_option("--hv", f.hv, "H/V count table CSV");
  fidelity->add_option("--da", f.da, "D/A count table CSV");
  fidelity->add_option("--noise", f.noise, "simulate a CNOT with this depolarizing weight instead of reading tables");
  fidelity->add_option("--shots", f.run.shots, "simulated counts per input")->capture_default_str();
  fidelity->add_option("--seed", f.run.seed, "master seed")->capture_default_str();
  add_output(fidelity, f, false);

  auto* check = app.add_subcommand("check", "classical and quantum feasibility verdicts (JSON)");
  check->add_option("--coin", f.coin, "fc, g1, g2, g3 or fa:<a>")->capture_default_str();
  check->add_option("--expr", f.expr, "coin from measuring h(p)|0> + |1>; overrides --coin");
  add_output(check, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    std::string text;
    if (*construct) {
      text = construct_report(f.expr, f.run.grid);
    } else if (*coin) {
      text = emit_report(run_sweep(f.run, target_of(f)), format_of(f));
    } else if (*cost) {
      text = emit_cost(run_cost(f.run, f.eps_c), format_of(f));
    } else if (*fidelity) {
      if (f.noise >= 0.0) {
        if (!f.hv.empty() || !f.da.empty()) throw DomainError("--noise cannot be combined with --hv/--da");
        Rng hv_rng(derive_seed(f.run.seed, "fidelity", 0, 0)), da_rng(derive_seed(f.run.seed, "fidelity", 1, 0));
        text = fidelity_report(simulate_truth_table(gates::CNOT(), f.noise, f.run.shots, TableBasis::HV, hv_rng),
                               simulate_truth_table(gates::CNOT(), f.noise, f.run.shots, TableBasis::DA, da_rng));
      } else {
        if (f.hv.empty() || f.da.empty()) throw DomainError("fidelity needs --hv and --da, or --noise");
        text = fidelity_report(read_truth_table_csv(f.hv), read_truth_table_csv(f.da));
      }
    } else if (*check) {
      text = check_report(target_of(f));
    }
    write_output(text, f.out);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SynthesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

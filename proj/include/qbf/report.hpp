#pragma once

// Parameter sweeps, cost tables, verdict and fidelity reports behind the
// command-line tool.
//
// Monte Carlo work is split into blocks of kShotsPerBlock outputs. Block b of
// grid point i draws from a generator seeded with
// derive_seed(seed, subcommand, i, b), and block results are combined in
// index order, so output does not depend on the number of worker threads.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qbf/coin_analysis.hpp"
#include "qbf/expression.hpp"
#include "qbf/fidelity_eval.hpp"

namespace qbf {

inline constexpr std::uint64_t kShotsPerBlock = 4096;

struct Grid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.1;

  // start, start + step, ... up to stop (inclusive within 1e-9 of a step).
  // Throws DomainError unless step > 0 and 0 <= start <= stop <= 1.
  std::vector<double> points() const;
};

enum class OutputFormat { Csv, Json };

struct CoinTarget {
  enum class Kind { Fc, G1, G2, G3, Fa, Expr };
  Kind kind = Kind::Fc;
  double a = 0.0;  // Fa
  ExprPtr expr;    // Expr: head is |0> of h|0> + |1>
  std::string name;
};

// "fc", "g1", "g2", "g3" or "fa:<a>"; throws DomainError otherwise.
CoinTarget parse_coin_target(const std::string& text);
// Throws ParseError for malformed text.
CoinTarget expr_target(const std::string& text);
CoinFunction coin_function(const CoinTarget& t);

struct RunOptions {
  Grid grid;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  double loss_survival = 1.0;
  unsigned threads = 1;
};

struct SweepRow {
  double p = 0.0;
  double theoretical = 0.0;
  double estimate = 0.0;  // head frequency
  double stddev = 0.0;    // binomial standard error of the estimate
  // Probability that one pass through the construction yields an output:
  // quoins per pass divided by expected quoins per output.
  double success_prob = 0.0;
  double quoins_mean = 0.0;
  std::uint64_t seed = 0;
};

std::vector<SweepRow> run_sweep(const RunOptions& opt, const CoinTarget& target);

struct CostRow {
  double p = 0.0;
  double eps_c = 0.0;
  double loss_survival = 1.0;
  double quantum_predicted = 0.0;
  double quantum_mean = 0.0;
  double quantum_stddev = 0.0;
  double classical = 0.0;
  double ratio = 0.0;  // classical / quantum_predicted
  std::uint64_t seed = 0;
};

std::vector<CostRow> run_cost(const RunOptions& opt, double eps_c);

// CSV with header p,theoretical,estimate,stddev,success_prob,quoins_mean,seed
// or a JSON array with the same keys. Numbers carry 12 significant digits in
// both. Throws DomainError on empty input.
std::string emit_report(const std::vector<SweepRow>& rows, OutputFormat format);
std::string emit_cost(const std::vector<CostRow>& rows, OutputFormat format);

std::string check_report(const CoinTarget& target);
std::string construct_report(const std::string& expr_text, const Grid& grid);
std::string fidelity_report(const TruthTable& hv, const TruthTable& da);

// Writes to `path`, or to standard output when path is empty. Throws
// DataError when the file cannot be written.
void write_output(const std::string& text, const std::string& path);

// %.12g; non-finite values print as nan, inf, -inf.
std::string format_number(double x);

// Runs task(0) ... task(n-1) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace qbf

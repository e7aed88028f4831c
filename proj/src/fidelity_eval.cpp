#include "qbf/fidelity_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qbf/errors.hpp"

namespace qbf {

const char* to_string(TableBasis b) { return b == TableBasis::HV ? "HV" : "DA"; }

std::array<std::string, 4> basis_labels(TableBasis b) {
  if (b == TableBasis::HV) return {"HH", "HV", "VH", "VV"};
  return {"DD", "DA", "AD", "AA"};
}

std::array<std::size_t, 4> cnot_expected_map(TableBasis b) {
  if (b == TableBasis::HV) return {0, 1, 3, 2};
  return {0, 3, 2, 1};
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_count(const std::string& cell, int row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty() || !(v >= 0.0) || !std::isfinite(v))
    throw DataError("truth table row " + std::to_string(row) + ": bad count '" + cell + "'");
  return v;
}

}  // namespace

TruthTable read_truth_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("truth table is empty");
  const auto header = split_csv(line);
  if (header.size() != 5) throw DataError("truth table header needs an output column and four inputs");
  TruthTable t;
  bool found = false;
  for (TableBasis b : {TableBasis::HV, TableBasis::DA}) {
    const auto labels = basis_labels(b);
    if (std::equal(labels.begin(), labels.end(), header.begin() + 1)) {
      t.basis = b;
      found = true;
    }
  }
  if (!found) throw DataError("truth table inputs must be HH,HV,VH,VV or DD,DA,AD,AA");
  t.expected_map = cnot_expected_map(t.basis);
  const auto labels = basis_labels(t.basis);
  int row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row == 4) throw DataError("truth table has more than four output rows");
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw DataError("truth table row " + std::to_string(row + 1) + " needs five cells");
    if (cells[0] != labels[static_cast<std::size_t>(row)])
      throw DataError("truth table row " + std::to_string(row + 1) + " should be labelled " +
                      labels[static_cast<std::size_t>(row)]);
    for (std::size_t c = 0; c < 4; ++c) t.counts[static_cast<std::size_t>(row)][c] = parse_count(cells[c + 1], row + 1);
    ++row;
  }
  if (row != 4) throw DataError("truth table needs four output rows");
  return t;
}

TruthTable read_truth_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_truth_table_csv(in);
}

std::array<std::array<double, 4>, 4> column_probabilities(const TruthTable& t) {
  std::array<std::array<double, 4>, 4> pr{};
  for (std::size_t in = 0; in < 4; ++in) {
    double total = 0.0;
    for (std::size_t out = 0; out < 4; ++out) total += t.counts[out][in];
    if (!(total > 0.0)) throw DataError("truth table column " + std::to_string(in) + " has no counts");
    for (std::size_t out = 0; out < 4; ++out) pr[out][in] = t.counts[out][in] / total;
  }
  return pr;
}

double classical_fidelity(const TruthTable& t) {
  const auto pr = column_probabilities(t);
  double f = 0.0;
  for (std::size_t in = 0; in < 4; ++in) f += pr[t.expected_map[in]][in];
  return f / 4.0;
}

std::pair<double, double> process_fidelity_bounds(double f_hv, double f_da) {
  if (!(f_hv >= 0.0 && f_hv <= 1.0 && f_da >= 0.0 && f_da <= 1.0))
    throw DomainError("truth-table fidelities must lie in [0,1]");
  return {std::max(0.0, f_hv + f_da - 1.0), std::min(f_hv, f_da)};
}

double average_fidelity(double f_p, int dim_n) {
  if (!(f_p >= 0.0 && f_p <= 1.0)) throw DomainError("process fidelity must lie in [0,1]");
  if (dim_n < 1) throw DomainError("dimension must be positive");
  return (dim_n * f_p + 1.0) / (dim_n + 1.0);
}

StateFidelity state_fidelity_from_counts(std::uint64_t cc_parallel, std::uint64_t cc_perp) {
  const double total = static_cast<double>(cc_parallel) + static_cast<double>(cc_perp);
  if (total == 0.0) throw DataError("no coincidence counts");
  StateFidelity s;
  s.fidelity = static_cast<double>(cc_parallel) / total;
  s.stddev = std::sqrt(s.fidelity * (1.0 - s.fidelity) / total);
  return s;
}

TruthTable simulate_truth_table(const Operator& gate, double noise_lambda, std::uint64_t shots_per_column,
                                TableBasis basis, Rng& rng) {
  if (gate.qubits() != 2) throw DomainError("truth tables need a two-qubit gate");
  if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) throw DomainError("noise weight must lie in [0,1]");
  // In the D/A basis, D = H|0> and A = H|1> on each qubit.
  const bool da = basis == TableBasis::DA;
  const Operator hh = kron(gates::H(), gates::H());
  TruthTable t;
  t.basis = basis;
  for (std::size_t in = 0; in < 4; ++in) {
    NumericState st = basis_state(2, in);
    if (da) st = apply_operator(st, hh, {0, 1});
    st = apply_operator(st, gate, {0, 1});
    if (da) st = apply_operator(st, hh, {0, 1});
    const double norm = norm_squared(st);
    if (!(norm > 0.0)) throw DomainError("gate annihilates a basis input");
    std::array<double, 4> prob{};
    std::size_t ideal = 0;
    for (std::size_t out = 0; out < 4; ++out) {
      const double q = std::norm(st[out]) / norm;
      if (q > std::norm(st[ideal]) / norm) ideal = out;
      prob[out] = (1.0 - noise_lambda) * q + noise_lambda / 4.0;
    }
    if (std::norm(st[ideal]) / norm < 1.0 - 1e-9)
      throw DomainError("gate does not map the basis input " + basis_labels(basis)[in] + " to a basis output");
    t.expected_map[in] = ideal;
    for (std::uint64_t k = 0; k < shots_per_column; ++k) {
      double u = u01(rng);
      std::size_t out = 0;
      while (out < 3 && u >= prob[out]) u -= prob[out++];
      t.counts[out][in] += 1.0;
    }
  }
  return t;
}

std::string to_json(const TruthTable& t) {
  nlohmann::ordered_json j;
  j["basis"] = to_string(t.basis);
  j["inputs"] = basis_labels(t.basis);
  j["counts"] = t.counts;
  j["expected_map"] = t.expected_map;
  return j.dump(2);
}

}  // namespace qbf

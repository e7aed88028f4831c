#pragma once

// Truth-table fidelities of a two-qubit gate, the bounds they give on process
// and average fidelity, state fidelity from parallel/orthogonal counts, and a
// depolarizing-noise simulator that produces count tables of the same shape.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

#include "qbf/rng.hpp"
#include "qbf/state_engine.hpp"

namespace qbf {

enum class TableBasis { HV, DA };

struct TruthTable {
  TableBasis basis = TableBasis::HV;
  // counts[out][in]: columns are inputs, rows are outputs, both in the order
  // HH, HV, VH, VV (or DD, DA, AD, AA).
  std::array<std::array<double, 4>, 4> counts{};
  // expected_map[in] is the ideal output for that input.
  std::array<std::size_t, 4> expected_map{0, 1, 2, 3};
};

const char* to_string(TableBasis b);
// Labels of the four two-qubit basis states, e.g. {"HH", "HV", "VH", "VV"}.
std::array<std::string, 4> basis_labels(TableBasis b);
// Ideal CNOT truth table: HV {HH, HV, VV, VH}; DA {DD, AA, AD, DA}.
std::array<std::size_t, 4> cnot_expected_map(TableBasis b);

// Reads "output,<in0>,<in1>,<in2>,<in3>" followed by four rows of
// nonnegative counts. The labels fix the basis; the expected map is the
// CNOT's. Throws DataError on malformed input.
TruthTable read_truth_table_csv(std::istream& in);
TruthTable read_truth_table_csv(const std::string& path);

// Per-input probabilities; each column is normalized separately.
std::array<std::array<double, 4>, 4> column_probabilities(const TruthTable& t);
// Mean over inputs of Pr(expected output | input). Throws DataError when a
// column has no counts.
double classical_fidelity(const TruthTable& t);

// (max(0, f_hv + f_da - 1), min(f_hv, f_da)).
std::pair<double, double> process_fidelity_bounds(double f_hv, double f_da);
// (N f_p + 1) / (N + 1).
double average_fidelity(double f_p, int dim_n);

struct StateFidelity {
  double fidelity = 0.0;
  double stddev = 0.0;  // binomial: sqrt(F (1 - F) / total)
};

StateFidelity state_fidelity_from_counts(std::uint64_t cc_parallel, std::uint64_t cc_perp);

// Prepares each basis input, applies `gate`, and samples outputs from the
// ideal distribution mixed with the uniform one at weight noise_lambda. The
// expected map is read off the ideal gate, which must permute the basis.
TruthTable simulate_truth_table(const Operator& gate, double noise_lambda, std::uint64_t shots_per_column,
                                TableBasis basis, Rng& rng);

std::string to_json(const TruthTable& t);

}  // namespace qbf

#pragma once

#include <cstdint>

namespace qbf {

// Resources spent producing output coins or states.
struct ConsumptionLedger {
  std::uint64_t quoins_consumed = 0;
  std::uint64_t classical_coins_consumed = 0;
  std::uint64_t outputs_produced = 0;
  std::uint64_t attempts = 0;
  double loss_survival = 1.0;

  double mean_quoins() const {
    return outputs_produced ? static_cast<double>(quoins_consumed) / static_cast<double>(outputs_produced) : 0.0;
  }
  double mean_coins() const {
    return outputs_produced ? static_cast<double>(classical_coins_consumed) / static_cast<double>(outputs_produced)
                            : 0.0;
  }

  ConsumptionLedger& operator+=(const ConsumptionLedger& o) {
    quoins_consumed += o.quoins_consumed;
    classical_coins_consumed += o.classical_coins_consumed;
    outputs_produced += o.outputs_produced;
    attempts += o.attempts;
    return *this;
  }
};

}  // namespace qbf

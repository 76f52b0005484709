// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <vector>

namespace ghsbp {

// Dense row-major matrix of doubles; rows are inner vectors.
using Matrix = std::vector<std::vector<double>>;

// Observed transition counts n_ij over a truncated state space of dimension d.
struct TransitionCounts {
  int d = 0;                                       // truncation dimension, >= 2
  std::vector<std::vector<std::int64_t>> counts;   // d x d, n_ij >= 0
  std::vector<std::int64_t> row_totals;            // n_i = sum_j n_ij

  static TransitionCounts zeros(int d);
  // Validates shape, non-negativity, and row-total consistency; throws
  // std::invalid_argument on violation.
  void validate() const;
};

}  // namespace ghsbp

// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/types.hpp"

#include <stdexcept>
#include <string>

namespace ghsbp {

TransitionCounts TransitionCounts::zeros(int d) {
  if (d < 2) throw std::invalid_argument("TransitionCounts: d must be >= 2");
  TransitionCounts c;
  c.d = d;
  c.counts.assign(static_cast<std::size_t>(d),
                  std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
  c.row_totals.assign(static_cast<std::size_t>(d), 0);
  return c;
}

void TransitionCounts::validate() const {
  if (d < 2) throw std::invalid_argument("TransitionCounts: d must be >= 2");
  const auto dim = static_cast<std::size_t>(d);
  if (counts.size() != dim || row_totals.size() != dim) {
    throw std::invalid_argument("TransitionCounts: shape does not match d");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (counts[i].size() != dim) {
      throw std::invalid_argument("TransitionCounts: row " + std::to_string(i) +
                                  " does not have d entries");
    }
    std::int64_t total = 0;
    for (std::int64_t v : counts[i]) {
      if (v < 0) {
        throw std::invalid_argument("TransitionCounts: negative count in row " +
                                    std::to_string(i));
      }
      total += v;
    }
    if (total != row_totals[i]) {
      throw std::invalid_argument("TransitionCounts: row_totals[" +
                                  std::to_string(i) + "] inconsistent with counts");
    }
  }
}

}  // namespace ghsbp

// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <vector>

#include "ghsbp/rng.hpp"
#include "ghsbp/types.hpp"

namespace ghsbp {

// Benchmark chain families.  Row i of the true TPM is Geometric(p_i) on
// {0, 1, 2, ...}: P(i -> j) = (1 - p_i)^j p_i.
enum class Variant { LogP, LogLogP };

struct GeometricChainSpec {
  Variant variant = Variant::LogP;
  std::int64_t length = 2;        // >= 2
  std::int64_t start_state = 0;   // >= 0
  std::uint64_t seed = 0;
};

struct ChainRealization {
  std::vector<std::int64_t> states;
  std::int64_t max_state = 0;
};

// Success probability of the geometric row for state x (x >= 0):
//   LogP:    1 / (ln(x + 1) + 10)
//   LogLogP: 1 / ln(ln(x + 1) + 100)
// The +1 argument shift keeps the logs finite at state 0.
double p_of_state(Variant variant, std::int64_t x);

// One transition from state x: Geometric(p_of_state(x)) via inversion.
std::int64_t next_state(RngStream& rng, Variant variant, std::int64_t x);

// Simulates a chain of exactly spec.length states starting at
// spec.start_state; deterministic given spec.seed.
ChainRealization simulate_chain(const GeometricChainSpec& spec);

// Counts one-step transitions into a d x d matrix; requires
// d >= max_state + 1 (throws std::out_of_range otherwise).
TransitionCounts count_transitions(const ChainRealization& chain, int d);

// Truncated true TPM: entry (i, j) = (1 - p_i)^j p_i for 0 <= i, j < d.
// Rows are intentionally NOT renormalized after truncation; the missing tail
// mass penalizes every estimator identically.
Matrix true_tpm(Variant variant, int d);

// Maximum-likelihood TPM: row i = counts[i] / n_i, or the uniform row 1/d
// when n_i = 0.
Matrix mle_tpm(const TransitionCounts& counts);

}  // namespace ghsbp

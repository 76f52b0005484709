// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghsbp/markov_sim.hpp"
#include "ghsbp/types.hpp"

namespace ghsbp {

enum class Method { MLE, HSBP, GHSBP };

std::string method_name(Method m);

struct HyperTriple {
  double alpha = 1.0;
  double beta = 1.0;
  double b0 = 10.0;
};

struct EvalReport {
  Method method = Method::MLE;
  std::optional<HyperTriple> hyperparams_used;  // absent for MLE
  double mae_times_100 = 0.0;
  int d = 0;
  std::int64_t chain_length = 0;
  std::uint64_t seed = 0;  // the shared chain seed
};

// MCMC protocol shared by every posterior-based report of a comparison.
struct McmcProtocol {
  int num_samples = 2000;
  int burn_in = 1000;
  int thin = 1;
  int knots_N = 2;
};

// Mean absolute error (1/d^2) * sum_ij |estimate_ij - truth_ij|; throws
// std::invalid_argument on dimension mismatch.
double mae(const Matrix& estimate, const Matrix& truth);

// Scores MLE plus one posterior-mean estimate per hyperparameter triple on a
// single shared chain realization.  A triple with alpha == 1 is labeled HSBP,
// anything else GHSBP.  Reports are ordered: MLE first, then grid order.
// Gibbs runs use RngStream(chain_seed).substream(1 + index) and may execute
// on up to max_threads concurrent workers; results are deterministic and
// independent of the worker count.
std::vector<EvalReport> compare_methods(const ChainRealization& chain,
                                        Variant variant,
                                        std::span<const HyperTriple> grid,
                                        std::uint64_t chain_seed,
                                        const McmcProtocol& protocol,
                                        int max_threads = 1);

// Hyperparameter grids of the two benchmark tables (6 + 12 and 5 + 12 rows).
std::vector<HyperTriple> table1_grid();
std::vector<HyperTriple> table2_grid();

// Worker count: REPRO_THREADS environment variable if set (clamped to >= 1),
// otherwise the machine parallelism.
int resolve_worker_count();

}  // namespace ghsbp

// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ghsbp/gibbs.hpp"
#include "ghsbp/rng.hpp"

namespace ghsbp {

std::string method_name(Method m) {
  switch (m) {
    case Method::MLE:
      return "MLE";
    case Method::HSBP:
      return "HSBP";
    case Method::GHSBP:
      return "GHSBP";
  }
  throw std::invalid_argument("method_name: unknown method");
}

double mae(const Matrix& estimate, const Matrix& truth) {
  const std::size_t d = truth.size();
  if (d == 0 || estimate.size() != d) {
    throw std::invalid_argument("mae: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (estimate[i].size() != d || truth[i].size() != d) {
      throw std::invalid_argument("mae: dimension mismatch in row " +
                                  std::to_string(i));
    }
    for (std::size_t j = 0; j < d; ++j) {
      total += std::abs(estimate[i][j] - truth[i][j]);
    }
  }
  return total / (static_cast<double>(d) * static_cast<double>(d));
}

std::vector<EvalReport> compare_methods(const ChainRealization& chain,
                                        Variant variant,
                                        std::span<const HyperTriple> grid,
                                        std::uint64_t chain_seed,
                                        const McmcProtocol& protocol,
                                        int max_threads) {
  // Truncation at the largest visited state; rows of the truth are left
  // unnormalized so the missing tail mass is charged to every method alike.
  const int d = std::max(static_cast<int>(chain.max_state) + 1, 2);
  const TransitionCounts counts = count_transitions(chain, d);
  const Matrix truth = true_tpm(variant, d);
  const auto chain_length = static_cast<std::int64_t>(chain.states.size());

  std::vector<EvalReport> reports(grid.size() + 1);
  reports[0].method = Method::MLE;
  reports[0].hyperparams_used = std::nullopt;
  reports[0].mae_times_100 = 100.0 * mae(mle_tpm(counts), truth);
  reports[0].d = d;
  reports[0].chain_length = chain_length;
  reports[0].seed = chain_seed;

  const auto run_one = [&](std::size_t k) {
    const HyperTriple& h = grid[k];
    Hyperparams hp;
    hp.alpha = h.alpha;
    hp.beta = h.beta;
    hp.b0 = h.b0;
    hp.knots_N = protocol.knots_N;
    hp.num_samples = protocol.num_samples;
    hp.burn_in = protocol.burn_in;
    hp.thin = protocol.thin;
    hp.seed = chain_seed;
    RngStream rng = RngStream(chain_seed).substream(1 + static_cast<std::uint64_t>(k));
    const PosteriorSummary summary = run(rng, counts, hp);
    EvalReport& r = reports[k + 1];
    r.method = h.alpha == 1.0 ? Method::HSBP : Method::GHSBP;
    r.hyperparams_used = h;
    r.mae_times_100 = 100.0 * mae(summary.mean_tpm, truth);
    r.d = d;
    r.chain_length = chain_length;
    r.seed = chain_seed;
  };

  const int workers = grid.empty()
                          ? 1
                          : std::max(1, std::min(max_threads,
                                                 static_cast<int>(grid.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) run_one(k);
    return reports;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= grid.size()) return;
        try {
          run_one(k);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

std::vector<HyperTriple> table1_grid() {
  return {
      {1.0, 0.5, 10.0}, {1.0, 1.0, 10.0}, {1.0, 2.0, 10.0},
      {1.0, 2.0, 25.0}, {1.0, 2.0, 50.0}, {1.0, 5.0, 50.0},
      {2.0, 0.5, 10.0}, {2.0, 2.0, 10.0}, {3.0, 2.0, 10.0},
      {3.0, 1.0, 10.0}, {5.0, 2.0, 10.0}, {2.0, 2.0, 25.0},
      {5.0, 2.0, 25.0}, {2.0, 2.0, 50.0}, {3.0, 2.0, 50.0},
      {2.0, 5.0, 50.0}, {3.0, 5.0, 50.0}, {5.0, 5.0, 50.0},
  };
}

std::vector<HyperTriple> table2_grid() {
  return {
      {1.0, 1.0, 10.0},    {1.0, 0.5, 10.0},   {1.0, 0.1, 5.0},
      {1.0, 0.1, 2.0},     {1.0, 0.001, 0.1},  {20.0, 1.0, 10.0},
      {30.0, 1.0, 10.0},   {50.0, 1.0, 10.0},  {10.0, 0.5, 10.0},
      {15.0, 0.5, 10.0},   {30.0, 0.5, 10.0},  {50.0, 0.5, 10.0},
      {10.0, 0.1, 5.0},    {20.0, 0.1, 5.0},   {20.0, 0.1, 2.0},
      {10.0, 0.001, 2.0},  {20.0, 0.001, 2.0},
  };
}

int resolve_worker_count() {
  if (const char* env = std::getenv("REPRO_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env) return 1;
    return static_cast<int>(std::max(parsed, 1L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ghsbp

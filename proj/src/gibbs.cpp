// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ghsbp/distributions.hpp"

namespace ghsbp {

namespace {

constexpr double kRowFloor = 1e-12;

void require_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string("Hyperparams: ") + name +
                                " must be positive and finite");
  }
}

// Draws one pi row from Dirichlet(n_i + t) in log space (normalized
// log-Gamma variates), writing the exact log row into log_row.  The returned
// linear row is floored at 1e-12 and renormalized; the log row is not, so the
// t conditionals see the true log pi even for entries below the double range.
std::vector<double> draw_pi_row(RngStream& rng,
                                const std::vector<std::int64_t>& row_counts,
                                const std::vector<double>& t,
                                std::vector<double>& log_row) {
  const std::size_t d = t.size();
  log_row.resize(d);
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d; ++j) {
    log_row[j] =
        sample_log_gamma(rng, static_cast<double>(row_counts[j]) + t[j]);
    lmax = std::max(lmax, log_row[j]);
  }
  double sum_scaled = 0.0;
  for (double lg : log_row) sum_scaled += std::exp(lg - lmax);
  const double lse = lmax + std::log(sum_scaled);
  std::vector<double> row(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    log_row[j] -= lse;
    row[j] = std::max(std::exp(log_row[j]), kRowFloor);
    total += row[j];
  }
  for (double& v : row) v /= total;
  return row;
}

template <typename E>
[[noreturn]] void rethrow_with_context(const E& err, const std::string& context) {
  throw E(std::string(err.what()) + " [" + context + "]");
}

std::string t_update_context(int j, const TiltedGammaParams& p) {
  std::ostringstream os;
  os << "t-update j=" << j + 1 << ", d=" << p.d << ", delta=" << p.delta
     << ", B=" << p.B;
  return os.str();
}

}  // namespace

void Hyperparams::validate() const {
  require_positive_finite(alpha, "alpha");
  require_positive_finite(beta, "beta");
  require_positive_finite(b0, "b0");
  if (knots_N < 1) throw std::invalid_argument("Hyperparams: knots_N must be >= 1");
  if (num_samples < 1) {
    throw std::invalid_argument("Hyperparams: num_samples must be >= 1");
  }
  if (burn_in < 0) throw std::invalid_argument("Hyperparams: burn_in must be >= 0");
  if (thin < 1) throw std::invalid_argument("Hyperparams: thin must be >= 1");
}

GibbsState init_state(RngStream& rng, const TransitionCounts& counts,
                      const Hyperparams& hp) {
  hp.validate();
  counts.validate();
  const std::size_t d = static_cast<std::size_t>(counts.d);
  GibbsState state;
  state.t.assign(d, 1.0);
  state.pi.resize(d);
  update_pi(rng, state, counts);
  state.u.resize(d);
  state.w.resize(d - 1);
  update_u(rng, state);
  update_w(rng, state, hp);
  return state;
}

void update_pi(RngStream& rng, GibbsState& state, const TransitionCounts& counts) {
  const std::size_t d = state.t.size();
  state.log_pi_col.assign(d, 0.0);
  std::vector<double> log_row;
  for (std::size_t i = 0; i < d; ++i) {
    state.pi[i] = draw_pi_row(rng, counts.counts[i], state.t, log_row);
    for (std::size_t j = 0; j < d; ++j) state.log_pi_col[j] += log_row[j];
  }
}

void update_u(RngStream& rng, GibbsState& state) {
  const double t_sum = std::accumulate(state.t.begin(), state.t.end(), 0.0);
  const std::size_t d = state.u.size();
  state.log_u.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    state.log_u[i] = sample_log_gamma(rng, t_sum);
    state.u[i] = std::max(std::exp(state.log_u[i]),
                          std::numeric_limits<double>::min());
  }
}

void update_w(RngStream& rng, GibbsState& state, const Hyperparams& hp) {
  const std::size_t d = state.t.size();
  // tails[j] = sum_{k >= j} t_k, accumulated right to left.  Only the first
  // d-1 tail factors carry an auxiliary variable; the residual component has
  // none (see the header note on update_w).
  double tail = state.t[d - 1];
  std::vector<double> tails(d - 1);
  for (std::size_t j = d - 1; j-- > 0;) {
    tail += state.t[j];
    tails[j] = tail;
  }
  for (std::size_t j = 0; j + 1 < d; ++j) {
    state.w[j] = sample_gamma(rng, hp.alpha, tails[j]);
  }
}

TiltedGammaParams tilted_params_for(const GibbsState& state,
                                    const Hyperparams& hp, int j) {
  const int d = static_cast<int>(state.t.size());
  if (j < 0 || j >= d) {
    throw std::out_of_range("tilted_params_for: column index out of range");
  }
  TiltedGammaParams params;
  params.d = d;
  params.delta = (j + 1 < d) ? hp.alpha : hp.beta;
  const int w_terms = std::min(j + 1, d - 1);
  double w_head = 0.0;
  for (int k = 0; k < w_terms; ++k) w_head += state.w[static_cast<std::size_t>(k)];
  const auto dz = static_cast<std::size_t>(d);
  double log_pi_col = 0.0;
  if (state.log_pi_col.size() == dz) {
    log_pi_col = state.log_pi_col[static_cast<std::size_t>(j)];
  } else {
    for (int i = 0; i < d; ++i) {
      log_pi_col += std::log(
          state.pi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  double log_u = 0.0;
  if (state.log_u.size() == dz) {
    for (double lu : state.log_u) log_u += lu;
  } else {
    for (double u : state.u) log_u += std::log(u);
  }
  params.B = hp.b0 + w_head - log_pi_col - log_u;
  return params;
}

long update_t(RngStream& rng, GibbsState& state, const Hyperparams& hp) {
  const int d = static_cast<int>(state.t.size());
  long proposals = 0;
  for (int j = 0; j < d; ++j) {
    const TiltedGammaParams params = tilted_params_for(state, hp, j);
    try {
      // Trailing stick components under strongly ordered priors can sit at
      // scales whose conditional mode is far below the rejection sampler's
      // bracket floor; there the conditional equals its closed-form limit to
      // double precision, so switch rather than fail.
      if (log_target_derivative(params, kSmallModeSwitch) <= 0.0) {
        state.t[static_cast<std::size_t>(j)] =
            sample_tilted_gamma_small(rng, params);
        proposals += 1;
      } else {
        const TiltedGammaDraw draw =
            sample_tilted_gamma(rng, params, hp.knots_N);
        state.t[static_cast<std::size_t>(j)] = draw.value;
        proposals += draw.proposals;
      }
    } catch (const BracketError& e) {
      rethrow_with_context(e, t_update_context(j, params));
    } catch (const DegenerateKnotError& e) {
      rethrow_with_context(e, t_update_context(j, params));
    } catch (const EnvelopeViolation& e) {
      rethrow_with_context(e, t_update_context(j, params));
    } catch (const ProposalLimitError& e) {
      rethrow_with_context(e, t_update_context(j, params));
    }
  }
  return proposals;
}

PosteriorSummary run(RngStream& rng, const TransitionCounts& counts,
                     const Hyperparams& hp, const RunOptions& options) {
  hp.validate();
  counts.validate();
  const std::size_t d = static_cast<std::size_t>(counts.d);
  const long total_sweeps =
      static_cast<long>(hp.burn_in) +
      static_cast<long>(hp.num_samples) * static_cast<long>(hp.thin);

  GibbsState state = init_state(rng, counts, hp);

  PosteriorSummary summary;
  summary.mean_tpm.assign(d, std::vector<double>(d, 0.0));
  summary.alpha0_trace.reserve(static_cast<std::size_t>(total_sweeps));
  summary.mean_proposals_per_sweep.reserve(static_cast<std::size_t>(total_sweeps));
  summary.min_t_per_sweep.reserve(static_cast<std::size_t>(total_sweeps));
  summary.max_t_per_sweep.reserve(static_cast<std::size_t>(total_sweeps));
  if (options.retain_samples) {
    summary.retained_samples.reserve(static_cast<std::size_t>(hp.num_samples));
  }
  if (options.retain_gamma) {
    summary.gamma_trace.reserve(static_cast<std::size_t>(hp.num_samples));
  }

  long total_proposals = 0;
  int retained = 0;
  for (long sweep = 0; sweep < total_sweeps; ++sweep) {
    long sweep_proposals = 0;
    try {
      update_pi(rng, state, counts);
      update_u(rng, state);
      update_w(rng, state, hp);
      sweep_proposals = update_t(rng, state, hp);
    } catch (const BracketError& e) {
      rethrow_with_context(e, "sweep " + std::to_string(sweep + 1));
    } catch (const DegenerateKnotError& e) {
      rethrow_with_context(e, "sweep " + std::to_string(sweep + 1));
    } catch (const EnvelopeViolation& e) {
      rethrow_with_context(e, "sweep " + std::to_string(sweep + 1));
    } catch (const ProposalLimitError& e) {
      rethrow_with_context(e, "sweep " + std::to_string(sweep + 1));
    } catch (const std::runtime_error& e) {
      rethrow_with_context(e, "sweep " + std::to_string(sweep + 1));
    }
    total_proposals += sweep_proposals;

    const double t_sum = std::accumulate(state.t.begin(), state.t.end(), 0.0);
    summary.alpha0_trace.push_back(t_sum);
    summary.mean_proposals_per_sweep.push_back(
        static_cast<double>(sweep_proposals) / static_cast<double>(d));
    const auto [t_min, t_max] = std::minmax_element(state.t.begin(), state.t.end());
    summary.min_t_per_sweep.push_back(*t_min);
    summary.max_t_per_sweep.push_back(*t_max);

    const long post = sweep - static_cast<long>(hp.burn_in);
    if (post >= 0 && (post + 1) % hp.thin == 0) {
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          summary.mean_tpm[i][j] += state.pi[i][j];
        }
      }
      if (options.retain_samples) summary.retained_samples.push_back(state.pi);
      if (options.retain_gamma) {
        std::vector<double> gamma(d);
        for (std::size_t j = 0; j < d; ++j) gamma[j] = state.t[j] / t_sum;
        summary.gamma_trace.push_back(std::move(gamma));
      }
      ++retained;
    }
  }

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      summary.mean_tpm[i][j] /= static_cast<double>(retained);
    }
  }
  summary.mean_proposals =
      static_cast<double>(total_proposals) /
      (static_cast<double>(total_sweeps) * static_cast<double>(d));
  return summary;
}

}  // namespace ghsbp

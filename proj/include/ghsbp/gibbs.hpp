// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <vector>

#include "ghsbp/rng.hpp"
#include "ghsbp/tilted_gamma.hpp"
#include "ghsbp/types.hpp"

namespace ghsbp {

// Model and MCMC configuration.  The concentration parameter alpha0 carries a
// Gamma(beta, b0) prior: its shape is structurally tied to beta and is not
// separately configurable.
struct Hyperparams {
  double alpha = 1.0;       // stick-breaking Beta shape (alpha = 1: HSBP case)
  double beta = 1.0;        // stick-breaking Beta second shape / alpha0 prior shape
  double b0 = 10.0;         // rate of the alpha0 prior
  int knots_N = 2;          // envelope knot parameter (2N+2 knots)
  int num_samples = 2000;   // retained posterior samples M
  int burn_in = 1000;
  int thin = 1;
  std::uint64_t seed = 0;   // informational; callers construct the RngStream

  void validate() const;  // throws std::invalid_argument
};

// Current state of the blocked Gibbs sampler.
//
// log_pi_col and log_u are exact log-scale caches maintained by update_pi and
// update_u.  When the chain visits small t, Dirichlet rows concentrate in
// corners whose small entries (and small-shape u draws) lie far below the
// double range; B_j needs their exact logs, not logs of floored values, or
// the t updates are biased toward too-small B.  tilted_params_for prefers the
// caches and falls back to logs of pi/u for hand-assembled states.
struct GibbsState {
  Matrix pi;              // d x d, each row a strictly positive stochastic vector
  std::vector<double> t;  // positive; gamma_j = t_j / sum(t), alpha0 = sum(t)
  std::vector<double> u;  // positive auxiliaries, one per row
  std::vector<double> w;  // positive auxiliaries, one per stick break (d - 1)
  std::vector<double> log_pi_col;  // exact sum_i log pi_ij, one per column
  std::vector<double> log_u;       // exact log u_i, one per row
};

struct PosteriorSummary {
  Matrix mean_tpm;                             // entrywise posterior mean of retained pi
  std::vector<Matrix> retained_samples;        // filled only when requested
  std::vector<std::vector<double>> gamma_trace;  // retained t/sum(t), only when requested
  std::vector<double> alpha0_trace;            // sum(t) after every sweep
  std::vector<double> mean_proposals_per_sweep;  // mean envelope proposals per t draw
  std::vector<double> min_t_per_sweep;
  std::vector<double> max_t_per_sweep;
  double mean_proposals = 0.0;                 // over all t draws of the run
};

struct RunOptions {
  bool retain_samples = false;
  bool retain_gamma = false;
};

// Initial state: t_j = 1, u and w drawn from their full conditionals given t,
// each pi row drawn from Dirichlet(n_i + 1).
GibbsState init_state(RngStream& rng, const TransitionCounts& counts,
                      const Hyperparams& hp);

// pi_i | t ~ Dirichlet(n_i + t) independently per row.  The stored rows are
// floored at 1e-12 and renormalized; log_pi_col keeps the exact column log
// sums of the unfloored draw.
void update_pi(RngStream& rng, GibbsState& state, const TransitionCounts& counts);

// u_i | t ~ Gamma(sum_k t_k, 1) i.i.d., one per row; log_u keeps the exact
// logs (the stored linear values are floored at the smallest normal double).
void update_u(RngStream& rng, GibbsState& state);

// w_j | alpha, t ~ Gamma(alpha, sum_{k>=j} t_k) independently for
// j = 1..d-1.  The stick-breaking density carries one tail factor
// (t_j + ... + t_d)^{-alpha} per break; the residual component has none, so
// there is no w_d.  (A d-th auxiliary with rate t_d would add a spurious
// t_d^{-alpha} factor, making the augmented invariant measure improper near
// t_d = 0 whenever alpha >= d + beta and the chain collapse there.)
void update_w(RngStream& rng, GibbsState& state, const Hyperparams& hp);

// Tilted Gamma parameters of the t_j full conditional:
//   d = dimension, delta_j = alpha (j < d) or beta (j = d),
//   B_j = b0 + sum_{k<=min(j, d-1)} w_k - sum_i log pi_ij - sum_i log u_i.
TiltedGammaParams tilted_params_for(const GibbsState& state,
                                    const Hyperparams& hp, int j);

// Redraws every t_j from its tilted Gamma full conditional; returns the total
// number of envelope proposals consumed (closed-form limit draws count as
// one).  Components whose conditional mode falls below kSmallModeSwitch are
// drawn with sample_tilted_gamma_small instead of the rejection sampler,
// since trailing stick weights under strongly ordered priors equilibrate at
// scales no bracket search can hold.  Errors are annotated with
// (j, d, delta_j, B_j).
long update_t(RngStream& rng, GibbsState& state, const Hyperparams& hp);

// Runs burn_in + num_samples * thin sweeps in the fixed block order
// pi -> u -> w -> t, retaining every thin-th post-burn-in pi.  Any sweep error
// is rethrown with the sweep index attached.
PosteriorSummary run(RngStream& rng, const TransitionCounts& counts,
                     const Hyperparams& hp, const RunOptions& options = {});

}  // namespace ghsbp

// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <span>
#include <vector>

#include "ghsbp/rng.hpp"
#include "ghsbp/types.hpp"

namespace ghsbp {

// Parameters of a generalized Dirichlet distribution (Connor-Mosimann form):
// density  prod_i [1/B(alpha_i, beta_i)] x_i^{alpha_i - 1} (1 - x_1 - ... - x_i)^{g_i}
// with g_i = beta_i - alpha_{i+1} - beta_{i+1} for i < k and g_k = beta_k - 1.
struct GDParams {
  std::vector<double> alphas;
  std::vector<double> betas;
};

// Finite stick-breaking process with nu_j ~ Beta(alpha, beta) i.i.d. and the
// final weight defined as the residual stick.
struct GGEMParams {
  double alpha = 1.0;
  double beta = 1.0;
  int dim = 2;  // number of weights, >= 2
};

// Closed-form generalized Dirichlet moments.  covariance[i][j] holds
// Cov(X_i, X_j); the diagonal holds the variances.
struct GDMoments {
  std::vector<double> means;
  std::vector<double> variances;
  Matrix covariance;
};

// One standard normal draw (Box-Muller; two uniforms consumed per call).
double normal01(RngStream& rng);

// Gamma(shape, rate) draw; density proportional to x^{shape-1} e^{-rate x}.
// Strictly positive results even for shape << 1 (the shape < 1 branch uses
// the boost identity in log space and floors at the smallest normal double).
double sample_gamma(RngStream& rng, double shape, double rate);

// log of a Gamma(shape, 1) draw, computed entirely in log space: exact even
// when the linear value would flush to zero (shape << 1 can put the draw far
// below the double range).  Consumes the stream exactly like
// sample_gamma(rng, shape, 1.0), so exp of the result matches that draw up to
// rounding (and up to its floor).
double sample_log_gamma(RngStream& rng, double shape);

// Beta(a, b) draw clamped into [1e-15, 1 - 1e-15].
double sample_beta(RngStream& rng, double a, double b);

// Dirichlet(conc) draw via normalized Gamma variates; resamples (at most 100
// times) if the normalizing sum degenerates, then throws std::runtime_error.
std::vector<double> sample_dirichlet(RngStream& rng, std::span<const double> conc);

// Generalized Dirichlet draw via the stick-breaking construction
// y_j = x_j * prod_{k<j} (1 - x_k) with independent x_j ~ Beta(alpha_j, beta_j).
std::vector<double> sample_gd(RngStream& rng, const GDParams& params);

// Log density of the generalized Dirichlet at x (length k); returns -infinity
// outside the support.
double gd_log_density(const GDParams& params, std::span<const double> x);

// Closed-form moments of the generalized Dirichlet.
GDMoments gd_moments(const GDParams& params);

// Finite GGEM draw: gamma_j = nu_j * prod_{k<j}(1 - nu_k) for j < d and the
// last weight the residual; the returned vector left-to-right sums to 1.
std::vector<double> sample_ggem(RngStream& rng, const GGEMParams& params);

// Stick-breaking draw of one probability row given global weights gamma:
// pi'_j ~ Beta(alpha0 * gamma_j, alpha0 * (1 - sum_{k<=j} gamma_k)) for j < d,
// pi_j = pi'_j * prod_{k<j}(1 - pi'_k), last element the residual.  The second
// Beta parameter is floored at 1e-12.  Distributionally equal to
// Dirichlet(alpha0 * gamma).
std::vector<double> sample_row_stickbreaking(RngStream& rng, double alpha0,
                                             std::span<const double> gamma);

}  // namespace ghsbp

// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ghsbp/tilted_gamma.hpp"

namespace ghsbp {

// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance;
// reversed bounds follow the orientation convention (the sign flips).
// Independent of the sampling code paths; used as a verification oracle.
// Refinement is seeded from a 64-panel composite pass, so features narrower
// than (b - a)/128 can still be overlooked; split such integrals at known
// landmarks (as tilted_gamma_cdf_at does around the mode).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_depth = 60);

// CDF of the normalized tilted Gamma density evaluated at each of the given
// ascending points, via adaptive quadrature of exp(h(x) - h(mode)) on
// (0, 10 * mode + 50).  Points beyond the quadrature window map to 1.
std::vector<double> tilted_gamma_cdf_at(const TiltedGammaParams& params,
                                        std::span<const double> sorted_points,
                                        double rel_tol = 1e-10);

// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
// ascending sample and the fitted CDF values at those points.
double ks_statistic(std::span<const double> sorted_sample,
                    std::span<const double> cdf_values);

// Convenience: KS distance of draws (any order; sorted internally) against
// the quadrature-normalized tilted Gamma CDF.
double ks_vs_tilted_gamma(const TiltedGammaParams& params,
                          std::vector<double> draws);

// 0.99 quantile of the chi-squared distribution with k degrees of freedom
// (Wilson-Hilferty approximation).
double wilson_hilferty_chi2_99(double k);

// Batch-means standard error of the mean of a (possibly autocorrelated) MCMC
// trace: sqrt(n) batches of equal size, stderr = sd(batch means) / sqrt(#batches).
double batch_means_stderr(std::span<const double> trace);

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased

}  // namespace ghsbp

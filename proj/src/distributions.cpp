// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ghsbp/special_math.hpp"

namespace ghsbp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBetaClampLo = 1e-15;
constexpr double kBetaClampHi = 1.0 - 1e-15;

void require_positive_finite(double v, const char* fn, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::domain_error(std::string(fn) + ": " + name +
                            " must be positive and finite, got " + std::to_string(v));
  }
}

void validate(const GDParams& p) {
  if (p.alphas.empty() || p.alphas.size() != p.betas.size()) {
    throw std::domain_error("GDParams: alphas and betas must be non-empty and equal length");
  }
  for (std::size_t i = 0; i < p.alphas.size(); ++i) {
    require_positive_finite(p.alphas[i], "GDParams", "alpha");
    require_positive_finite(p.betas[i], "GDParams", "beta");
  }
}

void validate(const GGEMParams& p) {
  require_positive_finite(p.alpha, "GGEMParams", "alpha");
  require_positive_finite(p.beta, "GGEMParams", "beta");
  if (p.dim < 2) throw std::domain_error("GGEMParams: dim must be >= 2");
}

// Marsaglia-Tsang squeeze method, shape >= 1, rate 1.
double sample_gamma_shape_ge1(RngStream& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal01(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double normal01(RngStream& rng) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  require_positive_finite(shape, "sample_gamma", "shape");
  require_positive_finite(rate, "sample_gamma", "rate");
  if (shape >= 1.0) {
    return sample_gamma_shape_ge1(rng, shape) / rate;
  }
  // Boost identity: X ~ Gamma(shape) equals Y * U^{1/shape} with
  // Y ~ Gamma(shape + 1), U ~ Uniform(0,1); evaluated in log space so the
  // power cannot flush to zero, then floored at the smallest normal double.
  const double y = sample_gamma_shape_ge1(rng, shape + 1.0);
  const double u = rng.uniform01();
  const double log_x = std::log(y) + std::log(u) / shape - std::log(rate);
  const double x = std::exp(log_x);
  return x >= std::numeric_limits<double>::min() ? x
                                                 : std::numeric_limits<double>::min();
}

double sample_log_gamma(RngStream& rng, double shape) {
  require_positive_finite(shape, "sample_log_gamma", "shape");
  if (shape >= 1.0) {
    return std::log(sample_gamma_shape_ge1(rng, shape));
  }
  const double y = sample_gamma_shape_ge1(rng, shape + 1.0);
  const double u = rng.uniform01();
  return std::log(y) + std::log(u) / shape;
}

double sample_beta(RngStream& rng, double a, double b) {
  require_positive_finite(a, "sample_beta", "a");
  require_positive_finite(b, "sample_beta", "b");
  const double x = sample_gamma(rng, a, 1.0);
  const double y = sample_gamma(rng, b, 1.0);
  const double v = x / (x + y);
  if (!(v > kBetaClampLo)) return kBetaClampLo;
  if (!(v < kBetaClampHi)) return kBetaClampHi;
  return v;
}

std::vector<double> sample_dirichlet(RngStream& rng, std::span<const double> conc) {
  if (conc.size() < 2) {
    throw std::domain_error("sample_dirichlet: need at least 2 components");
  }
  for (double a : conc) require_positive_finite(a, "sample_dirichlet", "concentration");
  std::vector<double> out(conc.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    double total = 0.0;
    for (std::size_t i = 0; i < conc.size(); ++i) {
      out[i] = sample_gamma(rng, conc[i], 1.0);
      total += out[i];
    }
    if (!std::isfinite(total) || total <= 0.0) continue;
    for (double& v : out) {
      v /= total;
      if (v <= 0.0) v = std::numeric_limits<double>::min();
    }
    return out;
  }
  throw std::runtime_error("sample_dirichlet: normalizing sum degenerate after 100 attempts");
}

std::vector<double> sample_gd(RngStream& rng, const GDParams& params) {
  validate(params);
  const std::size_t k = params.alphas.size();
  std::vector<double> y(k);
  double rem = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double x = sample_beta(rng, params.alphas[j], params.betas[j]);
    y[j] = x * rem;
    rem *= (1.0 - x);
  }
  return y;
}

double gd_log_density(const GDParams& params, std::span<const double> x) {
  validate(params);
  const std::size_t k = params.alphas.size();
  if (x.size() != k) {
    throw std::invalid_argument("gd_log_density: dimension mismatch");
  }
  double cum = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(x[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    cum += x[i];
    const double rem = 1.0 - cum;
    if (rem < 0.0) return -std::numeric_limits<double>::infinity();
    const double g = (i + 1 < k)
                         ? params.betas[i] - params.alphas[i + 1] - params.betas[i + 1]
                         : params.betas[i] - 1.0;
    lp += -log_beta(params.alphas[i], params.betas[i]) +
          (params.alphas[i] - 1.0) * std::log(x[i]);
    if (g != 0.0) lp += g * std::log(rem);
  }
  return lp;
}

GDMoments gd_moments(const GDParams& params) {
  validate(params);
  const std::size_t k = params.alphas.size();
  GDMoments m;
  m.means.resize(k);
  m.variances.resize(k);
  m.covariance.assign(k, std::vector<double>(k, 0.0));

  // E(X_i) = a_i/(a_i+b_i) * prod_{l<i} b_l/(a_l+b_l)
  std::vector<double> mean_prefix(k, 1.0);  // prod_{l<i} b_l/(a_l+b_l)
  // M_{i-1} = prod_{l<i} (b_l+1)/(a_l+b_l+1)
  std::vector<double> m_prefix(k, 1.0);
  for (std::size_t i = 1; i < k; ++i) {
    const double a = params.alphas[i - 1];
    const double b = params.betas[i - 1];
    mean_prefix[i] = mean_prefix[i - 1] * b / (a + b);
    m_prefix[i] = m_prefix[i - 1] * (b + 1.0) / (a + b + 1.0);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double a = params.alphas[i];
    const double b = params.betas[i];
    m.means[i] = a / (a + b) * mean_prefix[i];
    m.variances[i] = m.means[i] * ((a + 1.0) / (a + b + 1.0) * m_prefix[i] - m.means[i]);
    m.covariance[i][i] = m.variances[i];
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double a = params.alphas[i];
    const double b = params.betas[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      const double c = m.means[j] * (a / (a + b + 1.0) * m_prefix[i] - m.means[i]);
      m.covariance[i][j] = c;
      m.covariance[j][i] = c;
    }
  }
  return m;
}

std::vector<double> sample_ggem(RngStream& rng, const GGEMParams& params) {
  validate(params);
  const int d = params.dim;
  std::vector<double> g(static_cast<std::size_t>(d));
  double rem = 1.0;
  double left_sum = 0.0;  // left-to-right partial sum of the emitted weights
  for (int j = 0; j + 1 < d; ++j) {
    const double nu = sample_beta(rng, params.alpha, params.beta);
    g[j] = nu * rem;
    rem *= (1.0 - nu);
    left_sum += g[j];
  }
  // Defining the last weight as 1 minus the left-to-right partial sum makes
  // the returned vector sum to exactly 1.0 in that evaluation order; it equals
  // the residual stick up to rounding.
  g[d - 1] = 1.0 - left_sum;
  if (!(g[d - 1] > 0.0)) g[d - 1] = std::numeric_limits<double>::min();
  return g;
}

std::vector<double> sample_row_stickbreaking(RngStream& rng, double alpha0,
                                             std::span<const double> gamma) {
  require_positive_finite(alpha0, "sample_row_stickbreaking", "alpha0");
  const std::size_t d = gamma.size();
  if (d < 2) throw std::domain_error("sample_row_stickbreaking: need dimension >= 2");
  std::vector<double> pi(d);
  double rem = 1.0;
  double left_sum = 0.0;
  double cum_gamma = 0.0;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    if (!(gamma[j] > 0.0) || !std::isfinite(gamma[j])) {
      throw std::domain_error("sample_row_stickbreaking: gamma entries must be positive");
    }
    cum_gamma += gamma[j];
    const double a = alpha0 * gamma[j];
    const double b = std::max(alpha0 * (1.0 - cum_gamma), 1e-12);
    if (!(a > 0.0)) {
      throw std::domain_error("sample_row_stickbreaking: non-positive Beta shape");
    }
    const double x = sample_beta(rng, a, b);
    pi[j] = x * rem;
    rem *= (1.0 - x);
    left_sum += pi[j];
  }
  pi[d - 1] = 1.0 - left_sum;
  if (!(pi[d - 1] > 0.0)) pi[d - 1] = std::numeric_limits<double>::min();
  return pi;
}

}  // namespace ghsbp

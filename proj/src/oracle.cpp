// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ghsbp {

namespace {

double simpson_rule(double a, double fa, double fm, double fb, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol_abs, int depth, int max_depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, fa, flm, fm, m);
  const double right = simpson_rule(m, fm, frm, fb, b);
  const double delta = left + right - whole;
  if (!std::isfinite(delta)) {
    throw std::runtime_error("adaptive_simpson: non-finite integrand");
  }
  // Second disjunct: delta has reached the rounding floor of the local mass,
  // so further splitting cannot sharpen the estimate; without this floor a
  // too-optimistic global tolerance could force splitting to the depth cap
  // across the whole interval.
  if (depth >= max_depth || std::abs(delta) <= 15.0 * tol_abs ||
      std::abs(delta) <= std::ldexp(std::abs(left) + std::abs(right), -48)) {
    return left + right + delta / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol_abs, depth + 1,
               max_depth) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol_abs, depth + 1,
               max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_depth) {
  if (!(rel_tol > 0.0)) {
    throw std::invalid_argument("adaptive_simpson: rel_tol must be positive");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("adaptive_simpson: bounds must be finite");
  }
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, rel_tol, max_depth);
  // Refinement starts from a 64-panel composite rather than one top-level
  // rule: a single 3-point estimate can miss a peak that sits between its
  // abscissae, which would both corrupt the absolute tolerance and stop the
  // recursion before the peak is ever seen.
  constexpr int kPanels = 64;
  std::vector<double> xs(kPanels + 1);
  std::vector<double> fxs(kPanels + 1);
  for (int i = 0; i <= kPanels; ++i) {
    xs[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / kPanels;
    fxs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
  }
  std::vector<double> mids(kPanels);
  std::vector<double> fmids(kPanels);
  std::vector<double> panel_s(kPanels);
  double coarse = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const auto i = static_cast<std::size_t>(p);
    mids[i] = 0.5 * (xs[i] + xs[i + 1]);
    fmids[i] = f(mids[i]);
    panel_s[i] = simpson_rule(xs[i], fxs[i], fmids[i], fxs[i + 1], xs[i + 1]);
    coarse += panel_s[i];
  }
  const double tol_abs =
      rel_tol * std::max(std::abs(coarse), std::numeric_limits<double>::min());
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const auto i = static_cast<std::size_t>(p);
    total += adapt(f, xs[i], fxs[i], xs[i + 1], fxs[i + 1], mids[i], fmids[i],
                   panel_s[i], tol_abs / kPanels, 0, max_depth);
  }
  return total;
}

std::vector<double> tilted_gamma_cdf_at(const TiltedGammaParams& params,
                                        std::span<const double> sorted_points,
                                        double rel_tol) {
  const double mode = find_mode(params);
  const double h_mode = log_target(params, mode);
  const double window = 10.0 * mode + 50.0;
  // h -> -inf at 0+, so 0 is the continuous extension of the integrand.
  const std::function<double(double)> g = [&params, h_mode](double x) {
    return x <= 0.0 ? 0.0 : std::exp(log_target(params, x) - h_mode);
  };
  // Integration runs are split at mode-derived anchors so that every piece
  // attains its maximum at an endpoint; a piece whose interior hides the
  // peak could otherwise look flat to the first quadrature estimates.
  const double anchors[] = {0.5 * mode, mode, 2.0 * mode};
  double prev = 0.0;
  const auto integrate_to = [&](double x) {
    double total = 0.0;
    for (double anchor : anchors) {
      if (prev < anchor && anchor < x) {
        total += adaptive_simpson(g, prev, anchor, rel_tol);
        prev = anchor;
      }
    }
    total += adaptive_simpson(g, prev, x, rel_tol);
    prev = x;
    return total;
  };
  const double z = integrate_to(window);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::runtime_error("tilted_gamma_cdf_at: degenerate normalizer");
  }
  prev = 0.0;
  double acc = 0.0;
  std::vector<double> out(sorted_points.size());
  for (std::size_t i = 0; i < sorted_points.size(); ++i) {
    if (i > 0 && sorted_points[i] < sorted_points[i - 1]) {
      throw std::invalid_argument("tilted_gamma_cdf_at: points not ascending");
    }
    const double x = std::min(sorted_points[i], window);
    if (x > prev) acc += integrate_to(x);
    out[i] = std::min(acc / z, 1.0);
  }
  return out;
}

double ks_statistic(std::span<const double> sorted_sample,
                    std::span<const double> cdf_values) {
  const std::size_t n = sorted_sample.size();
  if (n == 0 || cdf_values.size() != n) {
    throw std::invalid_argument("ks_statistic: size mismatch or empty sample");
  }
  double d_stat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf_values[i];
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d_stat = std::max({d_stat, hi, lo});
  }
  return d_stat;
}

double ks_vs_tilted_gamma(const TiltedGammaParams& params,
                          std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  const std::vector<double> cdf = tilted_gamma_cdf_at(params, draws);
  return ks_statistic(draws, cdf);
}

double wilson_hilferty_chi2_99(double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("wilson_hilferty_chi2_99: k must be positive");
  }
  constexpr double kZ99 = 2.3263478740408408;  // standard normal 0.99 quantile
  const double c = 2.0 / (9.0 * k);
  const double base = 1.0 - c + kZ99 * std::sqrt(c);
  return k * base * base * base;
}

double batch_means_stderr(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 4) {
    throw std::invalid_argument("batch_means_stderr: need at least 4 points");
  }
  const auto num_batches =
      static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t batch_size = n / num_batches;
  std::vector<double> means(num_batches);
  for (std::size_t b = 0; b < num_batches; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < batch_size; ++i) {
      total += trace[b * batch_size + i];
    }
    means[b] = total / static_cast<double>(batch_size);
  }
  return std::sqrt(sample_variance(means) / static_cast<double>(num_batches));
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty input");
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(n - 1);
}

}  // namespace ghsbp

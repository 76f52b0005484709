// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ghsbp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_positive_finite(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(std::string(fn) + ": argument must be positive and finite, got " +
                            std::to_string(x));
  }
}

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + i);
  const double t = z + 7.5;  // z + g + 0.5
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  require_positive_finite(x, "log_gamma");
  if (x < 0.5) {
    // reflection: log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double digamma(double x) {
  require_positive_finite(x, "digamma");
  // Upward recurrence psi(x) = psi(x + 1) - 1/x until x >= 10, with
  // compensated accumulation of the subtracted terms (they can reach 1/x ~ 1e6
  // for tiny x, where naive summation would cost the final digits).
  double acc = 0.0;
  double comp = 0.0;
  while (x < 10.0) {
    const double term = 1.0 / x;
    const double y = term - comp;
    const double s = acc + y;
    comp = (s - acc) - y;
    acc = s;
    x += 1.0;
  }
  // Asymptotic series psi(x) ~ ln x - 1/(2x) - sum_n B_{2n} / (2n x^{2n}).
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (-1.0 / 12.0 +
              inv2 * (1.0 / 120.0 +
                      inv2 * (-1.0 / 252.0 +
                              inv2 * (1.0 / 240.0 +
                                      inv2 * (-1.0 / 132.0 +
                                              inv2 * (691.0 / 32760.0 +
                                                      inv2 * (-1.0 / 12.0)))))));
  return std::log(x) - 0.5 * inv + series - acc;
}

double log_beta(double a, double b) {
  require_positive_finite(a, "log_beta");
  require_positive_finite(b, "log_beta");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;  // all -inf, or a +inf/nan dominates
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace ghsbp

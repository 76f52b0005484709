// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/tilted_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "ghsbp/distributions.hpp"
#include "ghsbp/special_math.hpp"

namespace ghsbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEnvelopeTol = 1e-9;
constexpr long kProposalLimit = 1000000L;

void validate_params(const TiltedGammaParams& p) {
  if (p.d < 1) throw std::domain_error("TiltedGammaParams: d must be >= 1");
  if (!std::isfinite(p.delta) || p.delta <= 0.0) {
    throw std::domain_error("TiltedGammaParams: delta must be positive and finite");
  }
  if (!std::isfinite(p.B)) {
    throw std::domain_error("TiltedGammaParams: B must be finite");
  }
}

std::string params_string(const TiltedGammaParams& p) {
  std::ostringstream os;
  os << "(d=" << p.d << ", delta=" << p.delta << ", B=" << p.B << ")";
  return os.str();
}

// log of the envelope mass of one segment: integral over (q_lo, q_hi) of
// exp(a + lam * (x - m)).  Anchoring the exponent at the endpoint nearest the
// supremum keeps the expm1 argument non-positive, so the result never
// overflows and stays accurate for |lam| * width both tiny and huge.  The
// unbounded last segment (width = inf, lam < 0) is the expm1(-inf) = -1
// limit of the same expression.
double segment_log_mass(double a, double lam, double m, double q_lo, double q_hi) {
  const double width = q_hi - q_lo;
  if (lam == 0.0) return a + std::log(width);
  const double anchor = lam > 0.0 ? q_hi : q_lo;
  const double s = lam * width;
  return a + lam * (anchor - m) + std::log(-std::expm1(-std::abs(s))) -
         std::log(std::abs(lam));
}

// Tries to assemble a valid cover on the given knots; returns nullopt if the
// spacing, tangent slopes, break ordering, or segment masses degenerate.
std::optional<CoverDensity> attempt_cover(const TiltedGammaParams& params, int N,
                                          const std::vector<double>& knots) {
  const std::size_t n = knots.size();
  if (!(knots.front() > 0.0)) return std::nullopt;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = knots[i + 1] - knots[i];
    if (!std::isfinite(knots[i + 1])) return std::nullopt;
    if (!(gap >= 1e-12) || !(gap >= 1e-12 * knots[i + 1])) return std::nullopt;
  }

  CoverDensity cover;
  cover.N = N;
  cover.knots = knots;
  cover.values.resize(n);
  cover.slopes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cover.values[i] = log_target(params, knots[i]);
    cover.slopes[i] = log_target_derivative(params, knots[i]);
    if (!std::isfinite(cover.values[i]) || !std::isfinite(cover.slopes[i])) {
      return std::nullopt;
    }
  }
  // Strict concavity must survive rounding, and the rightmost tangent has to
  // decay for the unbounded segment to carry finite mass.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(cover.slopes[i] > cover.slopes[i + 1])) return std::nullopt;
  }
  if (!(cover.slopes.back() < 0.0)) return std::nullopt;

  cover.breaks.resize(n + 1);
  cover.breaks[0] = 0.0;
  cover.breaks[n] = kInf;
  for (std::size_t j = 1; j < n; ++j) {
    const double a0 = cover.values[j - 1];
    const double a1 = cover.values[j];
    const double l0 = cover.slopes[j - 1];
    const double l1 = cover.slopes[j];
    cover.breaks[j] =
        (a1 - a0 + knots[j - 1] * l0 - knots[j] * l1) / (l0 - l1);
    if (!std::isfinite(cover.breaks[j]) ||
        !(cover.breaks[j] > cover.breaks[j - 1])) {
      return std::nullopt;
    }
  }

  cover.log_masses.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    cover.log_masses[k] = segment_log_mass(cover.values[k], cover.slopes[k],
                                           knots[k], cover.breaks[k],
                                           cover.breaks[k + 1]);
    if (std::isnan(cover.log_masses[k]) || cover.log_masses[k] == kInf) {
      return std::nullopt;
    }
  }
  const double lse = log_sum_exp(cover.log_masses);
  if (!std::isfinite(lse)) return std::nullopt;
  cover.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    cover.weights[k] = std::exp(cover.log_masses[k] - lse);
  }
  return cover;
}

}  // namespace

std::size_t CoverDensity::segment_of(double x) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  if (it == breaks.begin()) return 0;
  std::size_t idx = static_cast<std::size_t>(it - breaks.begin()) - 1;
  if (idx >= knots.size()) idx = knots.size() - 1;
  return idx;
}

double CoverDensity::log_nu(double x) const {
  const std::size_t k = segment_of(x);
  return values[k] + slopes[k] * (x - knots[k]);
}

double log_target(const TiltedGammaParams& params, double x) {
  validate_params(params);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_target: x must be positive and finite");
  }
  double lp = -static_cast<double>(params.d) * log_gamma(x) - params.B * x;
  if (params.delta != 1.0) lp += (params.delta - 1.0) * std::log(x);
  return lp;
}

double log_target_derivative(const TiltedGammaParams& params, double x) {
  validate_params(params);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_target_derivative: x must be positive and finite");
  }
  double g = -static_cast<double>(params.d) * digamma(x) - params.B;
  if (params.delta != 1.0) g += (params.delta - 1.0) / x;
  return g;
}

double find_mode(const TiltedGammaParams& params) {
  validate_params(params);
  const double lo = 1e-10;
  if (!(log_target_derivative(params, lo) > 0.0)) {
    throw BracketError("find_mode: h' not positive at the lower bracket 1e-10 for " +
                       params_string(params));
  }
  double hi = params.B > 0.0 ? 1.5 : std::exp(1.0 - params.B / params.d);
  if (!(hi > lo)) hi = 1.0;
  double dhi = log_target_derivative(params, hi);
  int doublings = 0;
  while (std::isfinite(dhi) && dhi >= 0.0) {
    if (++doublings > 1024) {
      throw BracketError("find_mode: no sign change after 1024 doublings for " +
                         params_string(params));
    }
    hi *= 2.0;
    dhi = log_target_derivative(params, hi);
  }
  if (!std::isfinite(dhi)) {
    throw BracketError("find_mode: h' not finite during bracket search for " +
                       params_string(params));
  }
  double a = lo;
  double b = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double dm = log_target_derivative(params, mid);
    if (std::abs(dm) < 1e-10) return mid;
    if (dm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

CoverDensity build_cover(const TiltedGammaParams& params, int N) {
  validate_params(params);
  if (N < 1) throw std::domain_error("build_cover: N must be >= 1");
  const double mode = find_mode(params);
  const double last =
      params.B > 0.0
          ? mode + 1.5
          : std::max(std::exp(1.0 - params.B / params.d), mode + 1.5);

  const int n_knots = 2 * N + 2;
  std::vector<double> m(static_cast<std::size_t>(n_knots));
  m[0] = 0.5 * mode;
  m[static_cast<std::size_t>(N)] = mode;
  m[static_cast<std::size_t>(2 * N)] = 0.5 * (mode + last);
  m[static_cast<std::size_t>(n_knots - 1)] = last;
  for (int i = 1; i < N; ++i) {
    m[static_cast<std::size_t>(i)] =
        m[0] + (mode - m[0]) * static_cast<double>(i) / N;
    m[static_cast<std::size_t>(N + i)] =
        mode + (m[static_cast<std::size_t>(2 * N)] - mode) *
                   static_cast<double>(i) / N;
  }
  if (auto cover = attempt_cover(params, N, m)) return *cover;

  // Fallback: knots at power-of-two multiples of the mode, which keeps the
  // relative spacing bounded away from zero whatever the scale of the mode.
  for (int i = 0; i < n_knots; ++i) {
    m[static_cast<std::size_t>(i)] = std::ldexp(mode, i - N);
  }
  if (auto cover = attempt_cover(params, N, m)) return *cover;
  throw DegenerateKnotError("build_cover: knot placement degenerate for " +
                            params_string(params));
}

double sample_cover_segment(RngStream& rng, const CoverDensity& cover,
                            std::size_t k) {
  const double q_lo = cover.breaks[k];
  const double q_hi = cover.breaks[k + 1];
  const double lam = cover.slopes[k];
  const double width = q_hi - q_lo;
  const double v = rng.uniform01();
  double x;
  if (lam == 0.0) {
    x = q_lo + v * width;
  } else if (lam < 0.0) {
    // expm1(lam * width) -> -1 when width = inf: the unbounded segment needs
    // no special case.
    x = q_lo + std::log1p(v * std::expm1(lam * width)) / lam;
  } else {
    // log1p/expm1 keep full precision when lam * width is tiny (the draw
    // would otherwise quantize on a grid of ulp(1) / lam), and reduce to
    // log(v) / lam when lam * width is huge.
    x = q_hi + std::log1p((1.0 - v) * std::expm1(-lam * width)) / lam;
  }
  // Keep the draw inside [q_lo, q_hi) so density lookups land in segment k,
  // and strictly positive so the target stays evaluable.
  if (!(x > q_lo)) x = q_lo;
  if (std::isfinite(q_hi) && !(x < q_hi)) x = std::nextafter(q_hi, q_lo);
  if (x < std::numeric_limits<double>::min()) {
    x = std::numeric_limits<double>::min();
  }
  return x;
}

double sample_cover(RngStream& rng, const CoverDensity& cover) {
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t k = cover.size() - 1;
  for (std::size_t i = 0; i < cover.weights.size(); ++i) {
    acc += cover.weights[i];
    if (u <= acc) {
      k = i;
      break;
    }
  }
  return sample_cover_segment(rng, cover, k);
}

TiltedGammaDraw sample_tilted_gamma(RngStream& rng,
                                    const TiltedGammaParams& params, int N) {
  const CoverDensity cover = build_cover(params, N);
  TiltedGammaDraw draw;
  for (;;) {
    const double x = sample_cover(rng, cover);
    ++draw.proposals;
    const double gap = log_target(params, x) - cover.log_nu(x);
    if (gap > kEnvelopeTol) {
      throw EnvelopeViolation("sample_tilted_gamma: target exceeds envelope by " +
                              std::to_string(gap) + " at x=" + std::to_string(x) +
                              " for " + params_string(params));
    }
    if (std::log(rng.uniform01()) <= gap) {
      draw.value = x;
      return draw;
    }
    if (draw.proposals >= kProposalLimit) {
      throw ProposalLimitError("sample_tilted_gamma: no acceptance within 10^6 proposals for " +
                               params_string(params));
    }
  }
}

double sample_tilted_gamma_small(RngStream& rng, const TiltedGammaParams& params) {
  validate_params(params);
  if (log_target_derivative(params, 10.0 * kSmallModeSwitch) > 0.0) {
    throw std::domain_error("sample_tilted_gamma_small: mode above 1e-8 for " +
                            params_string(params));
  }
  const double d = static_cast<double>(params.d);
  const double rate = params.B - std::numbers::egamma_v<double> * d;
  return sample_gamma(rng, d + params.delta, rate);
}

}  // namespace ghsbp

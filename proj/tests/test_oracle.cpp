// Apache License, Version 2.0, refer to LICENSE.txt
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ghsbp/distributions.hpp"
#include "ghsbp/oracle.hpp"
#include "ghsbp/rng.hpp"
#include "ghsbp/tilted_gamma.hpp"

using ghsbp::adaptive_simpson;
using ghsbp::batch_means_stderr;
using ghsbp::ks_statistic;
using ghsbp::RngStream;
using ghsbp::sample_mean;
using ghsbp::sample_variance;
using ghsbp::TiltedGammaParams;
using ghsbp::tilted_gamma_cdf_at;
using ghsbp::wilson_hilferty_chi2_99;

TEST_CASE("adaptive_simpson on classic integrals") {
  const double pi = 3.141592653589793238462643383279502884;
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi,
                         1e-11) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 10.0,
                         1e-11) ==
        doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-10));
  // Orientation: reversed bounds flip the sign.
  CHECK(adaptive_simpson([](double x) { return x; }, 1.0, 0.0, 1e-10) ==
        doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("adaptive_simpson resolves a bump wider than a coarse panel") {
  // Normal(0.3, 0.05) bulk lies inside [0, 1]; panel width 1/64 < sigma, so
  // the composite seeding pass sees the feature.
  const double sigma = 0.05;
  const double mu = 0.3;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.141592653589793));
  const double got = adaptive_simpson(
      [&](double x) {
        const double z = (x - mu) / sigma;
        return norm * std::exp(-0.5 * z * z);
      },
      0.0, 1.0, 1e-10);
  CHECK(got == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("adaptive_simpson rejects non-finite integrands") {
  CHECK_THROWS_AS(
      (void)adaptive_simpson(
          [](double) { return std::numeric_limits<double>::quiet_NaN(); },
          0.0, 1.0, 1e-8),
      std::runtime_error);
}

TEST_CASE("tilted_gamma_cdf_at matches arbitrary-precision references") {
  // Params (d=2, delta=3, B=1); references computed with 50-digit quadrature
  // over the same window (0, 10 mode + 50), normalizer 1.5776244628666851.
  const TiltedGammaParams p{2, 3.0, 1.0};
  const std::vector<double> points = {0.1, 0.5, 1.0, 1.62, 2.5, 4.0};
  const auto cdf = tilted_gamma_cdf_at(p, points, 1e-10);
  REQUIRE(cdf.size() == points.size());

  const std::vector<double> expected = {
      1.961341101459963e-06, 0.005115902431164153, 0.09698458014951864,
      0.43264406932502563,   0.8623120101101942,   0.997510755537605};
  for (std::size_t i = 0; i < points.size(); ++i) {
    CAPTURE(points[i]);
    CHECK(cdf[i] == doctest::Approx(expected[i]).epsilon(5e-9).scale(1.0));
    if (i > 0) CHECK(cdf[i] >= cdf[i - 1]);
  }

  // Points past the quadrature window saturate at one.
  const std::vector<double> far = {1e9};
  CHECK(tilted_gamma_cdf_at(p, far)[0] == 1.0);

  // Points must be ascending.
  const std::vector<double> unsorted = {2.0, 1.0};
  CHECK_THROWS_AS((void)tilted_gamma_cdf_at(p, unsorted),
                  std::invalid_argument);
}

TEST_CASE("ks_statistic hand values and input checking") {
  // Uniform designs where every step gap equals 1/6.
  const std::vector<double> sample = {0.1, 0.2, 0.3};  // positions only
  const std::vector<double> cdf = {1.0 / 6.0, 3.0 / 6.0, 5.0 / 6.0};
  CHECK(ks_statistic(sample, cdf) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  const std::vector<double> two = {0.25, 0.75};
  CHECK(ks_statistic(two, two) == doctest::Approx(0.25).epsilon(1e-14));

  const std::vector<double> empty;
  CHECK_THROWS_AS((void)ks_statistic(empty, empty), std::invalid_argument);
  const std::vector<double> mismatched = {0.5};
  CHECK_THROWS_AS((void)ks_statistic(two, mismatched), std::invalid_argument);
}

TEST_CASE("wilson_hilferty_chi2_99 close to exact quantiles") {
  // Exact 0.99 chi-squared quantiles for k = 10, 63, 99.
  CHECK(std::abs(wilson_hilferty_chi2_99(10.0) - 23.209251159) /
            23.209251159 <
        5e-3);
  CHECK(std::abs(wilson_hilferty_chi2_99(63.0) - 92.0100236141) /
            92.0100236141 <
        1e-3);
  CHECK(std::abs(wilson_hilferty_chi2_99(99.0) - 134.641616856) /
            134.641616856 <
        1e-3);
  // The approximation sits slightly above the exact quantile in this range,
  // making threshold tests marginally conservative.
  CHECK(wilson_hilferty_chi2_99(10.0) >= 23.209251159);
  CHECK(wilson_hilferty_chi2_99(63.0) >= 92.0100236141);
}

TEST_CASE("sample_mean and sample_variance basics") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(sample_mean(xs) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("batch_means_stderr on iid and autocorrelated traces") {
  RngStream rng(61, 0);
  const int n = 10000;

  std::vector<double> iid(n);
  for (auto& v : iid) v = ghsbp::normal01(rng);
  const double se_iid = batch_means_stderr(iid);
  // Truth 1/sqrt(n) = 0.01; estimator noise ~ 0.01/sqrt(2*99).
  CHECK(se_iid > 0.006);
  CHECK(se_iid < 0.014);

  // AR(1), phi = 0.9: asymptotic se of the mean is
  // sd_x sqrt((1+phi)/(1-phi)) / sqrt(n) ~ 0.1, an order above the naive
  // iid formula (0.023); batch means must capture the inflation.
  std::vector<double> ar(n);
  double x = 0.0;
  for (int i = 0; i < 2000; ++i) x = 0.9 * x + ghsbp::normal01(rng);  // warmup
  for (auto& v : ar) {
    x = 0.9 * x + ghsbp::normal01(rng);
    v = x;
  }
  const double se_ar = batch_means_stderr(ar);
  const double naive = std::sqrt(sample_variance(ar) / n);
  CHECK(se_ar > 2.0 * naive);
  CHECK(se_ar > 0.05);
  CHECK(se_ar < 0.15);

  const std::vector<double> tiny = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS((void)batch_means_stderr(tiny), std::invalid_argument);
}

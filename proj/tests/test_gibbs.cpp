// Apache License, Version 2.0, refer to LICENSE.txt
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ghsbp/gibbs.hpp"
#include "ghsbp/rng.hpp"
#include "ghsbp/types.hpp"

using ghsbp::GibbsState;
using ghsbp::Hyperparams;
using ghsbp::RngStream;
using ghsbp::TransitionCounts;

namespace {

TransitionCounts counts_from(const std::vector<std::vector<std::int64_t>>& c) {
  TransitionCounts tc;
  tc.d = static_cast<int>(c.size());
  tc.counts = c;
  tc.row_totals.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::int64_t s = 0;
    for (auto v : c[i]) s += v;
    tc.row_totals[i] = s;
  }
  tc.validate();
  return tc;
}

}  // namespace

TEST_CASE("Hyperparams::validate rejects invalid settings") {
  Hyperparams ok;
  CHECK_NOTHROW(ok.validate());
  Hyperparams h;

  h = ok; h.alpha = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.beta = -1.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.b0 = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.knots_N = 0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.num_samples = 0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.burn_in = -1;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = ok; h.thin = 0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("init_state shapes and starting values") {
  const auto counts = counts_from({{3, 1, 0}, {0, 2, 2}, {1, 0, 0}});
  Hyperparams hp;
  RngStream rng(31, 0);
  const GibbsState s = ghsbp::init_state(rng, counts, hp);

  REQUIRE(s.pi.size() == 3);
  for (const auto& row : s.pi) {
    REQUIRE(row.size() == 3);
    double sum = 0.0;
    for (double v : row) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  REQUIRE(s.t.size() == 3);
  for (double v : s.t) CHECK(v == 1.0);
  REQUIRE(s.u.size() == 3);
  for (double v : s.u) CHECK(v > 0.0);
  REQUIRE(s.w.size() == 2);  // one auxiliary per stick break
  for (double v : s.w) CHECK(v > 0.0);

  // Log caches cover every row/column and agree with the stored values in a
  // well-conditioned state.
  REQUIRE(s.log_u.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s.log_u[i] == doctest::Approx(std::log(s.u[i])).epsilon(1e-12));
  }
  REQUIRE(s.log_pi_col.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < 3; ++i) col += std::log(s.pi[i][j]);
    CHECK(s.log_pi_col[j] == doctest::Approx(col).epsilon(1e-10));
  }
}

TEST_CASE("tilted_params_for assembles the full conditional parameters") {
  GibbsState s;
  s.pi = {{0.5, 0.3, 0.2}, {0.25, 0.5, 0.25}, {0.1, 0.6, 0.3}};
  s.t = {1.0, 1.0, 1.0};
  s.u = {1.0, 2.0, 4.0};
  s.w = {2.0, 3.0};  // d - 1 auxiliaries
  Hyperparams hp;
  hp.alpha = 1.5;
  hp.beta = 2.5;
  hp.b0 = 10.0;

  const double log_u_sum = std::log(1.0) + std::log(2.0) + std::log(4.0);

  const auto p0 = ghsbp::tilted_params_for(s, hp, 0);
  CHECK(p0.d == 3);
  CHECK(p0.delta == 1.5);  // interior column uses alpha
  const double b0_expected =
      10.0 + 2.0 - (std::log(0.5) + std::log(0.25) + std::log(0.1)) -
      log_u_sum;
  CHECK(p0.B == doctest::Approx(b0_expected).epsilon(1e-14));

  const auto p1 = ghsbp::tilted_params_for(s, hp, 1);
  CHECK(p1.delta == 1.5);
  const double b1_expected =
      10.0 + (2.0 + 3.0) - (std::log(0.3) + std::log(0.5) + std::log(0.6)) -
      log_u_sum;
  CHECK(p1.B == doctest::Approx(b1_expected).epsilon(1e-14));

  // The last column uses beta and the same capped w sum (there is no w_d).
  const auto p2 = ghsbp::tilted_params_for(s, hp, 2);
  CHECK(p2.delta == 2.5);
  const double b2_expected =
      10.0 + (2.0 + 3.0) - (std::log(0.2) + std::log(0.25) + std::log(0.3)) -
      log_u_sum;
  CHECK(p2.B == doctest::Approx(b2_expected).epsilon(1e-14));

  CHECK_THROWS_AS(ghsbp::tilted_params_for(s, hp, 3), std::out_of_range);
  CHECK_THROWS_AS(ghsbp::tilted_params_for(s, hp, -1), std::out_of_range);
}

TEST_CASE("tilted_params_for prefers the log caches when present") {
  GibbsState s;
  s.pi = {{0.5, 0.5}, {0.5, 0.5}};
  s.t = {1.0, 1.0};
  s.u = {1.0, 1.0};
  s.w = {4.0};
  Hyperparams hp;
  hp.alpha = 1.0;
  hp.beta = 1.0;
  hp.b0 = 10.0;

  // Caches deliberately disagree with pi/u so the preferred source is visible:
  // the clamped pi entries would give -log 0.5 terms, the caches say -100 and
  // -200 per column and -3 per u term.
  s.log_pi_col = {-100.0, -200.0};
  s.log_u = {-3.0, -3.0};

  const auto p0 = ghsbp::tilted_params_for(s, hp, 0);
  CHECK(p0.B == doctest::Approx(10.0 + 4.0 + 100.0 + 6.0).epsilon(1e-14));
  const auto p1 = ghsbp::tilted_params_for(s, hp, 1);
  CHECK(p1.B == doctest::Approx(10.0 + 4.0 + 200.0 + 6.0).epsilon(1e-14));

  // Partially sized caches are ignored in favor of the stored values.
  s.log_pi_col = {-100.0};
  s.log_u.clear();
  const auto pf = ghsbp::tilted_params_for(s, hp, 0);
  CHECK(pf.B ==
        doctest::Approx(10.0 + 4.0 - 2.0 * std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("update_u draws Gamma(sum t, 1) auxiliaries") {
  const auto counts = counts_from({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  Hyperparams hp;
  RngStream rng(32, 0);
  GibbsState s = ghsbp::init_state(rng, counts, hp);
  s.t = {1.0, 2.0, 3.0};  // sum 6

  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    ghsbp::update_u(rng, s);
    sum += s.u[0];
    sumsq += s.u[0] * s.u[0];
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 6.0) < 5.0 * std::sqrt(6.0 / n));
  CHECK(std::abs(sumsq / n - mean * mean - 6.0) < 0.35);
}

TEST_CASE("update_w draws Gamma(alpha, tail sums of t)") {
  const auto counts = counts_from({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  Hyperparams hp;
  hp.alpha = 2.0;
  RngStream rng(33, 0);
  GibbsState s = ghsbp::init_state(rng, counts, hp);
  s.t = {1.0, 2.0, 3.0};  // tails carrying an auxiliary: 6, 5

  const int n = 20000;
  std::vector<double> mean(2, 0.0);
  for (int i = 0; i < n; ++i) {
    ghsbp::update_w(rng, s, hp);
    REQUIRE(s.w.size() == 2);  // no auxiliary for the residual component
    for (int j = 0; j < 2; ++j) mean[j] += s.w[j];
  }
  const double tails[2] = {6.0, 5.0};
  for (int j = 0; j < 2; ++j) {
    const double m = hp.alpha / tails[j];
    const double se = std::sqrt(hp.alpha / (tails[j] * tails[j]) / n);
    CHECK(std::abs(mean[j] / n - m) < 5.0 * se);
  }
}

TEST_CASE("update_pi draws Dirichlet(counts + t) rows") {
  const auto counts = counts_from({{0, 0}, {0, 0}});
  Hyperparams hp;
  RngStream rng(34, 0);
  GibbsState s = ghsbp::init_state(rng, counts, hp);
  s.t = {3.0, 1.0};

  const int n = 20000;
  double mean0 = 0.0;
  for (int i = 0; i < n; ++i) {
    ghsbp::update_pi(rng, s, counts);
    CHECK(s.pi[0][0] + s.pi[0][1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.pi[0][0] > 0.0);
    CHECK(s.pi[1][1] > 0.0);
    mean0 += s.pi[0][0];
  }
  // Row 0 ~ Dirichlet(3, 1) marginal Beta(3, 1): mean 0.75.
  const double se = std::sqrt(0.75 * 0.25 / 5.0 / n);
  CHECK(std::abs(mean0 / n - 0.75) < 5.0 * se);
}

TEST_CASE("update_t keeps t positive and counts proposals") {
  const auto counts = counts_from({{5, 1}, {2, 3}});
  Hyperparams hp;
  RngStream rng(35, 0);
  GibbsState s = ghsbp::init_state(rng, counts, hp);
  for (int i = 0; i < 50; ++i) {
    const long proposals = ghsbp::update_t(rng, s, hp);
    CHECK(proposals >= 2);  // at least one proposal per coordinate
    for (double v : s.t) {
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("update_t switches to the closed-form draw for collapsed columns") {
  const auto counts = counts_from({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  Hyperparams hp;
  RngStream rng(36, 0);
  GibbsState s = ghsbp::init_state(rng, counts, hp);
  // A column whose pi mass has collapsed far below the representable range of
  // exp() drives B to ~1e12, where no bracket search can hold the mode.
  s.log_pi_col = {-1.0, -1.0, -1e12};
  s.log_u = {0.0, 0.0, 0.0};

  for (int rep = 0; rep < 200; ++rep) {
    CHECK_NOTHROW(ghsbp::update_t(rng, s, hp));
    CHECK(s.t[2] > 0.0);
    CHECK(s.t[2] < 1e-9);  // ~ (d + beta) / B
    CHECK(std::isfinite(s.t[0]));
    s.log_pi_col = {-1.0, -1.0, -1e12};  // pin the regime across sweeps
    s.log_u = {0.0, 0.0, 0.0};
  }
}

TEST_CASE("run: retention schedule, traces, and determinism") {
  const auto counts =
      counts_from({{8, 2, 1}, {3, 6, 2}, {1, 1, 9}});
  Hyperparams hp;
  hp.num_samples = 30;
  hp.burn_in = 10;
  hp.thin = 2;

  ghsbp::RunOptions opts;
  opts.retain_samples = true;
  opts.retain_gamma = true;

  RngStream rng(5, 0);
  const auto res = ghsbp::run(rng, counts, hp, opts);

  const int total_sweeps = hp.burn_in + hp.num_samples * hp.thin;  // 70
  CHECK(res.alpha0_trace.size() == static_cast<std::size_t>(total_sweeps));
  CHECK(res.min_t_per_sweep.size() == static_cast<std::size_t>(total_sweeps));
  CHECK(res.max_t_per_sweep.size() == static_cast<std::size_t>(total_sweeps));
  CHECK(res.mean_proposals_per_sweep.size() ==
        static_cast<std::size_t>(total_sweeps));
  CHECK(res.retained_samples.size() == 30);
  CHECK(res.gamma_trace.size() == 30);
  CHECK(res.mean_proposals >= 1.0);

  for (const auto& g : res.gamma_trace) {
    double sum = 0.0;
    for (double v : g) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < res.alpha0_trace.size(); ++i) {
    CHECK(res.alpha0_trace[i] > 0.0);
    CHECK(res.min_t_per_sweep[i] <= res.max_t_per_sweep[i]);
  }

  // The posterior mean equals the average of the retained samples.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (const auto& m : res.retained_samples) acc += m[i][j];
      CHECK(res.mean_tpm[i][j] ==
            doctest::Approx(acc / 30.0).epsilon(1e-12));
    }
    double row = 0.0;
    for (double v : res.mean_tpm[i]) row += v;
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Determinism in the seed, sensitivity to it.
  RngStream rng_b(5, 0);
  const auto res_b = ghsbp::run(rng_b, counts, hp, opts);
  RngStream rng_c(6, 0);
  const auto res_c = ghsbp::run(rng_c, counts, hp, opts);
  bool any_diff = false;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(res.mean_tpm[i][j] == res_b.mean_tpm[i][j]);
      if (res.mean_tpm[i][j] != res_c.mean_tpm[i][j]) any_diff = true;
    }
  }
  CHECK(any_diff);
}

TEST_CASE("run: posterior concentrates on the truth under heavy data") {
  // Simulate a well-observed 3-state chain by direct inversion, then check
  // the posterior mean lands near the empirical frequencies.
  const std::vector<std::vector<double>> truth = {
      {0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.1, 0.2, 0.7}};
  RngStream sim(77, 0);
  std::vector<std::vector<std::int64_t>> c(3, std::vector<std::int64_t>(3, 0));
  int state = 0;
  for (int step = 0; step < 30000; ++step) {
    const double u = sim.uniform01();
    int nxt = 0;
    double acc = truth[static_cast<std::size_t>(state)][0];
    while (u > acc && nxt < 2) {
      ++nxt;
      acc += truth[static_cast<std::size_t>(state)][static_cast<std::size_t>(nxt)];
    }
    ++c[static_cast<std::size_t>(state)][static_cast<std::size_t>(nxt)];
    state = nxt;
  }
  const auto counts = counts_from(c);

  Hyperparams hp;
  hp.num_samples = 200;
  hp.burn_in = 100;
  RngStream rng(41, 0);
  const auto res = ghsbp::run(rng, counts, hp);

  for (std::size_t i = 0; i < 3; ++i) {
    const double n_i = static_cast<double>(counts.row_totals[i]);
    for (std::size_t j = 0; j < 3; ++j) {
      const double freq =
          static_cast<double>(counts.counts[i][j]) / n_i;
      CHECK(std::abs(res.mean_tpm[i][j] - freq) < 0.03);
    }
  }
}

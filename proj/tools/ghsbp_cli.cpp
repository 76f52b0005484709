// Apache License, Version 2.0, refer to LICENSE.txt
//
// Command-line front end: posterior estimation of a Markov transition matrix
// under hierarchical stick-breaking priors, benchmark chain simulation, and
// full benchmark-table reproduction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghsbp/distributions.hpp"
#include "ghsbp/evaluation.hpp"
#include "ghsbp/gibbs.hpp"
#include "ghsbp/io.hpp"
#include "ghsbp/markov_sim.hpp"
#include "ghsbp/oracle.hpp"
#include "ghsbp/rng.hpp"
#include "ghsbp/special_math.hpp"
#include "ghsbp/tilted_gamma.hpp"
#include "ghsbp/types.hpp"

namespace {

using namespace ghsbp;

struct CliOptions {
  std::string mode;
  std::string input;
  std::string output;
  double alpha = 1.0;
  double beta = 1.0;
  double b0 = 10.0;
  int knots = 2;
  int samples = 2000;
  int burnin = 1000;
  int thin = 1;
  std::uint64_t seed = 1;
  std::int64_t chain_length = 200000;
  std::string variant = "logp";
  int truncation_extra = 0;
  double scale_length = 1.0;
  double scale_samples = 1.0;
  bool trace = false;
  bool rerun_per_row = false;
  bool chain_length_given = false;
  bool samples_given = false;
  bool burnin_given = false;
};

Variant parse_variant(const std::string& v) {
  std::string lower(v);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "logp") return Variant::LogP;
  if (lower == "loglogp") return Variant::LogLogP;
  throw std::invalid_argument("unknown variant '" + v + "' (expected logp or loglogp)");
}

std::string variant_name(Variant v) {
  return v == Variant::LogP ? "logp" : "loglogp";
}

// Explicit flags win; otherwise the full-scale defaults are scaled down by the
// --scale-* factors so quick runs keep the benchmark's shape.
std::int64_t resolved_length(const CliOptions& o) {
  if (o.chain_length_given) return o.chain_length;
  return std::max<std::int64_t>(
      2, static_cast<std::int64_t>(std::llround(200000.0 * o.scale_length)));
}

int resolved_samples(const CliOptions& o) {
  if (o.samples_given) return o.samples;
  return std::max(1, static_cast<int>(std::llround(2000.0 * o.scale_samples)));
}

int resolved_burnin(const CliOptions& o) {
  if (o.burnin_given) return o.burnin;
  return std::max(0, static_cast<int>(std::llround(1000.0 * o.scale_samples)));
}

Hyperparams hyperparams_from(const CliOptions& o) {
  Hyperparams hp;
  hp.alpha = o.alpha;
  hp.beta = o.beta;
  hp.b0 = o.b0;
  hp.knots_N = o.knots;
  hp.num_samples = resolved_samples(o);
  hp.burn_in = resolved_burnin(o);
  hp.thin = o.thin;
  hp.seed = o.seed;
  hp.validate();
  return hp;
}

void require_output(const CliOptions& o) {
  if (o.output.empty()) {
    throw std::invalid_argument("--output is required for mode " + o.mode);
  }
}

int run_estimate(const CliOptions& opt) {
  if (opt.input.empty()) {
    throw std::invalid_argument("--input is required for mode estimate");
  }
  require_output(opt);

  ChainRealization chain;
  chain.states = read_sequence(opt.input);
  chain.max_state = *std::max_element(chain.states.begin(), chain.states.end());
  if (chain.states.size() < 2) {
    throw std::runtime_error(opt.input + ": need at least 2 states");
  }
  const int d = std::max(
      static_cast<int>(chain.max_state) + 1 + opt.truncation_extra, 2);
  const TransitionCounts counts = count_transitions(chain, d);
  const Hyperparams hp = hyperparams_from(opt);

  RngStream rng(opt.seed);
  RunOptions run_options;
  run_options.retain_gamma = opt.trace;
  const PosteriorSummary summary = run(rng, counts, hp, run_options);

  const std::vector<std::string> run_header = {
      "ghsbp estimate",
      "d=" + std::to_string(d) +
          " truncation_extra=" + std::to_string(opt.truncation_extra) +
          " states=" + std::to_string(chain.states.size()),
      "alpha=" + format_double(hp.alpha) + " beta=" + format_double(hp.beta) +
          " b0=" + format_double(hp.b0),
      "samples=" + std::to_string(hp.num_samples) +
          " burnin=" + std::to_string(hp.burn_in) +
          " thin=" + std::to_string(hp.thin) +
          " knots=" + std::to_string(hp.knots_N),
      "seed=" + std::to_string(opt.seed),
  };

  std::vector<std::string> tpm_header = run_header;
  tpm_header.front() += " posterior-mean tpm";
  write_matrix_csv(opt.output + ".tpm.csv", summary.mean_tpm, tpm_header);

  std::vector<std::string> mle_header = run_header;
  mle_header.front() += " mle tpm";
  write_matrix_csv(opt.output + ".mle.csv", mle_tpm(counts), mle_header);

  const std::size_t total_sweeps = summary.alpha0_trace.size();
  double alpha0_post = 0.0;
  for (std::size_t s = static_cast<std::size_t>(hp.burn_in); s < total_sweeps; ++s) {
    alpha0_post += summary.alpha0_trace[s];
  }
  alpha0_post /= static_cast<double>(total_sweeps - static_cast<std::size_t>(hp.burn_in));
  const double t_min = *std::min_element(summary.min_t_per_sweep.begin(),
                                         summary.min_t_per_sweep.end());
  const double t_max = *std::max_element(summary.max_t_per_sweep.begin(),
                                         summary.max_t_per_sweep.end());
  const std::vector<std::string> diag = {
      "mode: estimate",
      "input_states: " + std::to_string(chain.states.size()),
      "max_state: " + std::to_string(chain.max_state),
      "d: " + std::to_string(d),
      "truncation_extra: " + std::to_string(opt.truncation_extra),
      "alpha: " + format_double(hp.alpha),
      "beta: " + format_double(hp.beta),
      "b0: " + format_double(hp.b0),
      "samples: " + std::to_string(hp.num_samples),
      "burnin: " + std::to_string(hp.burn_in),
      "thin: " + std::to_string(hp.thin),
      "knots: " + std::to_string(hp.knots_N),
      "seed: " + std::to_string(opt.seed),
      "sweeps: " + std::to_string(total_sweeps),
      "mean_proposals_per_t_draw: " + format_double(summary.mean_proposals),
      "alpha0_post_burnin_mean: " + format_double(alpha0_post),
      "t_min_overall: " + format_double(t_min),
      "t_max_overall: " + format_double(t_max),
  };
  write_text(opt.output + ".diag.txt", diag);

  if (opt.trace) {
    std::vector<std::string> lines;
    lines.reserve(summary.gamma_trace.size() + run_header.size() + 1);
    for (const std::string& h : run_header) lines.push_back("# " + h);
    std::string cols = "sample,alpha0";
    for (int j = 0; j < d; ++j) cols += ",g" + std::to_string(j);
    lines.push_back(cols);
    for (std::size_t k = 0; k < summary.gamma_trace.size(); ++k) {
      const std::size_t sweep =
          static_cast<std::size_t>(hp.burn_in) + (k + 1) * static_cast<std::size_t>(hp.thin) - 1;
      std::string row =
          std::to_string(k + 1) + "," + format_double(summary.alpha0_trace[sweep]);
      for (double g : summary.gamma_trace[k]) row += "," + format_double(g);
      lines.push_back(std::move(row));
    }
    write_text(opt.output + ".trace.csv", lines);
  }
  return 0;
}

int run_simulate(const CliOptions& opt) {
  require_output(opt);
  GeometricChainSpec spec;
  spec.variant = parse_variant(opt.variant);
  spec.length = resolved_length(opt);
  spec.start_state = 0;
  spec.seed = opt.seed;
  const ChainRealization chain = simulate_chain(spec);
  const std::vector<std::string> header = {
      "ghsbp simulate",
      "variant=" + variant_name(spec.variant),
      "length=" + std::to_string(spec.length),
      "start_state=0",
      "seed=" + std::to_string(spec.seed),
      "max_state=" + std::to_string(chain.max_state),
  };
  write_sequence(opt.output + ".chain.txt", chain.states, header);
  return 0;
}

int run_table(const CliOptions& opt, int table) {
  require_output(opt);
  const Variant variant = table == 1 ? Variant::LogP : Variant::LogLogP;
  const std::vector<HyperTriple> grid = table == 1 ? table1_grid() : table2_grid();
  const std::int64_t length = resolved_length(opt);
  McmcProtocol protocol;
  protocol.num_samples = resolved_samples(opt);
  protocol.burn_in = resolved_burnin(opt);
  protocol.thin = opt.thin;
  protocol.knots_N = opt.knots;
  const int threads = resolve_worker_count();

  GeometricChainSpec spec;
  spec.variant = variant;
  spec.length = length;
  spec.start_state = 0;
  spec.seed = opt.seed;

  std::vector<EvalReport> reports;
  if (!opt.rerun_per_row) {
    const ChainRealization chain = simulate_chain(spec);
    reports = compare_methods(chain, variant, grid, opt.seed, protocol, threads);
  } else {
    const ChainRealization base = simulate_chain(spec);
    reports = compare_methods(base, variant, std::span<const HyperTriple>{},
                              opt.seed, protocol, 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      GeometricChainSpec row_spec = spec;
      row_spec.seed = mix64(opt.seed ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
      const ChainRealization row_chain = simulate_chain(row_spec);
      const std::span<const HyperTriple> one(&grid[k], 1);
      std::vector<EvalReport> row =
          compare_methods(row_chain, variant, one, row_spec.seed, protocol, 1);
      reports.push_back(row[1]);
    }
  }

  const std::vector<std::string> header = {
      "ghsbp reproduce-table" + std::to_string(table),
      "variant=" + variant_name(variant),
      "chain_length=" + std::to_string(length),
      "samples=" + std::to_string(protocol.num_samples) +
          " burnin=" + std::to_string(protocol.burn_in) +
          " thin=" + std::to_string(protocol.thin) +
          " knots=" + std::to_string(protocol.knots_N),
      "seed=" + std::to_string(opt.seed),
      "rerun_per_row=" + std::to_string(opt.rerun_per_row ? 1 : 0),
  };
  write_reports_csv(opt.output + ".table.csv", reports, header);
  return 0;
}

int run_selftest() {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok,
                          const std::string& detail) {
    std::cout << "selftest " << name << ": " << (ok ? "OK" : "FAIL");
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  // 1. Rejection sampler against quadrature CDF (KS distance).
  try {
    const TiltedGammaParams params{2, 3.0, 1.0};
    RngStream rng(12345);
    std::vector<double> draws(20000);
    for (double& v : draws) v = sample_tilted_gamma(rng, params, 2).value;
    const double ks = ks_vs_tilted_gamma(params, std::move(draws));
    report("sampler-ks", ks < 0.03, "ks=" + format_double(ks));
  } catch (const std::exception& e) {
    report("sampler-ks", false, e.what());
  }

  // 2. Envelope dominance on log-spaced grids.
  try {
    double worst = -1e300;
    const TiltedGammaParams cases[] = {{5, 0.5, 10.0}, {1, 2.0, -3.0}};
    for (const TiltedGammaParams& params : cases) {
      for (int n_knots = 1; n_knots <= 2; ++n_knots) {
        const CoverDensity cover = build_cover(params, n_knots);
        const double hi = 10.0 * find_mode(params) + 50.0;
        const double log_lo = std::log(1e-8);
        const double log_hi = std::log(hi);
        for (int i = 0; i < 1000; ++i) {
          const double x =
              std::exp(log_lo + (log_hi - log_lo) * i / 999.0);
          worst = std::max(worst, log_target(params, x) - cover.log_nu(x));
        }
      }
    }
    report("envelope-dominance", worst <= 1e-9,
           "max_gap=" + format_double(worst));
  } catch (const std::exception& e) {
    report("envelope-dominance", false, e.what());
  }

  // 3. Generalized Dirichlet closed-form moments against Monte Carlo.
  try {
    GDParams params;
    params.alphas = {2.0, 1.0};
    params.betas = {3.0, 2.0};
    const GDMoments moments = gd_moments(params);
    RngStream rng(777);
    const int n = 100000;
    std::vector<double> mc_mean(2, 0.0);
    for (int i = 0; i < n; ++i) {
      const std::vector<double> y = sample_gd(rng, params);
      mc_mean[0] += y[0];
      mc_mean[1] += y[1];
    }
    double worst_z = 0.0;
    for (int j = 0; j < 2; ++j) {
      mc_mean[static_cast<std::size_t>(j)] /= n;
      const double se = std::sqrt(moments.variances[static_cast<std::size_t>(j)] / n);
      worst_z = std::max(worst_z,
                         std::abs(mc_mean[static_cast<std::size_t>(j)] -
                                  moments.means[static_cast<std::size_t>(j)]) / se);
    }
    report("gd-moments", worst_z < 6.0, "max_z=" + format_double(worst_z));
  } catch (const std::exception& e) {
    report("gd-moments", false, e.what());
  }

  // 4. Stick-breaking weights sum to one and stay positive.
  try {
    GGEMParams params;
    params.alpha = 2.0;
    params.beta = 3.0;
    params.dim = 7;
    RngStream rng(99);
    double worst = 0.0;
    double min_entry = 1.0;
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> g = sample_ggem(rng, params);
      double total = 0.0;
      for (double v : g) {
        total += v;
        min_entry = std::min(min_entry, v);
      }
      worst = std::max(worst, std::abs(total - 1.0));
    }
    report("ggem-sum", worst <= 1e-15 && min_entry > 0.0,
           "max_dev=" + format_double(worst));
  } catch (const std::exception& e) {
    report("ggem-sum", false, e.what());
  }

  // 5. Bitwise determinism of the sampler and sensitivity to the seed.
  try {
    GeometricChainSpec spec;
    spec.variant = Variant::LogP;
    spec.length = 300;
    spec.seed = 5;
    const ChainRealization chain = simulate_chain(spec);
    const TransitionCounts counts =
        count_transitions(chain, static_cast<int>(chain.max_state) + 1);
    Hyperparams hp;
    hp.alpha = 2.0;
    hp.beta = 1.0;
    hp.b0 = 10.0;
    hp.num_samples = 40;
    hp.burn_in = 20;
    RngStream r1(7);
    RngStream r2(7);
    RngStream r3(8);
    const Matrix a = run(r1, counts, hp).mean_tpm;
    const Matrix b = run(r2, counts, hp).mean_tpm;
    const Matrix c = run(r3, counts, hp).mean_tpm;
    bool identical = true;
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a[i].size(); ++j) {
        identical = identical && a[i][j] == b[i][j];
        differs = differs || a[i][j] != c[i][j];
      }
    }
    report("determinism", identical && differs,
           identical ? (differs ? "" : "seed change had no effect")
                     : "same seed produced different results");
  } catch (const std::exception& e) {
    report("determinism", false, e.what());
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Transition-matrix estimation for Markov chains on large state spaces "
      "under hierarchical stick-breaking priors"};
  app.set_config("--config", "", "Read options from a key=value file");

  CliOptions opt;
  app.add_option("--mode", opt.mode,
                 "One of: estimate, simulate, reproduce-table1, "
                 "reproduce-table2, selftest")
      ->required()
      ->check(CLI::IsMember({"estimate", "simulate", "reproduce-table1",
                             "reproduce-table2", "selftest"}));
  app.add_option("--input", opt.input,
                 "State-sequence file, one state index per line (estimate)");
  app.add_option("--output", opt.output,
                 "Output path prefix; files get mode-specific suffixes");
  app.add_option("--alpha", opt.alpha, "Stick-breaking Beta shape alpha")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--beta", opt.beta, "Stick-breaking Beta shape beta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--b0", opt.b0, "Rate of the concentration prior")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--knots", opt.knots,
                 "Envelope knot parameter N (2N+2 tangent knots)")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app.add_option("--samples", opt.samples, "Retained posterior samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--burnin", opt.burnin, "Burn-in sweeps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--thin", opt.thin, "Thinning stride")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  app.add_option("--chain-length", opt.chain_length,
                 "Simulated chain length (simulate / reproduce modes)")
      ->check(CLI::Range(static_cast<std::int64_t>(2),
                         static_cast<std::int64_t>(1) << 40))
      ->capture_default_str();
  app.add_option("--variant", opt.variant,
                 "Benchmark chain family: logp or loglogp")
      ->check(CLI::IsMember({"logp", "loglogp"}, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--truncation-extra", opt.truncation_extra,
                 "Extra all-zero states appended beyond the largest observed "
                 "state (estimate)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--scale-length", opt.scale_length,
                 "Scale factor on the default chain length 200000")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--scale-samples", opt.scale_samples,
                 "Scale factor on the default samples 2000 / burn-in 1000")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--trace", opt.trace,
               "Also write the retained concentration/weight trace (estimate)");
  app.add_flag("--rerun-per-row", opt.rerun_per_row,
               "Reproduce modes: simulate an independent chain per table row");

  CLI11_PARSE(app, argc, argv);
  opt.chain_length_given = app.count("--chain-length") > 0;
  opt.samples_given = app.count("--samples") > 0;
  opt.burnin_given = app.count("--burnin") > 0;

  try {
    if (opt.mode == "estimate") return run_estimate(opt);
    if (opt.mode == "simulate") return run_simulate(opt);
    if (opt.mode == "reproduce-table1") return run_table(opt, 1);
    if (opt.mode == "reproduce-table2") return run_table(opt, 2);
    return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

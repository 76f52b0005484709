// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/markov_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghsbp {

double p_of_state(Variant variant, std::int64_t x) {
  if (x < 0) throw std::domain_error("p_of_state: state must be non-negative");
  const double xd = static_cast<double>(x);
  switch (variant) {
    case Variant::LogP:
      return 1.0 / (std::log(xd + 1.0) + 10.0);
    case Variant::LogLogP:
      return 1.0 / std::log(std::log(xd + 1.0) + 100.0);
  }
  throw std::invalid_argument("p_of_state: unknown variant");
}

std::int64_t next_state(RngStream& rng, Variant variant, std::int64_t x) {
  const double p = p_of_state(variant, x);
  const double u = rng.uniform01();
  // Inversion: the geometric count of failures before the first success is
  // floor(log(u) / log(1 - p)).
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

ChainRealization simulate_chain(const GeometricChainSpec& spec) {
  if (spec.length < 2) {
    throw std::invalid_argument("simulate_chain: length must be >= 2");
  }
  if (spec.start_state < 0) {
    throw std::invalid_argument("simulate_chain: start_state must be >= 0");
  }
  RngStream rng(spec.seed);
  ChainRealization chain;
  chain.states.resize(static_cast<std::size_t>(spec.length));
  chain.states[0] = spec.start_state;
  chain.max_state = spec.start_state;
  for (std::size_t i = 1; i < chain.states.size(); ++i) {
    chain.states[i] = next_state(rng, spec.variant, chain.states[i - 1]);
    if (chain.states[i] > chain.max_state) chain.max_state = chain.states[i];
  }
  return chain;
}

TransitionCounts count_transitions(const ChainRealization& chain, int d) {
  if (chain.states.size() < 2) {
    throw std::invalid_argument("count_transitions: need at least 2 states");
  }
  if (static_cast<std::int64_t>(d) < chain.max_state + 1) {
    throw std::out_of_range("count_transitions: d=" + std::to_string(d) +
                            " cannot hold max state " +
                            std::to_string(chain.max_state));
  }
  TransitionCounts counts = TransitionCounts::zeros(d);
  for (std::size_t i = 0; i + 1 < chain.states.size(); ++i) {
    const std::int64_t a = chain.states[i];
    const std::int64_t b = chain.states[i + 1];
    if (a < 0 || b < 0) {
      throw std::out_of_range("count_transitions: negative state in chain");
    }
    ++counts.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    ++counts.row_totals[static_cast<std::size_t>(a)];
  }
  return counts;
}

Matrix true_tpm(Variant variant, int d) {
  if (d < 1) throw std::invalid_argument("true_tpm: d must be >= 1");
  Matrix tpm(static_cast<std::size_t>(d),
             std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int i = 0; i < d; ++i) {
    const double p = p_of_state(variant, i);
    const double log_q = std::log1p(-p);
    for (int j = 0; j < d; ++j) {
      tpm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::exp(static_cast<double>(j) * log_q) * p;
    }
  }
  return tpm;
}

Matrix mle_tpm(const TransitionCounts& counts) {
  counts.validate();
  const std::size_t d = static_cast<std::size_t>(counts.d);
  Matrix tpm(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    const std::int64_t n_i = counts.row_totals[i];
    if (n_i == 0) {
      for (std::size_t j = 0; j < d; ++j) {
        tpm[i][j] = 1.0 / static_cast<double>(d);
      }
      continue;
    }
    for (std::size_t j = 0; j < d; ++j) {
      tpm[i][j] = static_cast<double>(counts.counts[i][j]) /
                  static_cast<double>(n_i);
    }
  }
  return tpm;
}

}  // namespace ghsbp

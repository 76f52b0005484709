// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <span>

namespace ghsbp {

// Natural log of the Gamma function for x > 0.
// Throws std::domain_error for non-positive or non-finite arguments.
double log_gamma(double x);

// Digamma function psi(x) = d/dx log Gamma(x) for x > 0.
// Throws std::domain_error for non-positive or non-finite arguments.
double digamma(double x);

// log B(a, b) = log_gamma(a) + log_gamma(b) - log_gamma(a + b), a > 0, b > 0.
double log_beta(double a, double b);

// Numerically stable log(sum_i exp(values[i])). Empty input -> -infinity.
double log_sum_exp(std::span<const double> values);

}  // namespace ghsbp

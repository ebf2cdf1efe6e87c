#pragma once

#include <cstdint>

namespace fdg {

/// Gamma function for real arguments.
///
/// Lanczos approximation (g = 7, nine terms) on x >= 1/2 and the reflection
/// formula below that. Relative accuracy is about 1e-15 away from the poles.
/// Throws std::domain_error at x = 0, -1, -2, ...
double gamma_fn(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// True when x is 0, -1, -2, ... to within a few ulps.
bool is_nonpositive_integer(double x);

/// Binomial coefficient C(n, k) for small n.
double binomial(int n, int k);

/// n! as a double.
double factorial(int n);

}  // namespace fdg

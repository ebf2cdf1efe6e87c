#include "fdg/special.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdg {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  double sum = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) sum += kLanczosCoef[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  // t^(z+0.5) split in two to delay overflow near x = 171
  const double half_pow = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * sum;
}

}  // namespace

bool is_nonpositive_integer(double x) {
  if (x > 0.5) return false;
  const double r = std::nearbyint(x);
  return std::abs(x - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
}

double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  if (r > 1.0) return -std::sin(std::numbers::pi * (r - 1.0));
  return std::sin(std::numbers::pi * r);
}

double gamma_fn(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) throw std::domain_error("gamma_fn: pole at x = " + std::to_string(x));
  if (x >= 0.5) {
    // exact on small integers, where the Lanczos sum is off by a few ulps
    if (x <= 20.0 && x == std::floor(x)) return factorial(static_cast<int>(x) - 1);
    return lanczos_gamma(x);
  }
  return std::numbers::pi / (sin_pi(x) * lanczos_gamma(1.0 - x));
}

double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::nearbyint(c);
}

}  // namespace fdg

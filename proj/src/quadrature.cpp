#include "fdg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdg {

namespace {

GaussRule make_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const std::array<GaussRule, kMaxGaussOrder + 1> rules = [] {
    std::array<GaussRule, kMaxGaussOrder + 1> r;
    for (int k = 1; k <= kMaxGaussOrder; ++k) r[k] = make_rule(k);
    return r;
  }();
  if (n < 1 || n > kMaxGaussOrder) throw std::out_of_range("gauss_legendre: unsupported order");
  return rules[n];
}

int gauss_order_for_gap(double gap, double width, double digits, int min_order) {
  if (!(gap > 0.0)) return kMaxGaussOrder;
  const double x = 1.0 + 2.0 * gap / width;
  const double rho = x + std::sqrt(x * x - 1.0);
  const int n = static_cast<int>(std::ceil(digits * std::numbers::ln10 / (2.0 * std::log(rho))));
  return std::clamp(n, min_order, kMaxGaussOrder);
}

}  // namespace fdg

#pragma once

#include <span>
#include <vector>

namespace fdg {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 96;

/// Cached n-point Gauss-Legendre rule, 1 <= n <= kMaxGaussOrder.
const GaussRule& gauss_legendre(int n);

/// Points needed for an n-point rule to reach `digits` correct digits on an
/// interval whose nearest real singularity sits `gap` away from an end of an
/// interval of length `width` (Bernstein-ellipse estimate).
int gauss_order_for_gap(double gap, double width, double digits = 16.0, int min_order = 2);

}  // namespace fdg

#include "fdg/fem1d.hpp"

#include <cmath>
#include <stdexcept>

#include "fdg/quadrature.hpp"

namespace fdg {

namespace {

constexpr int kElementPoints = 4;
constexpr int kLoadPoints = 6;

// value of the P1 function on element e = [x_e, x_{e+1}] at local y in [0, 1]
double element_value(std::span<const double> c, std::size_t e, std::size_t m, double y) {
  const double left = (e >= 1 && e <= m) ? c[e - 1] : 0.0;
  const double right = (e + 1 <= m) ? c[e] : 0.0;
  return (1.0 - y) * left + y * right;
}

}  // namespace

FemGrid build_grid_intervals(std::size_t elements) {
  if (elements < 2) throw std::invalid_argument("build_grid: need at least one interior node");
  FemGrid g;
  g.M = elements - 1;
  g.h = 1.0 / static_cast<double>(elements);
  g.nodes.resize(g.M);
  for (std::size_t i = 0; i < g.M; ++i) g.nodes[i] = static_cast<double>(i + 1) / static_cast<double>(elements);
  const double h = g.h;
  g.mass.diag.assign(g.M, 4.0 * h / 6.0);
  g.mass.lower.assign(g.M - 1, h / 6.0);
  g.mass.upper.assign(g.M - 1, h / 6.0);
  g.stiffness.diag.assign(g.M, 2.0 / h);
  g.stiffness.lower.assign(g.M - 1, -1.0 / h);
  g.stiffness.upper.assign(g.M - 1, -1.0 / h);
  return g;
}

FemGrid build_grid(double h) {
  if (!(h > 0.0 && h <= 0.5)) throw std::invalid_argument("build_grid: h must lie in (0, 1/2]");
  const double inv = 1.0 / h;
  const double k = std::round(inv);
  if (std::abs(inv - k) > 1e-9 * k) throw std::invalid_argument("build_grid: h must be the reciprocal of an integer");
  return build_grid_intervals(static_cast<std::size_t>(k));
}

std::vector<double> load_vector(const FemGrid& grid, const std::function<double(double)>& g) {
  const auto& rule = gauss_legendre(kLoadPoints);
  std::vector<double> v(grid.M, 0.0);
  const std::size_t elements = grid.M + 1;
  for (std::size_t e = 0; e < elements; ++e) {
    const double x0 = e * grid.h;
    for (int q = 0; q < kLoadPoints; ++q) {
      const double y = 0.5 * (rule.nodes[q] + 1.0);
      const double w = 0.5 * grid.h * rule.weights[q] * g(x0 + y * grid.h);
      if (e >= 1) v[e - 1] += w * (1.0 - y);
      if (e + 1 <= grid.M) v[e] += w * y;
    }
  }
  return v;
}

double l2_error(const FemGrid& grid, std::span<const double> coeffs, const std::function<double(double)>& exact) {
  if (coeffs.size() != grid.M) throw std::invalid_argument("l2_error: coefficient vector has wrong length");
  const auto& rule = gauss_legendre(kElementPoints);
  double s = 0.0;
  const std::size_t elements = grid.M + 1;
  for (std::size_t e = 0; e < elements; ++e) {
    const double x0 = e * grid.h;
    for (int q = 0; q < kElementPoints; ++q) {
      const double y = 0.5 * (rule.nodes[q] + 1.0);
      const double d = element_value(coeffs, e, grid.M, y) - exact(x0 + y * grid.h);
      s += 0.5 * grid.h * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(s);
}

std::vector<double> interpolate(const FemGrid& grid, const std::function<double(double)>& g) {
  std::vector<double> v(grid.M);
  for (std::size_t i = 0; i < grid.M; ++i) v[i] = g(grid.nodes[i]);
  return v;
}

}  // namespace fdg

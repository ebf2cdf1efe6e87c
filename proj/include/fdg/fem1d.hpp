#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fdg/linalg.hpp"

namespace fdg {

/// Uniform P1 finite elements on (0, 1) with homogeneous Dirichlet
/// conditions; unknowns are the interior nodes x_i = i h, i = 1..M.
struct FemGrid {
  double h = 0.0;
  std::size_t M = 0;
  std::vector<double> nodes;
  Tridiagonal mass;       ///< (h/6) [1, 4, 1]
  Tridiagonal stiffness;  ///< (1/h) [-1, 2, -1]
};

/// h must be 1/(M+1) for an integer M >= 1.
FemGrid build_grid(double h);
FemGrid build_grid_intervals(std::size_t elements);

/// v_i = int g hat_i, 6-point Gauss per element.
std::vector<double> load_vector(const FemGrid& grid, const std::function<double(double)>& g);

/// || sum_i c_i hat_i - exact ||_{L2(0,1)}, 4-point Gauss per element.
double l2_error(const FemGrid& grid, std::span<const double> coeffs, const std::function<double(double)>& exact);

/// Nodal interpolant of g.
std::vector<double> interpolate(const FemGrid& grid, const std::function<double(double)>& g);

}  // namespace fdg

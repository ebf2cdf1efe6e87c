#include "fdg/time_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace fdg {

GradedMesh::GradedMesh(double final_time, std::size_t intervals, double grading)
    : final_time_(final_time), grading_(grading) {
  if (!(final_time > 0.0)) throw std::invalid_argument("graded_mesh: T must be positive");
  if (intervals == 0) throw std::invalid_argument("graded_mesh: N must be at least 1");
  if (!(grading >= 1.0)) throw std::invalid_argument("graded_mesh: grading exponent r must be >= 1");

  const auto n_total = static_cast<double>(intervals);
  points_.resize(intervals + 1);
  points_[0] = 0.0;
  for (std::size_t n = 1; n < intervals; ++n)
    points_[n] = std::pow(static_cast<double>(n) / n_total, grading) * final_time;
  points_[intervals] = final_time;

  tau_.resize(intervals);
  for (std::size_t n = 1; n <= intervals; ++n) tau_[n - 1] = points_[n] - points_[n - 1];
}

GradedMesh graded_mesh(double final_time, std::size_t intervals, double grading) {
  return GradedMesh(final_time, intervals, grading);
}

double optimal_r(double alpha, double sigma, int degree) {
  return (2.0 * degree + 2.0 - alpha) / (1.0 + 2.0 * sigma - alpha);
}

}  // namespace fdg

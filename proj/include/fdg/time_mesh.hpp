#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdg {

/// Graded temporal grid t_n = (n/N)^r T on [0, T].
///
/// Interval n (1-based) is I_n = (t_{n-1}, t_n] with length tau(n). For r >= 1
/// the lengths are nondecreasing, so tau(1) = T N^{-r} is the smallest.
class GradedMesh {
 public:
  GradedMesh(double final_time, std::size_t intervals, double grading);

  double final_time() const { return final_time_; }
  std::size_t intervals() const { return points_.size() - 1; }
  double grading() const { return grading_; }

  /// t_n, n = 0..N.
  double t(std::size_t n) const { return points_[n]; }
  /// tau_n = t_n - t_{n-1}, n = 1..N.
  double tau(std::size_t n) const { return tau_[n - 1]; }
  double min_tau() const { return tau_.front(); }

  std::span<const double> points() const { return points_; }
  std::span<const double> lengths() const { return tau_; }

 private:
  double final_time_;
  double grading_;
  std::vector<double> points_;
  std::vector<double> tau_;
};

GradedMesh graded_mesh(double final_time, std::size_t intervals, double grading);

/// Smallest grading that gives the optimal temporal rate,
/// (2p + 2 - alpha) / (1 + 2 sigma - alpha). May be below 1; callers clamp.
double optimal_r(double alpha, double sigma, int degree);

}  // namespace fdg

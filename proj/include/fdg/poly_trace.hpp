#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdg/time_mesh.hpp"

namespace fdg {

/// Piecewise polynomial in time with vector coefficients.
///
/// On I_n the trace is sum_k c_{n,k} ((t - t_{n-1}) / tau_n)^k, k = 0..p, each
/// c_{n,k} a vector of M spatial coefficients. Block n is stored row-major as
/// (p+1) rows of M values. Values at nodes are one-sided: the left limit
/// v_-^n comes from block n, the right limit v_+^n from block n+1.
class PolyTrace {
 public:
  PolyTrace(GradedMesh mesh, int degree, std::size_t dofs, std::vector<double> initial = {});

  const GradedMesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  std::size_t dofs() const { return dofs_; }
  std::size_t block_size() const { return static_cast<std::size_t>(degree_ + 1) * dofs_; }
  /// Number of intervals with a stored block.
  std::size_t size() const { return blocks_.size() / block_size(); }
  const std::vector<double>& initial() const { return initial_; }

  void append(std::span<const double> block);
  void clear() { blocks_.clear(); }

  /// Block n (1-based), (p+1) x M row-major.
  std::span<const double> block(std::size_t n) const;
  double coeff(std::size_t n, int k, std::size_t dof) const { return block(n)[k * dofs_ + dof]; }

  /// v_-^n = U(t_n^-).
  std::vector<double> left_limit(std::size_t n) const;
  /// v_+^{n-1} = U(t_{n-1}^+), read from block n.
  std::vector<double> right_limit_from(std::size_t n) const;
  /// Value at local coordinate x in [0, 1] of interval n.
  std::vector<double> evaluate_local(std::size_t n, double x) const;
  /// Value at t in (0, T]; uses I_n with t_{n-1} < t <= t_n.
  std::vector<double> evaluate(double t) const;
  /// Index n with t in I_n.
  std::size_t interval_of(double t) const;

 private:
  GradedMesh mesh_;
  int degree_;
  std::size_t dofs_;
  std::vector<double> initial_;
  std::vector<double> blocks_;
};

}  // namespace fdg

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdg {

/// Small dense square matrix, row-major.
struct SquareMatrix {
  std::size_t dim = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : dim(n), data(n * n, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

/// Symmetric-or-not tridiagonal matrix; lower[i] couples rows i+1 and i.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
  static Tridiagonal identity(std::size_t n);
  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  double operator()(std::size_t r, std::size_t c) const;
};

/// LU factorization without pivoting of a banded matrix with equal lower and
/// upper bandwidth. Intended for systems whose symmetric part is positive
/// definite, where elimination without pivoting is well defined.
class BandedLU {
 public:
  BandedLU(std::size_t n, std::size_t half_bandwidth);

  std::size_t size() const { return n_; }
  std::size_t half_bandwidth() const { return bw_; }
  /// Entry access before factorization; |r - c| <= half_bandwidth.
  double& at(std::size_t r, std::size_t c) { return band_[r * width() + (c + bw_ - r)]; }
  void zero();
  /// Throws std::runtime_error on a vanishing pivot.
  void factorize();
  void solve(std::span<double> rhs) const;

 private:
  std::size_t width() const { return 2 * bw_ + 1; }
  double get(std::size_t r, std::size_t c) const { return band_[r * width() + (c + bw_ - r)]; }

  std::size_t n_;
  std::size_t bw_;
  std::vector<double> band_;
  bool factored_ = false;
};

}  // namespace fdg

#include "fdg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdg {

Tridiagonal Tridiagonal::identity(std::size_t n) {
  Tridiagonal t;
  t.diag.assign(n, 1.0);
  t.lower.assign(n > 0 ? n - 1 : 0, 0.0);
  t.upper.assign(n > 0 ? n - 1 : 0, 0.0);
  return t;
}

void Tridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i - 1] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
}

double Tridiagonal::operator()(std::size_t r, std::size_t c) const {
  if (r == c) return diag[r];
  if (r == c + 1) return lower[c];
  if (c == r + 1) return upper[r];
  return 0.0;
}

BandedLU::BandedLU(std::size_t n, std::size_t half_bandwidth)
    : n_(n), bw_(std::min(half_bandwidth, n > 0 ? n - 1 : 0)), band_(n * (2 * bw_ + 1), 0.0) {}

void BandedLU::zero() {
  std::fill(band_.begin(), band_.end(), 0.0);
  factored_ = false;
}

void BandedLU::factorize() {
  double scale = 0.0;
  for (double v : band_) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n_; ++k) {
    const double pivot = get(k, k);
    if (!(std::abs(pivot) > 1e-300) || std::abs(pivot) < 1e-15 * scale)
      throw std::runtime_error("BandedLU: vanishing pivot at row " + std::to_string(k) + " (pivot " +
                               std::to_string(pivot) + ", matrix scale " + std::to_string(scale) + ")");
    const std::size_t last = std::min(n_ - 1, k + bw_);
    for (std::size_t r = k + 1; r <= last; ++r) {
      const double f = at(r, k) / pivot;
      at(r, k) = f;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c <= last; ++c) at(r, c) -= f * get(k, c);
    }
  }
  factored_ = true;
}

void BandedLU::solve(std::span<double> rhs) const {
  if (!factored_) throw std::logic_error("BandedLU::solve before factorize");
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t first = r > bw_ ? r - bw_ : 0;
    double s = rhs[r];
    for (std::size_t c = first; c < r; ++c) s -= get(r, c) * rhs[c];
    rhs[r] = s;
  }
  for (std::size_t r = n_; r-- > 0;) {
    const std::size_t last = std::min(n_ - 1, r + bw_);
    double s = rhs[r];
    for (std::size_t c = r + 1; c <= last; ++c) s -= get(r, c) * rhs[c];
    rhs[r] = s / get(r, r);
  }
}

}  // namespace fdg

#include "fdg/poly_trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdg {

PolyTrace::PolyTrace(GradedMesh mesh, int degree, std::size_t dofs, std::vector<double> initial)
    : mesh_(std::move(mesh)), degree_(degree), dofs_(dofs), initial_(std::move(initial)) {
  if (degree < 0) throw std::invalid_argument("PolyTrace: negative degree");
  if (dofs == 0) throw std::invalid_argument("PolyTrace: need at least one spatial dof");
  if (initial_.empty()) initial_.assign(dofs, 0.0);
  if (initial_.size() != dofs) throw std::invalid_argument("PolyTrace: initial data has wrong length");
  blocks_.reserve(block_size() * mesh_.intervals());
}

void PolyTrace::append(std::span<const double> block) {
  if (block.size() != block_size()) throw std::invalid_argument("PolyTrace::append: wrong block size");
  if (size() >= mesh_.intervals()) throw std::out_of_range("PolyTrace::append: mesh already covered");
  blocks_.insert(blocks_.end(), block.begin(), block.end());
}

std::span<const double> PolyTrace::block(std::size_t n) const {
  if (n == 0 || n > size()) throw std::out_of_range("PolyTrace::block: interval not available");
  return std::span<const double>(blocks_).subspan((n - 1) * block_size(), block_size());
}

std::vector<double> PolyTrace::evaluate_local(std::size_t n, double x) const {
  const auto b = block(n);
  std::vector<double> v(dofs_, 0.0);
  // Horner in x
  for (int k = degree_; k >= 0; --k)
    for (std::size_t i = 0; i < dofs_; ++i) v[i] = v[i] * x + b[k * dofs_ + i];
  return v;
}

std::vector<double> PolyTrace::left_limit(std::size_t n) const { return evaluate_local(n, 1.0); }

std::vector<double> PolyTrace::right_limit_from(std::size_t n) const { return evaluate_local(n, 0.0); }

std::size_t PolyTrace::interval_of(double t) const {
  const auto pts = mesh_.points();
  if (t <= 0.0) return 1;
  const auto it = std::lower_bound(pts.begin() + 1, pts.end(), t);
  if (it == pts.end()) return mesh_.intervals();
  return static_cast<std::size_t>(it - pts.begin());
}

std::vector<double> PolyTrace::evaluate(double t) const {
  const std::size_t n = interval_of(t);
  const double x = (t - mesh_.t(n - 1)) / mesh_.tau(n);
  return evaluate_local(n, std::clamp(x, 0.0, 1.0));
}

}  // namespace fdg

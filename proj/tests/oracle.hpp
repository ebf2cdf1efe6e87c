#pragma once

// Reference computations built on Boost only, independent of the library's
// own quadrature and closed forms.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fdg/time_mesh.hpp"

namespace oracle {

inline double gamma(double x) { return boost::math::tgamma(x); }

inline double omega(double beta, double t) { return std::pow(t, beta - 1.0) / gamma(beta); }

// tanh-sinh on [a, b]; h(x, x - a, b - x) gets exact endpoint distances (boost
// passes a - x on the left half, b - x on the right) so
// algebraic endpoint singularities are harmless.
inline double integrate(const std::function<double(double, double, double)>& h, double a, double b) {
  if (!(b > a)) return 0.0;
  static boost::math::quadrature::tanh_sinh<double> ts(12, 1e-100);  // truncated mass <= (1e-100)^0.2
  const double mid = 0.5 * (a + b);
  auto f = [&](double x, double xc) { return x < mid ? h(x, -xc, b - x) : h(x, x - a, xc); };
  return ts.integrate(f, a, b, 1e-13);
}

inline double integrate(const std::function<double(double)>& h, double a, double b) {
  return integrate([&](double x, double, double) { return h(x); }, a, b);
}

// int_0^W w^e h(w) dw, e > -1, via w = u^(1/(e+1)); exact for any strength of
// the endpoint singularity when h is smooth.
inline double integrate_power(const std::function<double(double)>& h, double W, double e) {
  const double k = 1.0 / (e + 1.0);
  return k * integrate([&](double u) { return h(std::pow(u, k)); }, 0.0, std::pow(W, e + 1.0));
}

inline double chi(const fdg::GradedMesh& m, std::size_t n, int a, double t) {
  return std::pow((t - m.t(n - 1)) / m.tau(n), a);
}

// g(t) = int_{I_k, s < t} omega_{1-alpha}(t - s) chi_b^{(k)}(s) ds
inline double rl_primitive(const fdg::GradedMesh& m, std::size_t k, int b, double alpha, double t) {
  const double lo = m.t(k - 1);
  const double hi = std::min(t, m.t(k));
  if (hi <= lo) return 0.0;
  if (hi < t) return integrate([&](double s) { return omega(1.0 - alpha, t - s) * chi(m, k, b, s); }, lo, hi);
  // s = t - w puts the singularity at w = 0
  return integrate([&](double w) { return omega(1.0 - alpha, w) * std::pow((t - w - lo) / m.tau(k), b); }, 0.0, t - lo);
}

// int_{I_n} chi_a d/dt g dt after integration by parts.
inline double rl_block_entry(const fdg::GradedMesh& m, std::size_t n, std::size_t k, int a, int b, double alpha) {
  const double t0 = m.t(n - 1), t1 = m.t(n);
  double v = rl_primitive(m, k, b, alpha, t1) - (a == 0 ? rl_primitive(m, k, b, alpha, t0) : 0.0);
  if (a > 0) {
    auto f = [&](double t) {
      return a * std::pow((t - t0) / m.tau(n), a - 1) / m.tau(n) * rl_primitive(m, k, b, alpha, t);
    };
    v -= integrate(f, t0, t1);
  }
  return v;
}

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (A[piv][c] == 0.0) throw std::runtime_error("dense_solve: singular");
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

using Dense = std::vector<std::vector<double>>;

// All-at-once DG solve of M u' -> C_D^alpha u + S u = f, u(0) = u0 with
// dense spatial matrices. load(t) returns <f(t), basis>, u0_load = <u0, basis>.
// Returns coefficients [((n-1)(p+1) + a) M + i].
inline std::vector<double> global_dg(const fdg::GradedMesh& m, double alpha, int p, const Dense& mass, const Dense& stiff,
                                     const std::function<std::vector<double>(double)>& load,
                                     const std::vector<double>& u0_load) {
  const std::size_t N = m.intervals();
  const std::size_t P = static_cast<std::size_t>(p + 1);
  const std::size_t M = mass.size();
  const std::size_t dim = N * P * M;
  Dense A(dim, std::vector<double>(dim, 0.0));
  std::vector<double> rhs(dim, 0.0);
  auto idx = [&](std::size_t n, int a, std::size_t i) { return ((n - 1) * P + a) * M + i; };
  for (std::size_t n = 1; n <= N; ++n) {
    const double t0 = m.t(n - 1), t1 = m.t(n);
    for (int a = 0; a <= p; ++a) {
      for (std::size_t k = 1; k <= n; ++k)
        for (int b = 0; b <= p; ++b) {
          const double w = rl_block_entry(m, n, k, a, b, alpha);
          for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < M; ++j) A[idx(n, a, i)][idx(k, b, j)] += w * mass[i][j];
        }
      for (int b = 0; b <= p; ++b) {
        const double g = integrate([&](double t) { return chi(m, n, a, t) * chi(m, n, b, t); }, t0, t1);
        for (std::size_t i = 0; i < M; ++i)
          for (std::size_t j = 0; j < M; ++j) A[idx(n, a, i)][idx(n, b, j)] += g * stiff[i][j];
      }
      const double e = integrate([&](double t, double dl, double) {
        return std::pow(dl / m.tau(n), a) * omega(1.0 - alpha, n == 1 ? dl : t);
      }, t0, t1);
      for (std::size_t i = 0; i < M; ++i)
        rhs[idx(n, a, i)] = e * u0_load[i] +
                            integrate([&](double t) { return chi(m, n, a, t) * load(t)[i]; }, t0, t1);
    }
  }
  return dense_solve(A, rhs);
}

}  // namespace oracle

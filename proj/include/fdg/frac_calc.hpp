#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdg/poly_trace.hpp"
#include "fdg/soe_kernel.hpp"

namespace fdg {

/// omega_beta(t) = t^(beta-1) / Gamma(beta). Rejects t <= 0 and poles of Gamma.
double omega(double beta, double t);

/// omega_beta with 1/Gamma(beta) computed once; no argument checks on t.
class PowerKernel {
 public:
  explicit PowerKernel(double beta);
  double beta() const { return beta_; }
  double operator()(double t) const;

 private:
  double beta_;
  double inv_gamma_;
};

/// phi_k(z) = int_0^1 s^k e^{z s} ds.
double phi(int k, double z);

/// phi_0(z) .. phi_{out.size()-1}(z) sharing one exponential.
void phi_all(double z, std::span<double> out);

/// int_a^b omega_gamma(t - s) (s - a)^m ds for a < b <= t and gamma > 0.
double conv_poly_power(double gamma, double a, double b, int m, double t);

/// Local part int_{t_{n-1}}^{t_n} omega_beta(t_n - t) U(t) dt for a linear
/// trace with endpoint values U_+^{n-1} and U_-^n, 0 < beta < 1.
std::vector<double> local_part_linear(double beta, double tau, std::span<const double> u_plus,
                                      std::span<const double> u_minus);

/// Exponential mode accumulators
///
///   Y_j^(k)(t) = int_0^t exp(-lambda_j (t - s)) s^k U(s) ds,  k = 0..moments,
///
/// advanced exactly one polynomial interval at a time.
class HistoryState {
 public:
  HistoryState(std::vector<double> nodes, std::size_t dofs, int moments = 0);

  std::size_t modes() const { return nodes_.size(); }
  std::size_t dofs() const { return dofs_; }
  int moments() const { return moments_; }
  double last_time() const { return last_time_; }
  std::span<const double> nodes() const { return nodes_; }

  /// Y_j^(k) at last_time(), length dofs().
  std::span<const double> mode(std::size_t j, int k = 0) const;

  /// Ingest the degree-p block living on [t_start, t_start + tau]; requires
  /// t_start == last_time().
  void advance(std::span<const double> block, int degree, double t_start, double tau);

 private:
  std::vector<double> nodes_;
  std::size_t dofs_;
  int moments_;
  double last_time_ = 0.0;
  std::vector<double> data_;  // [(k * Q + j) * M + i]
  std::vector<double> phi_;
  std::vector<double> incr_;
};

/// Riemann-Liouville integral d^{-beta} U(t_n), n = 1..N, by exact local
/// closed forms and per-interval Gauss quadrature of the smooth far field.
/// Row n-1 of the result holds the M values at t_n.
std::vector<std::vector<double>> rl_integral_direct(const PolyTrace& trace, double beta);

/// Fast d^{-beta} U(t_n) with an unshifted kernel (local part exact, history
/// through sum-of-exponential modes). Requires kernel.q == 0, 0 < beta < 1.
std::vector<std::vector<double>> alg1_fast_op(const PolyTrace& trace, const SoeKernel& kernel);

/// Fast d^{-beta} U(t_n) with a shifted kernel t^q sum w_j e^{-lambda_j t},
/// using moment accumulators. Reduces to alg1_fast_op when q == 0.
std::vector<std::vector<double>> alg2_fast_op(const PolyTrace& trace, const SoeKernel& kernel);

}  // namespace fdg

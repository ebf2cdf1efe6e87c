#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fdg/frac_calc.hpp"
#include "fdg/linalg.hpp"
#include "fdg/poly_trace.hpp"
#include "fdg/soe_kernel.hpp"
#include "fdg/time_mesh.hpp"

namespace fdg {

/// Linear spatial problem  M u' -> (mass), A u (stiffness), load <f(t), basis>.
///
/// The time-fractional problem solved is  C_D^alpha u + A u = f, u(0) = u0,
/// in the weak form with mass matrix M. `initial` holds the u0 coefficients
/// and `initial_load` the functional <u0, basis_i> entering the right side.
struct SpatialSystem {
  std::size_t dofs = 0;
  Tridiagonal mass;
  Tridiagonal stiffness;
  std::function<void(double t, std::span<double> out)> load;
  std::vector<double> initial;
  std::vector<double> initial_load;
  /// Spatial error norm of coefficients against the exact solution at t.
  std::function<double(double t, std::span<const double> coeffs)> error_norm;
};

enum class Mode { direct, fast };

// --- per-interval building blocks -----------------------------------------
//
// Temporal basis on I_n: chi_a(t) = ((t - t_{n-1}) / tau_n)^a, a = 0..p.
// W^{n,k}[a][b] = int_{I_n} chi_a(t) d^alpha[chi_b^{(k)} 1_{I_k}](t) dt with the
// Riemann-Liouville derivative of the piecewise function continued by zero;
// jumps at t_{k-1}, t_k enter as omega_{1-alpha}(t - s) contributions.

struct LocalBlocks {
  SquareMatrix self;       ///< W^{n,n}
  SquareMatrix neighbour;  ///< W^{n,n-1} (empty for n = 1)
  SquareMatrix mass;       ///< int_{I_n} chi_a chi_b dt
};

/// Exact blocks for interval n; the neighbour block is what the local part
/// from lower terminal t_{n-2} adds on top of the self block.
LocalBlocks local_frac_block(const GradedMesh& mesh, std::size_t n, double alpha, int degree);

/// W^{n,k} for k <= n - 2 (smooth kernel, tensor Gauss quadrature).
SquareMatrix far_block(const GradedMesh& mesh, std::size_t n, std::size_t k, double alpha, int degree);

/// int_{t0}^{t0+tau} ((t - t0)/tau)^a omega_mu(t - c) dt, c <= t0, mu > 0.
double power_moment(double mu, double c, double t0, double tau, int a);

/// Coefficients H[a] (row-major (p+1) x M) of int_{I_n} chi_a d^alpha U_hist dt,
/// U_hist the trace on (0, t_{n-1}].
std::vector<double> history_direct(const PolyTrace& trace, std::size_t n, double alpha);

/// psi^n(X) = int_{I_n} X(t) exp(-lambda (t - t_{n-1})) dt for the test
/// functions {t - t_{n-1}, t_n - t} (p = 1) or {(t-t_{n-1})^2,
/// (t-t_{n-1})(t_n-t), (t_n-t)^2} (p = 2).
std::vector<double> psi_product_basis(int degree, double tau, double lambda);

/// psi^n in the shifted-monomial test basis chi_a.
std::vector<double> psi_vector(int degree, double tau, double lambda);

/// Sum-of-exponentials history: sum_j w_j e^{-lambda_j tau_{n-1}} psi_a(lambda_j) Y_j(t_{n-2}).
std::vector<double> history_fast(const GradedMesh& mesh, std::size_t n, const HistoryState& state,
                                 const SoeKernel& kernel, int degree);

/// R[a] = int_{I_n} chi_a (load(t) + omega_{1-alpha}(t) u0_load) dt.
std::vector<double> rhs_assemble(const SpatialSystem& system, const GradedMesh& mesh, std::size_t n,
                                 double alpha, int degree);

/// Composite Gauss rule used for the load on I_n: 16 points per panel,
/// panels graded geometrically (ratio 1/4) toward t = 0.
std::vector<std::pair<double, double>> load_quadrature(double a, double b);

/// Default SOE accuracy min(1e-12, 0.01 N^{-r alpha}).
double default_soe_eps(const GradedMesh& mesh, double alpha);

/// Kernel for omega_{-alpha} on [t_1, T].
SoeKernel build_dg_kernel(const GradedMesh& mesh, double alpha, double eps);

// --- time marching ----------------------------------------------------------

class DgSolver {
 public:
  DgSolver(const SpatialSystem& system, GradedMesh mesh, double alpha, int degree, Mode mode,
           std::optional<SoeKernel> kernel = std::nullopt);

  /// Solve interval current() + 1.
  void step();
  void run();

  std::size_t current() const { return trace_.size(); }
  const PolyTrace& trace() const { return trace_; }
  PolyTrace take_trace() { return std::move(trace_); }
  Mode mode() const { return mode_; }
  const std::optional<SoeKernel>& kernel() const { return kernel_; }

 private:
  const SpatialSystem& system_;
  double alpha_;
  int degree_;
  Mode mode_;
  PolyTrace trace_;
  std::optional<SoeKernel> kernel_;
  std::optional<HistoryState> state_;
  BandedLU lu_;
};

PolyTrace solve(Mode mode, const SpatialSystem& system, const GradedMesh& mesh, double alpha, int degree,
                std::optional<SoeKernel> kernel = std::nullopt);

/// A^n_alpha(v, w) = int_0^{t_n} <d^alpha v, w> dt with the given mass matrix
/// (identity when omitted).
double bilinear_form(const PolyTrace& v, const PolyTrace& w, double alpha, std::size_t n,
                     const Tridiagonal* mass = nullptr);

/// int_0^{t_n} ||v||^2 dt in the mass norm (identity when omitted).
double time_l2_norm_sq(const PolyTrace& v, std::size_t n, const Tridiagonal* mass = nullptr);

/// CSV columns n,t_n,k,dof,coefficient.
void write_trace_csv(const PolyTrace& trace, const std::filesystem::path& path);
/// CSV columns t,dof,value with `per_interval` samples in each (t_{n-1}, t_n].
void write_samples_csv(const PolyTrace& trace, const std::filesystem::path& path, int per_interval = 4);

}  // namespace fdg

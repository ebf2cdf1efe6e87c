#include "fdg/dg_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

#include "fdg/quadrature.hpp"
#include "fdg/special.hpp"

namespace fdg {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_degree(int degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("temporal degree must be 0, 1 or 2");
}

// out[a] += sum_b W[a][b] block[b]   (rows of length m)
void accumulate(const SquareMatrix& w, std::span<const double> block, std::size_t m, std::span<double> out) {
  const std::size_t p1 = w.dim;
  for (std::size_t a = 0; a < p1; ++a) {
    double* dst = out.data() + a * m;
    for (std::size_t b = 0; b < p1; ++b) {
      const double c = w(a, b);
      if (c == 0.0) continue;
      const double* src = block.data() + b * m;
      for (std::size_t i = 0; i < m; ++i) dst[i] += c * src[i];
    }
  }
}

}  // namespace

double power_moment(double mu, double c, double t0, double tau, int a) {
  if (!(mu > 0.0)) throw std::invalid_argument("power_moment: mu must be positive");
  const double d = t0 - c;
  if (d < 0.0) throw std::invalid_argument("power_moment: c must not exceed t0");
  if (d == 0.0) return std::pow(tau, mu) / (gamma_fn(mu) * (a + mu));
  if (d < tau) {
    // repeated integration by parts of (t - t0)^a against omega_mu(t - c)
    double s = 0.0, coef = 1.0;  // a! / (a - i)!
    for (int i = 0; i <= a; ++i) {
      s += ((i % 2) ? -1.0 : 1.0) * coef * std::pow(tau, a - i) * omega(mu + i + 1, tau + d);
      coef *= (a - i);
    }
    s -= ((a % 2) ? -1.0 : 1.0) * factorial(a) * omega(mu + a + 1, d);
    return s / std::pow(tau, a);
  }
  const int order = gauss_order_for_gap(d, tau, 16.0, a + 2);
  const auto& rule = gauss_legendre(order);
  const PowerKernel kernel(mu);
  double s = 0.0;
  for (int g = 0; g < order; ++g) {
    const double x = 0.5 * (rule.nodes[g] + 1.0);
    s += rule.weights[g] * std::pow(x, a) * kernel(d + tau * x);
  }
  return 0.5 * tau * s;
}

LocalBlocks local_frac_block(const GradedMesh& mesh, std::size_t n, double alpha, int degree) {
  check_alpha(alpha);
  check_degree(degree);
  if (n == 0 || n > mesh.intervals()) throw std::out_of_range("local_frac_block: interval index");
  const std::size_t p1 = degree + 1;
  const double tau = mesh.tau(n), t0 = mesh.t(n - 1);
  LocalBlocks out{SquareMatrix(p1), SquareMatrix(), SquareMatrix(p1)};

  const double tau_pow = std::pow(tau, 1.0 - alpha);
  for (std::size_t b = 0; b < p1; ++b) {
    // d^alpha from t_{n-1} of ((t - t_{n-1})/tau)^b
    const double g = gamma_fn(b + 1.0) / gamma_fn(b + 1.0 - alpha);
    for (std::size_t a = 0; a < p1; ++a) {
      out.self(a, b) = g * tau_pow / (a + b + 1.0 - alpha);
      out.mass(a, b) = tau / (a + b + 1.0);
    }
  }

  if (n >= 2) {
    out.neighbour = SquareMatrix(p1);
    const double tau_s = mesh.tau(n - 1), a0 = mesh.t(n - 2);
    const double mu0 = 1.0 - alpha;
    for (std::size_t a = 0; a < p1; ++a) {
      // moments against omega_{mu0 + i}(t - t_{n-1}), i = 0..p
      std::vector<double> right(p1);
      for (std::size_t i = 0; i < p1; ++i) right[i] = power_moment(mu0 + i, t0, t0, tau, static_cast<int>(a));
      for (std::size_t b = 0; b < p1; ++b) {
        double s = power_moment(mu0 + b, a0, t0, tau, static_cast<int>(a));
        double wpow = 1.0;  // tau_s^(b-i) / (b-i)!
        for (std::size_t i = b + 1; i-- > 0;) {
          s -= wpow * right[i];
          wpow *= tau_s / static_cast<double>(b - i + 1);
        }
        out.neighbour(a, b) = factorial(static_cast<int>(b)) * s / std::pow(tau_s, static_cast<double>(b));
      }
    }
  }
  return out;
}

SquareMatrix far_block(const GradedMesh& mesh, std::size_t n, std::size_t k, double alpha, int degree) {
  if (k < 1 || k + 2 > n) throw std::out_of_range("far_block: need 1 <= k <= n - 2");
  const std::size_t p1 = degree + 1;
  const double tau_t = mesh.tau(n), tau_s = mesh.tau(k);
  const double gap = mesh.t(n - 1) - mesh.t(k);
  const int nt = gauss_order_for_gap(gap, tau_t, 16.0, degree + 1);
  const int ns = gauss_order_for_gap(gap, tau_s, 16.0, degree + 1);
  const auto& rt = gauss_legendre(nt);
  const auto& rs = gauss_legendre(ns);
  const double inv_gamma = 1.0 / gamma_fn(-alpha);
  const double expo = -1.0 - alpha;

  SquareMatrix w(p1);
  double srow[3];
  for (int i = 0; i < nt; ++i) {
    const double x = 0.5 * (rt.nodes[i] + 1.0);
    const double wt = 0.5 * tau_t * rt.weights[i];
    std::fill(srow, srow + p1, 0.0);
    for (int j = 0; j < ns; ++j) {
      const double y = 0.5 * (rs.nodes[j] + 1.0);
      const double dist = gap + tau_t * x + tau_s * (1.0 - y);
      double c = 0.5 * tau_s * rs.weights[j] * std::pow(dist, expo);
      for (std::size_t b = 0; b < p1; ++b) {
        srow[b] += c;
        c *= y;
      }
    }
    double xa = wt * inv_gamma;
    for (std::size_t a = 0; a < p1; ++a) {
      for (std::size_t b = 0; b < p1; ++b) w(a, b) += xa * srow[b];
      xa *= x;
    }
  }
  return w;
}

std::vector<double> history_direct(const PolyTrace& trace, std::size_t n, double alpha) {
  const auto& mesh = trace.mesh();
  const int p = trace.degree();
  const std::size_t m = trace.dofs();
  if (n == 0 || n > mesh.intervals() || trace.size() + 1 < n)
    throw std::out_of_range("history_direct: blocks 1..n-1 required");
  std::vector<double> h((p + 1) * m, 0.0);
  if (n >= 2) accumulate(local_frac_block(mesh, n, alpha, p).neighbour, trace.block(n - 1), m, h);
  for (std::size_t k = 1; k + 2 <= n; ++k) accumulate(far_block(mesh, n, k, alpha, p), trace.block(k), m, h);
  return h;
}

std::vector<double> psi_product_basis(int degree, double tau, double lambda) {
  double ph[3];
  phi_all(-lambda * tau, std::span<double>(ph, 3));
  if (degree == 1) {
    const double s = tau * tau;
    return {s * ph[1], s * (ph[0] - ph[1])};
  }
  if (degree == 2) {
    const double s = tau * tau * tau;
    return {s * ph[2], s * (ph[1] - ph[2]), s * (ph[0] - 2.0 * ph[1] + ph[2])};
  }
  throw std::invalid_argument("psi_product_basis: degree must be 1 or 2");
}

std::vector<double> psi_vector(int degree, double tau, double lambda) {
  if (degree == 0) return {tau * phi(0, -lambda * tau)};
  const auto x = psi_product_basis(degree, tau, lambda);
  if (degree == 1) {
    // chi_0 = (X1 + X2) / tau, chi_1 = X1 / tau
    return {(x[0] + x[1]) / tau, x[0] / tau};
  }
  // chi_0 = (X1 + 2 X2 + X3) / tau^2, chi_1 = (X1 + X2) / tau^2, chi_2 = X1 / tau^2
  const double s = 1.0 / (tau * tau);
  return {s * (x[0] + 2.0 * x[1] + x[2]), s * (x[0] + x[1]), s * x[0]};
}

std::vector<double> history_fast(const GradedMesh& mesh, std::size_t n, const HistoryState& state,
                                 const SoeKernel& kernel, int degree) {
  const std::size_t m = state.dofs(), p1 = degree + 1;
  std::vector<double> h(p1 * m, 0.0);
  if (n < 3) return h;
  if (std::abs(state.last_time() - mesh.t(n - 2)) > 1e-13 * std::max(1.0, mesh.t(n - 2)))
    throw std::logic_error("history_fast: state must be current at t_{n-2}");
  const double tau = mesh.tau(n), tau_prev = mesh.tau(n - 1);
  for (std::size_t j = 0; j < state.modes(); ++j) {
    const double lambda = kernel.nodes[j];
    const double c = kernel.weights[j] * std::exp(-lambda * tau_prev);
    if (c == 0.0) continue;
    const auto psi = psi_vector(degree, tau, lambda);
    const auto y = state.mode(j);
    for (std::size_t a = 0; a < p1; ++a) {
      const double ca = c * psi[a];
      double* dst = h.data() + a * m;
      for (std::size_t i = 0; i < m; ++i) dst[i] += ca * y[i];
    }
  }
  return h;
}

std::vector<std::pair<double, double>> load_quadrature(double a, double b) {
  constexpr int kPoints = 16;
  constexpr int kLevels = 8;
  std::vector<std::pair<double, double>> panels;
  double x = b;
  if (a == 0.0) {
    for (int level = 0; level < kLevels; ++level) {
      panels.emplace_back(0.25 * x, x);
      x *= 0.25;
    }
    panels.emplace_back(0.0, x);
  } else {
    while (0.25 * x > a) {
      panels.emplace_back(0.25 * x, x);
      x *= 0.25;
    }
    panels.emplace_back(a, x);
  }
  const auto& rule = gauss_legendre(kPoints);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(panels.size() * kPoints);
  for (auto [lo, hi] : panels)
    for (int g = 0; g < kPoints; ++g)
      pts.emplace_back(lo + 0.5 * (hi - lo) * (rule.nodes[g] + 1.0), 0.5 * (hi - lo) * rule.weights[g]);
  return pts;
}

std::vector<double> rhs_assemble(const SpatialSystem& system, const GradedMesh& mesh, std::size_t n, double alpha,
                                 int degree) {
  const std::size_t m = system.dofs, p1 = degree + 1;
  const double t0 = mesh.t(n - 1), tau = mesh.tau(n);
  std::vector<double> r(p1 * m, 0.0), f(m);
  if (system.load) {
    for (auto [t, w] : load_quadrature(t0, mesh.t(n))) {
      std::fill(f.begin(), f.end(), 0.0);
      system.load(t, f);
      const double x = (t - t0) / tau;
      double xa = w;
      for (std::size_t a = 0; a < p1; ++a) {
        for (std::size_t i = 0; i < m; ++i) r[a * m + i] += xa * f[i];
        xa *= x;
      }
    }
  }
  if (!system.initial_load.empty()) {
    for (std::size_t a = 0; a < p1; ++a) {
      const double e = power_moment(1.0 - alpha, 0.0, t0, tau, static_cast<int>(a));
      for (std::size_t i = 0; i < m; ++i) r[a * m + i] += e * system.initial_load[i];
    }
  }
  return r;
}

double default_soe_eps(const GradedMesh& mesh, double alpha) {
  const double n = static_cast<double>(mesh.intervals());
  return std::min(1e-12, 0.01 * std::pow(n, -mesh.grading() * alpha));
}

SoeKernel build_dg_kernel(const GradedMesh& mesh, double alpha, double eps) {
  check_alpha(alpha);
  return build_soe(-alpha, eps, mesh.t(1), mesh.final_time());
}

// ---------------------------------------------------------------------------

DgSolver::DgSolver(const SpatialSystem& system, GradedMesh mesh, double alpha, int degree, Mode mode,
                   std::optional<SoeKernel> kernel)
    : system_(system),
      alpha_(alpha),
      degree_(degree),
      mode_(mode),
      trace_(mesh, degree, system.dofs, system.initial),
      kernel_(std::move(kernel)),
      lu_(system.dofs * (degree + 1), 2 * (degree + 1) - 1) {
  check_alpha(alpha);
  check_degree(degree);
  const std::size_t m = system.dofs;
  if (system.mass.size() != m || system.stiffness.size() != m)
    throw std::invalid_argument("DgSolver: operator size does not match dofs");
  if (!system.initial_load.empty() && system.initial_load.size() != m)
    throw std::invalid_argument("DgSolver: initial_load has wrong length");

  const auto& msh = trace_.mesh();
  if (mode_ == Mode::fast && msh.intervals() >= 3) {
    if (!kernel_) kernel_ = build_dg_kernel(msh, alpha, default_soe_eps(msh, alpha));
    const auto& k = *kernel_;
    if (k.q != 0 || std::abs(k.beta + alpha) > 1e-12)
      throw std::invalid_argument("DgSolver: kernel must approximate omega_{-alpha} without shift");
    if (k.delta > msh.t(1) * (1.0 + 1e-12) || k.horizon < msh.final_time() * (1.0 - 1e-12))
      throw std::invalid_argument("DgSolver: kernel window must cover [t_1, T]");
    state_.emplace(k.nodes, m, 0);
  }
}

void DgSolver::step() {
  const auto& mesh = trace_.mesh();
  const std::size_t n = current() + 1;
  if (n > mesh.intervals()) throw std::out_of_range("DgSolver::step: already at final time");
  const std::size_t m = system_.dofs, p1 = degree_ + 1;

  const LocalBlocks blocks = local_frac_block(mesh, n, alpha_, degree_);
  std::vector<double> hist(p1 * m, 0.0);
  if (n >= 2) accumulate(blocks.neighbour, trace_.block(n - 1), m, hist);
  if (n >= 3) {
    if (mode_ == Mode::direct) {
      for (std::size_t k = 1; k + 2 <= n; ++k) accumulate(far_block(mesh, n, k, alpha_, degree_), trace_.block(k), m, hist);
    } else {
      state_->advance(trace_.block(n - 2), degree_, mesh.t(n - 3), mesh.tau(n - 2));
      const auto far = history_fast(mesh, n, *state_, *kernel_, degree_);
      for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += far[i];
    }
  }

  std::vector<double> rhs = rhs_assemble(system_, mesh, n, alpha_, degree_);
  std::vector<double> tmp(m);
  for (std::size_t a = 0; a < p1; ++a) {
    system_.mass.apply(std::span<const double>(hist).subspan(a * m, m), tmp);
    for (std::size_t i = 0; i < m; ++i) rhs[a * m + i] -= tmp[i];
  }

  // unknown (i, a) at index i * p1 + a
  lu_.zero();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i > 0 ? i - 1 : 0, hi = std::min(m - 1, i + 1);
    for (std::size_t l = lo; l <= hi; ++l) {
      const double mass = system_.mass(i, l), stiff = system_.stiffness(i, l);
      for (std::size_t a = 0; a < p1; ++a)
        for (std::size_t b = 0; b < p1; ++b)
          lu_.at(i * p1 + a, l * p1 + b) = blocks.self(a, b) * mass + blocks.mass(a, b) * stiff;
    }
  }
  try {
    lu_.factorize();
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("DgSolver: singular step system at n = " + std::to_string(n) + ", t_n = " +
                             std::to_string(mesh.t(n)) + ": " + e.what());
  }
  std::vector<double> x(p1 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < p1; ++a) x[i * p1 + a] = rhs[a * m + i];
  lu_.solve(x);
  std::vector<double> block(p1 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < p1; ++a) block[a * m + i] = x[i * p1 + a];
  trace_.append(block);
}

void DgSolver::run() {
  while (current() < trace_.mesh().intervals()) step();
}

PolyTrace solve(Mode mode, const SpatialSystem& system, const GradedMesh& mesh, double alpha, int degree,
                std::optional<SoeKernel> kernel) {
  DgSolver solver(system, mesh, alpha, degree, mode, std::move(kernel));
  solver.run();
  return solver.take_trace();
}

// ---------------------------------------------------------------------------

namespace {

double mass_inner(std::span<const double> x, std::span<const double> y, const Tridiagonal* mass) {
  double s = 0.0;
  if (!mass) {
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  }
  std::vector<double> my(y.size());
  mass->apply(y, my);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * my[i];
  return s;
}

double block_pairing(const SquareMatrix& w, std::span<const double> test, std::span<const double> trial,
                     std::size_t m, const Tridiagonal* mass) {
  double s = 0.0;
  for (std::size_t a = 0; a < w.dim; ++a)
    for (std::size_t b = 0; b < w.dim; ++b)
      s += w(a, b) * mass_inner(test.subspan(a * m, m), trial.subspan(b * m, m), mass);
  return s;
}

}  // namespace

double bilinear_form(const PolyTrace& v, const PolyTrace& w, double alpha, std::size_t n, const Tridiagonal* mass) {
  if (v.degree() != w.degree() || v.dofs() != w.dofs()) throw std::invalid_argument("bilinear_form: traces differ");
  const auto& mesh = v.mesh();
  const int p = v.degree();
  const std::size_t m = v.dofs();
  double total = 0.0;
  for (std::size_t mi = 1; mi <= n; ++mi) {
    const auto blocks = local_frac_block(mesh, mi, alpha, p);
    total += block_pairing(blocks.self, w.block(mi), v.block(mi), m, mass);
    if (mi >= 2) total += block_pairing(blocks.neighbour, w.block(mi), v.block(mi - 1), m, mass);
    for (std::size_t k = 1; k + 2 <= mi; ++k)
      total += block_pairing(far_block(mesh, mi, k, alpha, p), w.block(mi), v.block(k), m, mass);
  }
  return total;
}

double time_l2_norm_sq(const PolyTrace& v, std::size_t n, const Tridiagonal* mass) {
  const auto& mesh = v.mesh();
  const std::size_t p1 = v.degree() + 1, m = v.dofs();
  double total = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    SquareMatrix g(p1);
    for (std::size_t a = 0; a < p1; ++a)
      for (std::size_t b = 0; b < p1; ++b) g(a, b) = mesh.tau(k) / (a + b + 1.0);
    total += block_pairing(g, v.block(k), v.block(k), m, mass);
  }
  return total;
}

void write_trace_csv(const PolyTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "n,t_n,k,dof,coefficient\n" << std::setprecision(17);
  for (std::size_t n = 1; n <= trace.size(); ++n)
    for (int k = 0; k <= trace.degree(); ++k)
      for (std::size_t i = 0; i < trace.dofs(); ++i)
        out << n << ',' << trace.mesh().t(n) << ',' << k << ',' << i << ',' << trace.coeff(n, k, i) << '\n';
  if (!out) throw std::runtime_error("write_trace_csv: write failed for " + path.string());
}

void write_samples_csv(const PolyTrace& trace, const std::filesystem::path& path, int per_interval) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_samples_csv: cannot open " + path.string());
  out << "t,dof,value\n" << std::setprecision(17);
  const auto& mesh = trace.mesh();
  for (std::size_t n = 1; n <= trace.size(); ++n)
    for (int s = 1; s <= per_interval; ++s) {
      const double x = static_cast<double>(s) / per_interval;
      const auto v = trace.evaluate_local(n, x);
      const double t = mesh.t(n - 1) + x * mesh.tau(n);
      for (std::size_t i = 0; i < v.size(); ++i) out << t << ',' << i << ',' << v[i] << '\n';
    }
  if (!out) throw std::runtime_error("write_samples_csv: write failed for " + path.string());
}

}  // namespace fdg

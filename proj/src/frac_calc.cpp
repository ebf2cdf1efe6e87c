#include "fdg/frac_calc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fdg/quadrature.hpp"
#include "fdg/special.hpp"

namespace fdg {

double omega(double beta, double t) {
  if (!(t > 0.0)) throw std::domain_error("omega: t must be positive");
  if (is_nonpositive_integer(beta)) throw std::domain_error("omega: beta is a pole of Gamma");
  return std::pow(t, beta - 1.0) / gamma_fn(beta);
}

PowerKernel::PowerKernel(double beta) : beta_(beta) {
  if (is_nonpositive_integer(beta)) throw std::domain_error("PowerKernel: beta is a pole of Gamma");
  inv_gamma_ = 1.0 / gamma_fn(beta);
}

double PowerKernel::operator()(double t) const { return std::pow(t, beta_ - 1.0) * inv_gamma_; }

namespace {

bool use_series(double z, int kmax) { return std::abs(z) < std::max(0.5, static_cast<double>(kmax)); }

double phi_series(int k, double z) {
  double term = 1.0;  // z^m / m!
  double sum = 1.0 / (k + 1);
  for (int m = 1; m < 200; ++m) {
    term *= z / m;
    const double add = term / (k + m + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double phi(int k, double z) {
  if (k < 0) throw std::invalid_argument("phi: k must be nonnegative");
  if (use_series(z, k)) return phi_series(k, z);
  const double ez = std::exp(z);
  double v = std::expm1(z) / z;
  for (int i = 1; i <= k; ++i) v = (ez - i * v) / z;
  return v;
}

void phi_all(double z, std::span<double> out) {
  if (out.empty()) return;
  const int kmax = static_cast<int>(out.size()) - 1;
  if (use_series(z, kmax)) {
    for (int k = 0; k <= kmax; ++k) out[k] = phi_series(k, z);
    return;
  }
  const double ez = std::exp(z);
  out[0] = std::expm1(z) / z;
  for (int k = 1; k <= kmax; ++k) out[k] = (ez - k * out[k - 1]) / z;
}

double conv_poly_power(double gamma, double a, double b, int m, double t) {
  if (!(gamma > 0.0)) throw std::invalid_argument("conv_poly_power: gamma must be positive");
  if (!(a < b) || t < b) throw std::invalid_argument("conv_poly_power: need a < b <= t");
  if (m < 0) throw std::invalid_argument("conv_poly_power: negative degree");
  double s = omega(gamma + m + 1, t - a);
  if (t > b) {
    const double w = b - a, d = t - b;
    double wpow = 1.0;  // (b-a)^(m-i) / (m-i)!, built from i = m down
    for (int i = m; i >= 0; --i) {
      s -= wpow * omega(gamma + i + 1, d);
      wpow *= w / (m - i + 1);
    }
  }
  return factorial(m) * s;
}

std::vector<double> local_part_linear(double beta, double tau, std::span<const double> u_plus,
                                      std::span<const double> u_minus) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("local_part_linear: beta must lie in (0, 1)");
  if (u_plus.size() != u_minus.size()) throw std::invalid_argument("local_part_linear: size mismatch");
  const double scale = std::pow(tau, beta) / gamma_fn(2.0 + beta);
  std::vector<double> out(u_plus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * (beta * u_plus[i] + u_minus[i]);
  return out;
}

// ---------------------------------------------------------------------------

HistoryState::HistoryState(std::vector<double> nodes, std::size_t dofs, int moments)
    : nodes_(std::move(nodes)), dofs_(dofs), moments_(moments) {
  if (moments < 0) throw std::invalid_argument("HistoryState: negative moment order");
  data_.assign(static_cast<std::size_t>(moments_ + 1) * nodes_.size() * dofs_, 0.0);
}

std::span<const double> HistoryState::mode(std::size_t j, int k) const {
  return std::span<const double>(data_).subspan((static_cast<std::size_t>(k) * nodes_.size() + j) * dofs_, dofs_);
}

void HistoryState::advance(std::span<const double> block, int degree, double t_start, double tau) {
  const auto p1 = static_cast<std::size_t>(degree + 1);
  if (block.size() != p1 * dofs_) throw std::invalid_argument("HistoryState::advance: block size mismatch");
  if (std::abs(t_start - last_time_) > 1e-13 * std::max(1.0, std::abs(t_start)))
    throw std::logic_error("HistoryState::advance: interval does not start at last_time");

  const int top = degree + moments_;
  phi_.resize(top + 1);
  // E[m] = int_0^1 exp(-z (1 - x)) x^m dx and the per-(k, b) weights
  std::vector<double> e(top + 1);
  incr_.assign(static_cast<std::size_t>(moments_ + 1) * p1, 0.0);
  const std::size_t q_modes = nodes_.size();

  for (std::size_t j = 0; j < q_modes; ++j) {
    const double z = nodes_[j] * tau;
    const double decay = std::exp(-z);
    phi_all(-z, phi_);
    for (int m = 0; m <= top; ++m) {
      double s = 0.0;
      for (int l = 0; l <= m; ++l) s += ((l % 2) ? -1.0 : 1.0) * binomial(m, l) * phi_[l];
      e[m] = s;
    }
    for (int k = 0; k <= moments_; ++k) {
      for (int b = 0; b <= degree; ++b) {
        // s^k = sum_i C(k,i) t_start^(k-i) tau^i x^i
        double c = 0.0, tau_i = 1.0;
        for (int i = 0; i <= k; ++i) {
          c += binomial(k, i) * std::pow(t_start, k - i) * tau_i * e[i + b];
          tau_i *= tau;
        }
        incr_[k * p1 + b] = tau * c;
      }
      double* y = data_.data() + (static_cast<std::size_t>(k) * q_modes + j) * dofs_;
      for (std::size_t i = 0; i < dofs_; ++i) {
        double add = 0.0;
        for (std::size_t b = 0; b < p1; ++b) add += incr_[k * p1 + b] * block[b * dofs_ + i];
        y[i] = decay * y[i] + add;
      }
    }
  }
  last_time_ = t_start + tau;
}

// ---------------------------------------------------------------------------

namespace {

// int_{I_n} omega_beta(t_n - s) ((s - t_{n-1}) / tau_n)^b ds
double local_monomial(double beta, double tau, int b) {
  return conv_poly_power(beta, 0.0, tau, b, tau) / std::pow(tau, b);
}

// Add the exact local part at t_n to out.
void add_local_part(const PolyTrace& trace, double beta, std::size_t n, std::span<double> out) {
  const double tau = trace.mesh().tau(n);
  const auto blk = trace.block(n);
  const std::size_t m = trace.dofs();
  for (int b = 0; b <= trace.degree(); ++b) {
    const double w = local_monomial(beta, tau, b);
    for (std::size_t i = 0; i < m; ++i) out[i] += w * blk[b * m + i];
  }
}

void check_kernel_window(const PolyTrace& trace, const SoeKernel& kernel) {
  const auto& mesh = trace.mesh();
  if (kernel.delta > mesh.min_tau() * (1.0 + 1e-12))
    throw std::invalid_argument("fast operator: kernel delta exceeds the smallest step");
  if (kernel.horizon < mesh.final_time() * (1.0 - 1e-12))
    throw std::invalid_argument("fast operator: kernel horizon shorter than T");
  if (trace.size() != mesh.intervals()) throw std::invalid_argument("fast operator: trace incomplete");
}

}  // namespace

std::vector<std::vector<double>> rl_integral_direct(const PolyTrace& trace, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("rl_integral_direct: beta must be positive");
  const auto& mesh = trace.mesh();
  const std::size_t big_n = trace.size(), m = trace.dofs();
  const int p = trace.degree();
  const PowerKernel kernel(beta);
  std::vector<std::vector<double>> out(big_n, std::vector<double>(m, 0.0));
  for (std::size_t n = 1; n <= big_n; ++n) {
    auto& v = out[n - 1];
    const double tn = mesh.t(n);
    add_local_part(trace, beta, n, v);
    if (n >= 2) {
      // neighbour interval: closed form is well conditioned here
      const std::size_t k = n - 1;
      const double a = mesh.t(k - 1), b = mesh.t(k), tau = mesh.tau(k);
      const auto blk = trace.block(k);
      for (int d = 0; d <= p; ++d) {
        const double w = conv_poly_power(beta, a, b, d, tn) / std::pow(tau, d);
        for (std::size_t i = 0; i < m; ++i) v[i] += w * blk[d * m + i];
      }
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double a = mesh.t(k - 1), tau = mesh.tau(k);
      const int order = gauss_order_for_gap(tn - mesh.t(k), tau, 16.0, p + 1);
      const auto& rule = gauss_legendre(order);
      const auto blk = trace.block(k);
      for (int g = 0; g < order; ++g) {
        const double x = 0.5 * (rule.nodes[g] + 1.0);
        const double w = 0.5 * tau * rule.weights[g] * kernel(tn - (a + tau * x));
        double xp = w;
        for (int d = 0; d <= p; ++d) {
          for (std::size_t i = 0; i < m; ++i) v[i] += xp * blk[d * m + i];
          xp *= x;
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> alg1_fast_op(const PolyTrace& trace, const SoeKernel& kernel) {
  if (kernel.q != 0) throw std::invalid_argument("alg1_fast_op: kernel must be unshifted");
  if (!(kernel.beta > 0.0 && kernel.beta < 1.0)) throw std::invalid_argument("alg1_fast_op: beta must lie in (0, 1)");
  return alg2_fast_op(trace, kernel);
}

std::vector<std::vector<double>> alg2_fast_op(const PolyTrace& trace, const SoeKernel& kernel) {
  if (!(kernel.beta > 0.0)) throw std::invalid_argument("fast operator: beta must be positive");
  check_kernel_window(trace, kernel);
  const auto& mesh = trace.mesh();
  const std::size_t big_n = trace.size(), m = trace.dofs(), q_modes = kernel.size();
  const int q = kernel.q;
  HistoryState state(kernel.nodes, m, q);
  std::vector<std::vector<double>> out(big_n, std::vector<double>(m, 0.0));
  for (std::size_t n = 1; n <= big_n; ++n) {
    auto& v = out[n - 1];
    add_local_part(trace, kernel.beta, n, v);
    if (n >= 2) {
      const double tn = mesh.t(n), tau = mesh.tau(n);
      for (std::size_t j = 0; j < q_modes; ++j) {
        const double decay = kernel.weights[j] * std::exp(-kernel.nodes[j] * tau);
        for (int k = 0; k <= q; ++k) {
          const double c = decay * binomial(q, k) * std::pow(tn, q - k) * ((k % 2) ? -1.0 : 1.0);
          const auto y = state.mode(j, k);
          for (std::size_t i = 0; i < m; ++i) v[i] += c * y[i];
        }
      }
    }
    state.advance(trace.block(n), trace.degree(), mesh.t(n - 1), mesh.tau(n));
  }
  return out;
}

}  // namespace fdg

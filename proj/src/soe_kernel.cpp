#include "fdg/soe_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fdg/frac_calc.hpp"
#include "fdg/special.hpp"
#include "json.hpp"

namespace fdg {

namespace {

// Stirling bound on the relative aliasing error of the trapezoidal rule for
// int exp(-t e^x + g x) dx with step h: 2 |Gamma(g + 2 pi i / h)| / Gamma(g).
double aliasing_bound(double g, double h) {
  const double y = 2.0 * std::numbers::pi / h;
  const double log_mod = 0.5 * std::log(2.0 * std::numbers::pi) + (g - 0.5) * std::log(y) - 0.5 * std::numbers::pi * y;
  return 2.0 * std::exp(log_mod) / gamma_fn(g);
}

double initial_step(double g, double target) {
  double lo = 1e-3, hi = 2.0;
  if (aliasing_bound(g, hi) <= target) return hi;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (aliasing_bound(g, mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

struct Truncation {
  long lo;
  long hi;
};

// Kept indices j in [lo, hi]; nodes are exp(j h).
Truncation truncate(double g, double h, double tol, double delta, double horizon) {
  // left tail, worst case at t = horizon: geometric sum of exp(g j h)
  const double ref_left = gamma_fn(g) * std::pow(horizon, -g);
  const double geom = h / (-std::expm1(-g * h));
  const long peak_left = static_cast<long>(std::floor(std::log(g / horizon) / h));
  const long lo_bound = static_cast<long>(std::floor(std::log(tol * ref_left / geom) / (g * h))) + 1;
  const long lo = std::min(lo_bound, peak_left);

  // right tail, worst case at t = delta: super-exponential decay past the peak
  const double ref_right = gamma_fn(g) * std::pow(delta, -g);
  long hi = static_cast<long>(std::ceil(std::log(g / delta) / h));
  while (true) {
    const double x = static_cast<double>(hi) * h;
    const double term = h * std::exp(-delta * std::exp(x) + g * x);
    if (term <= tol * ref_right) break;
    ++hi;
  }
  return {lo, hi};
}

SoeKernel assemble(double beta, double eps, double delta, double horizon, double h, Truncation tr) {
  SoeKernel k;
  k.beta = beta;
  k.q = 0;
  k.eps = eps;
  k.delta = delta;
  k.horizon = horizon;
  k.step_h = h;
  const double g = 1.0 - beta;
  const double prefactor = sin_pi(beta) / std::numbers::pi * h;
  for (long j = tr.lo; j <= tr.hi; ++j) {
    const double x = static_cast<double>(j) * h;
    k.nodes.push_back(std::exp(x));
    k.weights.push_back(prefactor * std::exp(g * x));
  }
  return k;
}

}  // namespace

double SoeKernel::evaluate(double t) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * std::exp(-nodes[j] * t);
  return q == 0 ? s : s * std::pow(t, q);
}

SoeKernel build_soe(double beta, double eps, double delta, double horizon) {
  if (!(beta < 1.0)) throw std::invalid_argument("build_soe: beta must be < 1 (use build_soe_shifted)");
  if (is_nonpositive_integer(beta)) throw std::invalid_argument("build_soe: beta must not be 0, -1, -2, ...");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("build_soe: eps must lie in (0, 1)");
  if (!(delta > 0.0)) throw std::invalid_argument("build_soe: delta must be positive");
  if (!(horizon > delta)) throw std::invalid_argument("build_soe: horizon must exceed delta");

  const double g = 1.0 - beta;
  double h = initial_step(g, 0.5 * eps);
  double tol = 0.25 * eps;
  for (int attempt = 0; attempt < 40; ++attempt) {
    SoeKernel k = assemble(beta, eps, delta, horizon, h, truncate(g, h, tol, delta, horizon));
    if (validate_soe(k) <= eps) return k;
    h *= 0.9;
    tol *= 0.5;
  }
  throw std::runtime_error("build_soe: could not certify kernel at requested eps");
}

SoeKernel build_soe_shifted(double beta, double beta0, double eps, double delta, double horizon) {
  if (!(beta0 < 1.0)) throw std::invalid_argument("build_soe_shifted: beta0 must be < 1");
  const int q = beta <= beta0 ? 0 : static_cast<int>(std::ceil(beta - beta0 - 1e-14));
  double scale = 1.0;
  for (int l = 1; l <= q; ++l) {
    if (std::abs(beta - l) < 1e-14)
      throw std::invalid_argument("build_soe_shifted: beta - l vanishes for l = " + std::to_string(l));
    scale *= beta - l;
  }
  SoeKernel k = build_soe(beta - q, eps, delta, horizon);
  if (q == 0) return k;
  k.beta = beta;
  k.q = q;
  for (double& w : k.weights) w /= scale;
  return k;
}

double validate_soe_window(const SoeKernel& kernel, double lo, double hi, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("validate_soe: need at least 2 samples");
  if (kernel.nodes.size() != kernel.weights.size()) throw std::invalid_argument("validate_soe: malformed kernel");
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = (i == 0) ? lo
                     : (i + 1 == samples)
                         ? hi
                         : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(samples - 1));
    const double exact = omega(kernel.beta, t);
    worst = std::max(worst, std::abs(kernel.evaluate(t) - exact) / std::abs(exact));
  }
  return worst;
}

double validate_soe(const SoeKernel& kernel, std::size_t samples) {
  return validate_soe_window(kernel, kernel.delta, kernel.horizon, samples);
}

std::string soe_to_json(const SoeKernel& kernel) {
  nlohmann::json j;
  j["beta"] = kernel.beta;
  j["q"] = kernel.q;
  j["eps"] = kernel.eps;
  j["delta"] = kernel.delta;
  j["horizon"] = kernel.horizon;
  j["step_h"] = kernel.step_h;
  j["nodes"] = kernel.nodes;
  j["weights"] = kernel.weights;
  return j.dump(2);
}

SoeKernel soe_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SoeKernel k;
  k.beta = j.at("beta").get<double>();
  k.q = j.at("q").get<int>();
  k.eps = j.at("eps").get<double>();
  k.delta = j.at("delta").get<double>();
  k.horizon = j.at("horizon").get<double>();
  k.step_h = j.value("step_h", 0.0);
  k.nodes = j.at("nodes").get<std::vector<double>>();
  k.weights = j.at("weights").get<std::vector<double>>();
  if (k.nodes.size() != k.weights.size()) throw std::invalid_argument("soe_from_json: nodes/weights length mismatch");
  return k;
}

void save_soe(const SoeKernel& kernel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_soe: cannot open " + path.string());
  out << soe_to_json(kernel) << '\n';
  if (!out) throw std::runtime_error("save_soe: write failed for " + path.string());
}

SoeKernel load_soe(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_soe: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return soe_from_json(buf.str());
}

}  // namespace fdg

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace fdg {

/// Sum-of-exponentials approximation of the power kernel
///
///   omega_beta(t) = t^(beta-1) / Gamma(beta)
///                 ~ sum_j w_j t^q exp(-lambda_j t),   delta <= t <= horizon,
///
/// with relative error at most `eps` on the window. For q = 0 the nodes and
/// weights come from the trapezoidal rule applied to
///   omega_beta(t) = sin(beta pi)/pi * int exp(-t e^x + (1 - beta) x) dx.
/// For q >= 1 the base kernel omega_{beta-q} is compressed and rescaled by
/// 1 / prod_{l=1..q} (beta - l).
struct SoeKernel {
  double beta = 0.0;   ///< kernel exponent approximated
  int q = 0;           ///< shift order
  double eps = 0.0;    ///< certified relative accuracy
  double delta = 0.0;  ///< lower end of the validity window
  double horizon = 0.0;
  double step_h = 0.0;  ///< trapezoid step in log-node space
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double base_beta() const { return beta - q; }

  /// sum_j w_j t^q exp(-lambda_j t)
  double evaluate(double t) const;
};

/// Build and certify an unshifted kernel for beta < 1, beta not 0, -1, -2, ...
/// Throws std::invalid_argument on bad parameters and std::runtime_error when
/// certification cannot be reached.
SoeKernel build_soe(double beta, double eps, double delta, double horizon);

/// Build a kernel for arbitrary beta using the smallest shift q >= 0 with
/// beta - q <= beta0.
SoeKernel build_soe_shifted(double beta, double beta0, double eps, double delta, double horizon);

/// Number of log-spaced samples used to certify a kernel.
inline constexpr std::size_t kCertificationSamples = 10000;

/// Maximum relative error against omega_beta on `samples` log-spaced points
/// covering [delta, horizon], endpoints included.
double validate_soe(const SoeKernel& kernel, std::size_t samples = kCertificationSamples);

/// Same, on an explicit window (which may differ from the kernel's own).
double validate_soe_window(const SoeKernel& kernel, double lo, double hi, std::size_t samples);

std::string soe_to_json(const SoeKernel& kernel);
SoeKernel soe_from_json(const std::string& text);
void save_soe(const SoeKernel& kernel, const std::filesystem::path& path);
SoeKernel load_soe(const std::filesystem::path& path);

}  // namespace fdg

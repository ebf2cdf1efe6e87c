#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdg/dg_core.hpp"
#include "fdg/fem1d.hpp"

namespace fdg {

enum class ExampleKind { ode1, pde1 };

std::string to_string(ExampleKind kind);
ExampleKind parse_example(const std::string& name);
std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

/// One convergence experiment: a fixed (example, alpha, p, r) swept over
/// N_list, or over h_list when N_list has a single entry.
struct RunConfig {
  ExampleKind example = ExampleKind::ode1;
  double alpha = 0.5;
  std::optional<double> sigma;  ///< regularity exponent, alpha when unset
  int p = 1;
  std::optional<double> r;      ///< unset: optimal grading
  std::vector<std::size_t> N_list{32, 64, 128, 256, 512};
  std::vector<double> h_list;   ///< pde only
  Mode mode = Mode::direct;
  std::optional<double> eps;    ///< SOE accuracy, unset: automatic
  double T = 4.0;
  std::uint64_t seed = 1;
  std::string out;

  double sigma_value() const { return sigma.value_or(alpha); }
  /// Explicit r, or optimal_r clamped to >= 1.
  double grading() const;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Manufactured problem: system plus exact solution u(x, t) (x ignored for
/// the scalar example), its time derivative and the forcing f(x, t).
struct Problem {
  ExampleKind kind = ExampleKind::ode1;
  double alpha = 0.5;
  SpatialSystem system;
  std::optional<FemGrid> grid;
  std::function<double(double x, double t)> exact;
  std::function<double(double x, double t)> exact_dt;
  std::function<double(double x, double t)> forcing;
};

/// C_D^alpha u + u = f, u = 1 + t^alpha + t^(2 alpha).
Problem example1(double alpha);
/// C_D^alpha u - u_xx = f on (0, 1), u = (1 + t^alpha + t^(2 alpha)) sin(2 pi x).
Problem example2(double alpha, const FemGrid& grid);
Problem make_problem(ExampleKind kind, double alpha, std::optional<double> h);

/// Max over `samples` random points of |C_D^alpha u + L u - f| / max(1, |f|),
/// with the Caputo derivative evaluated by tanh-sinh quadrature and the
/// spatial operator by a Richardson-extrapolated second difference.
double caputo_residual(const Problem& problem, double final_time, std::size_t samples = 20,
                       std::uint64_t seed = 7);
inline constexpr double kResidualTolerance = 1e-8;

/// (sum_n tau_n ||U(t_n^-) - u(t_n)||^2)^(1/2). Throws std::invalid_argument
/// without an error hook.
double average_error(const PolyTrace& trace, const SpatialSystem& system);

struct ErrorRow {
  double alpha = 0.0;
  double r = 0.0;
  std::size_t N = 0;
  std::optional<double> h;
  double error = 0.0;
  std::optional<double> rate;
  double wall_time_ms = 0.0;
};

struct ErrorTable {
  std::string example = "ode1";
  std::string mode = "direct";
  int p = 1;
  std::optional<double> eps;  ///< SOE accuracy used (fast mode)
  std::size_t Q = 0;          ///< largest kernel size used
  double kernel_error = 0.0;  ///< worst certified kernel error seen
  std::string sweep = "N";    ///< "N" or "h"
  double T = 4.0;
  std::vector<ErrorRow> rows;
};

/// rate_i = log(e_{i-1}/e_i) / log(N_i/N_{i-1}) (or h_{i-1}/h_i) inside each
/// run of rows sharing alpha, r and the fixed discretization parameter.
void compute_rates(ErrorTable& table);

/// Throws std::runtime_error naming (alpha, r, N) when a solve fails.
ErrorTable run_convergence(const RunConfig& config);
/// Concatenate run_convergence over several configs (same example/mode/p).
ErrorTable run_configs(const std::vector<RunConfig>& configs);

/// Experiment grids for "t1".."t4".
std::vector<RunConfig> table_preset(const std::string& name);
/// Published reference values for "t1".."t4" (wall times zero).
ErrorTable reference_table(const std::string& name);

struct ReferenceCheck {
  std::size_t compared = 0;
  double worst_error_rel = 0.0;
  double worst_rate_diff = 0.0;
  std::vector<std::string> violations;
  bool ok() const { return compared > 0 && violations.empty(); }
};

/// Match rows by (alpha, r, N, h) and compare errors (relative) and rates.
ReferenceCheck check_against_reference(const ErrorTable& computed, const ErrorTable& reference,
                                       double rel_tol = 0.05, double rate_tol = 0.1);

// --- fast vs direct -----------------------------------------------------------

struct Difference {
  double weighted = 0.0;  ///< (sum_n tau_n ||U_-^n - V_-^n||^2)^(1/2)
  double max = 0.0;       ///< max_n ||U_-^n - V_-^n||
};
Difference trace_difference(const PolyTrace& a, const PolyTrace& b, const SpatialSystem& system);

struct BenchRow {
  std::size_t N = 0;
  double direct_ms = 0.0;
  double fast_ms = 0.0;
  double ratio = 0.0;
  Difference difference;
  std::size_t Q = 0;
};

struct BenchReport {
  double alpha = 0.0;
  double r = 0.0;
  int p = 1;
  std::optional<double> eps;
  std::vector<BenchRow> rows;
};

/// Median of `repeats` timed runs per mode after one untimed warmup run.
BenchReport bench_fast_vs_direct(const RunConfig& config, int repeats = 3);

// --- output -------------------------------------------------------------------

enum class Format { csv, json, markdown };
Format parse_format(const std::string& name);

std::string format_table(const ErrorTable& table, Format format);
ErrorTable table_from_json(const std::string& text);
/// Writes format_table; throws std::runtime_error naming the path on failure.
void emit(const ErrorTable& table, Format format, const std::filesystem::path& path);

std::string format_bench(const BenchReport& report, Format format);

}  // namespace fdg

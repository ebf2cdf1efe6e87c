#include "fdg/harness.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fdg/special.hpp"
#include "fdg/time_mesh.hpp"

namespace fdg {

std::string to_string(ExampleKind kind) { return kind == ExampleKind::ode1 ? "ode1" : "pde1"; }

ExampleKind parse_example(const std::string& name) {
  if (name == "ode1" || name == "ode") return ExampleKind::ode1;
  if (name == "pde1" || name == "pde") return ExampleKind::pde1;
  throw std::invalid_argument("unknown example '" + name + "' (expected ode1 or pde1)");
}

std::string to_string(Mode mode) { return mode == Mode::direct ? "direct" : "fast"; }

Mode parse_mode(const std::string& name) {
  if (name == "direct") return Mode::direct;
  if (name == "fast") return Mode::fast;
  throw std::invalid_argument("unknown mode '" + name + "' (expected direct or fast)");
}

double RunConfig::grading() const {
  if (r) return *r;
  return std::max(1.0, optimal_r(alpha, sigma_value(), p));
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("RunConfig: alpha must lie in (0, 1)");
  if (p != 1 && p != 2) throw std::invalid_argument("RunConfig: p must be 1 or 2");
  if (r && !(*r >= 1.0)) throw std::invalid_argument("RunConfig: r must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("RunConfig: T must be positive");
  if (N_list.empty()) throw std::invalid_argument("RunConfig: N_list is empty");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] == 0) throw std::invalid_argument("RunConfig: N must be positive");
    if (i > 0 && N_list[i] <= N_list[i - 1]) throw std::invalid_argument("RunConfig: N_list must increase");
  }
  if (example == ExampleKind::pde1 && h_list.empty()) throw std::invalid_argument("RunConfig: pde1 needs h_list");
  if (example == ExampleKind::ode1 && !h_list.empty()) throw std::invalid_argument("RunConfig: ode1 takes no h_list");
  if (N_list.size() > 1 && h_list.size() > 1)
    throw std::invalid_argument("RunConfig: sweep either N_list or h_list, not both");
  if (eps && !(*eps > 0.0 && *eps < 1.0)) throw std::invalid_argument("RunConfig: eps must lie in (0, 1)");
}

// ---------------------------------------------------------------------------

namespace {

struct Amplitude {
  double alpha, g1, g2;
  explicit Amplitude(double a) : alpha(a), g1(gamma_fn(a + 1.0)), g2(gamma_fn(2.0 * a + 1.0)) {}
  double u(double t) const { return 1.0 + std::pow(t, alpha) + std::pow(t, 2.0 * alpha); }
  double du(double t) const { return alpha * std::pow(t, alpha - 1.0) + 2.0 * alpha * std::pow(t, 2.0 * alpha - 1.0); }
  // C_D^alpha of u
  double caputo(double t) const { return g1 + g2 / g1 * std::pow(t, alpha); }
};

}  // namespace

Problem example1(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("example1: alpha must lie in (0, 1)");
  const Amplitude amp(alpha);
  Problem pr;
  pr.kind = ExampleKind::ode1;
  pr.alpha = alpha;
  pr.exact = [amp](double, double t) { return amp.u(t); };
  pr.exact_dt = [amp](double, double t) { return amp.du(t); };
  pr.forcing = [amp](double, double t) { return amp.caputo(t) + amp.u(t); };

  auto& s = pr.system;
  s.dofs = 1;
  s.mass = Tridiagonal::identity(1);
  s.stiffness = Tridiagonal::identity(1);
  s.load = [amp](double t, std::span<double> out) { out[0] = amp.caputo(t) + amp.u(t); };
  s.initial = {1.0};
  s.initial_load = {1.0};
  s.error_norm = [amp](double t, std::span<const double> c) { return std::abs(c[0] - amp.u(t)); };
  return pr;
}

Problem example2(double alpha, const FemGrid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("example2: alpha must lie in (0, 1)");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double k2 = two_pi * two_pi;
  const Amplitude amp(alpha);
  Problem pr;
  pr.kind = ExampleKind::pde1;
  pr.alpha = alpha;
  pr.grid = grid;
  pr.exact = [amp](double x, double t) { return amp.u(t) * std::sin(two_pi * x); };
  pr.exact_dt = [amp](double x, double t) { return amp.du(t) * std::sin(two_pi * x); };
  pr.forcing = [amp](double x, double t) { return (amp.caputo(t) + k2 * amp.u(t)) * std::sin(two_pi * x); };

  const auto shape = load_vector(grid, [](double x) { return std::sin(two_pi * x); });
  auto& s = pr.system;
  s.dofs = grid.M;
  s.mass = grid.mass;
  s.stiffness = grid.stiffness;
  s.load = [amp, shape](double t, std::span<double> out) {
    const double a = amp.caputo(t) + k2 * amp.u(t);
    for (std::size_t i = 0; i < shape.size(); ++i) out[i] = a * shape[i];
  };
  s.initial = interpolate(grid, [](double x) { return std::sin(two_pi * x); });
  s.initial_load = shape;
  s.error_norm = [amp, grid](double t, std::span<const double> c) {
    const double a = amp.u(t);
    return l2_error(grid, c, [a](double x) { return a * std::sin(two_pi * x); });
  };
  return pr;
}

Problem make_problem(ExampleKind kind, double alpha, std::optional<double> h) {
  if (kind == ExampleKind::ode1) return example1(alpha);
  if (!h) throw std::invalid_argument("make_problem: pde1 needs a mesh width");
  return example2(alpha, build_grid(*h));
}

double caputo_residual(const Problem& problem, double final_time, std::size_t samples, std::uint64_t seed) {
  const double alpha = problem.alpha;
  const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(0.05, 0.95);
  boost::math::quadrature::tanh_sinh<double> integrator;
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = final_time * (1e-3 + (1.0 - 1e-3) * ut(rng));
    const double x = problem.kind == ExampleKind::pde1 ? ux(rng) : 0.0;
    auto integrand = [&](double s, double sc) {
      const double dist = (s > 0.5 * t && sc > 0.0) ? sc : t - s;
      return problem.exact_dt(x, s) * std::pow(dist, -alpha);
    };
    const double caputo = inv_gamma * integrator.integrate(integrand, 0.0, t, 1e-15);
    double op;
    if (problem.kind == ExampleKind::ode1) {
      op = problem.exact(x, t);
    } else {
      // -u_xx, fourth order by Richardson on the central second difference
      auto d2 = [&](double hh) {
        return (problem.exact(x + hh, t) - 2.0 * problem.exact(x, t) + problem.exact(x - hh, t)) / (hh * hh);
      };
      constexpr double hh = 2e-3;
      op = -(4.0 * d2(0.5 * hh) - d2(hh)) / 3.0;
    }
    const double f = problem.forcing(x, t);
    worst = std::max(worst, std::abs(caputo + op - f) / std::max(1.0, std::abs(f)));
  }
  return worst;
}

double average_error(const PolyTrace& trace, const SpatialSystem& system) {
  if (!system.error_norm) throw std::invalid_argument("average_error: system has no exact-solution hook");
  const auto& mesh = trace.mesh();
  double s = 0.0;
  for (std::size_t n = 1; n <= trace.size(); ++n) {
    const auto v = trace.left_limit(n);
    const double e = system.error_norm(mesh.t(n), v);
    s += mesh.tau(n) * e * e;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

void compute_rates(ErrorTable& table) {
  auto& rows = table.rows;
  const bool by_h = table.sweep == "h";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate.reset();
    if (i == 0) continue;
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.alpha != b.alpha || a.r != b.r) continue;
    double ratio;
    if (by_h) {
      if (a.N != b.N || !a.h || !b.h || !(*a.h > *b.h)) continue;
      ratio = *a.h / *b.h;
    } else {
      if (a.h != b.h || !(b.N > a.N)) continue;
      ratio = static_cast<double>(b.N) / static_cast<double>(a.N);
    }
    if (a.error > 0.0 && b.error > 0.0) rows[i].rate = std::log(a.error / b.error) / std::log(ratio);
  }
}

namespace {

struct Cell {
  std::size_t N;
  std::optional<double> h;
};

std::string cell_label(double alpha, double r, std::size_t n, std::optional<double> h) {
  std::ostringstream os;
  os << "(alpha=" << alpha << ", r=" << r << ", N=" << n;
  if (h) os << ", h=" << *h;
  os << ")";
  return os.str();
}

}  // namespace

ErrorTable run_convergence(const RunConfig& config) {
  config.validate();
  ErrorTable table;
  table.example = to_string(config.example);
  table.mode = to_string(config.mode);
  table.p = config.p;
  table.T = config.T;
  table.sweep = (config.N_list.size() == 1 && config.h_list.size() > 1) ? "h" : "N";
  if (config.mode == Mode::fast) table.eps = config.eps;

  std::vector<Cell> cells;
  if (config.h_list.empty()) {
    for (auto n : config.N_list) cells.push_back({n, std::nullopt});
  } else {
    for (double h : config.h_list)
      for (auto n : config.N_list) cells.push_back({n, h});
  }

  const double r = config.grading();
  std::optional<double> current_h;
  std::optional<Problem> problem;
  for (const auto& cell : cells) {
    if (!problem || cell.h != current_h) {
      problem = make_problem(config.example, config.alpha, cell.h);
      current_h = cell.h;
    }
    try {
      const GradedMesh mesh(config.T, cell.N, r);
      const auto start = std::chrono::steady_clock::now();
      std::optional<SoeKernel> kernel;
      if (config.mode == Mode::fast && cell.N >= 3) {
        const double eps = config.eps.value_or(default_soe_eps(mesh, config.alpha));
        kernel = build_dg_kernel(mesh, config.alpha, eps);
        table.Q = std::max(table.Q, kernel->size());
        if (!table.eps) table.eps = eps;
      }
      const auto trace = solve(config.mode, problem->system, mesh, config.alpha, config.p, kernel);
      const auto stop = std::chrono::steady_clock::now();
      if (kernel) table.kernel_error = std::max(table.kernel_error, validate_soe(*kernel) / kernel->eps);
      ErrorRow row;
      row.alpha = config.alpha;
      row.r = r;
      row.N = cell.N;
      row.h = cell.h;
      row.error = average_error(trace, problem->system);
      row.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      table.rows.push_back(row);
    } catch (const std::exception& e) {
      throw std::runtime_error("run_convergence failed at " + cell_label(config.alpha, r, cell.N, cell.h) + ": " +
                               e.what());
    }
  }
  compute_rates(table);
  return table;
}

ErrorTable run_configs(const std::vector<RunConfig>& configs) {
  if (configs.empty()) throw std::invalid_argument("run_configs: no configurations");
  ErrorTable merged;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    auto t = run_convergence(configs[i]);
    if (i == 0) {
      merged = t;
      continue;
    }
    if (t.example != merged.example || t.mode != merged.mode || t.p != merged.p || t.sweep != merged.sweep)
      throw std::invalid_argument("run_configs: configurations disagree on example, mode, p or sweep");
    merged.Q = std::max(merged.Q, t.Q);
    merged.kernel_error = std::max(merged.kernel_error, t.kernel_error);
    if (!merged.eps) merged.eps = t.eps;
    merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
  }
  compute_rates(merged);
  return merged;
}

std::vector<RunConfig> table_preset(const std::string& name) {
  const double alphas[] = {0.2, 0.5, 0.8};
  std::vector<std::optional<double>> grades;
  RunConfig base;
  if (name == "t1" || name == "t3" || name == "t4") {
    grades = {1.0, 1.2, 1.6, std::nullopt, 3.5};
  } else if (name == "t2") {
    grades = {2.0, 2.2, 2.5, std::nullopt, 5.0};
    base.p = 2;
  } else {
    throw std::invalid_argument("unknown table preset '" + name + "' (expected t1, t2, t3 or t4)");
  }
  if (name == "t3") {
    base.example = ExampleKind::pde1;
    base.h_list = {1.0 / 256.0};
  } else if (name == "t4") {
    base.example = ExampleKind::pde1;
    base.N_list = {20000};
    base.h_list = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    base.mode = Mode::fast;
    base.eps = 1e-13;
  }
  std::vector<RunConfig> out;
  for (double a : alphas)
    for (const auto& r : grades) {
      RunConfig c = base;
      c.alpha = a;
      c.r = r;
      out.push_back(c);
    }
  return out;
}

ReferenceCheck check_against_reference(const ErrorTable& computed, const ErrorTable& reference, double rel_tol,
                                       double rate_tol) {
  ReferenceCheck out;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  for (const auto& ref : reference.rows) {
    const ErrorRow* match = nullptr;
    for (const auto& row : computed.rows) {
      if (close(row.alpha, ref.alpha) && close(row.r, ref.r) && row.N == ref.N && row.h.has_value() == ref.h.has_value() &&
          (!ref.h || close(*row.h, *ref.h))) {
        match = &row;
        break;
      }
    }
    if (!match) continue;
    ++out.compared;
    const auto label = cell_label(ref.alpha, ref.r, ref.N, ref.h);
    const double rel = std::abs(match->error - ref.error) / ref.error;
    out.worst_error_rel = std::max(out.worst_error_rel, rel);
    if (!(rel <= rel_tol)) {
      std::ostringstream os;
      os << label << " error " << match->error << " vs " << ref.error << " (rel " << rel << ")";
      out.violations.push_back(os.str());
    }
    if (ref.rate) {
      const double d = match->rate ? std::abs(*match->rate - *ref.rate) : INFINITY;
      out.worst_rate_diff = std::max(out.worst_rate_diff, d);
      if (!(d <= rate_tol)) {
        std::ostringstream os;
        os << label << " rate " << (match->rate ? std::to_string(*match->rate) : "-") << " vs " << *ref.rate;
        out.violations.push_back(os.str());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Difference trace_difference(const PolyTrace& a, const PolyTrace& b, const SpatialSystem& system) {
  if (a.size() != b.size() || a.dofs() != b.dofs()) throw std::invalid_argument("trace_difference: traces differ in shape");
  const auto& mesh = a.mesh();
  Difference d;
  double s = 0.0;
  std::vector<double> diff(a.dofs()), mdiff(a.dofs());
  for (std::size_t n = 1; n <= a.size(); ++n) {
    const auto va = a.left_limit(n), vb = b.left_limit(n);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = va[i] - vb[i];
    system.mass.apply(diff, mdiff);
    double sq = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) sq += diff[i] * mdiff[i];
    sq = std::max(sq, 0.0);
    s += mesh.tau(n) * sq;
    d.max = std::max(d.max, std::sqrt(sq));
  }
  d.weighted = std::sqrt(s);
  return d;
}

BenchReport bench_fast_vs_direct(const RunConfig& config, int repeats) {
  config.validate();
  if (repeats < 1) throw std::invalid_argument("bench_fast_vs_direct: repeats must be positive");
  BenchReport report;
  report.alpha = config.alpha;
  report.r = config.grading();
  report.p = config.p;
  report.eps = config.eps;
  const std::optional<double> h = config.h_list.empty() ? std::nullopt : std::optional<double>(config.h_list.front());
  const Problem problem = make_problem(config.example, config.alpha, h);

  for (auto n : config.N_list) {
    const GradedMesh mesh(config.T, n, report.r);
    BenchRow row;
    row.N = n;
    auto timed = [&](Mode mode, std::optional<PolyTrace>& last) {
      std::vector<double> ms;
      for (int k = 0; k <= repeats; ++k) {
        const auto start = std::chrono::steady_clock::now();
        std::optional<SoeKernel> kernel;
        if (mode == Mode::fast && n >= 3) {
          kernel = build_dg_kernel(mesh, config.alpha, config.eps.value_or(default_soe_eps(mesh, config.alpha)));
          row.Q = kernel->size();
        }
        auto trace = solve(mode, problem.system, mesh, config.alpha, config.p, kernel);
        const auto stop = std::chrono::steady_clock::now();
        if (k > 0) ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        last = std::move(trace);
      }
      std::sort(ms.begin(), ms.end());
      return ms[ms.size() / 2];
    };
    std::optional<PolyTrace> direct, fast;
    row.direct_ms = timed(Mode::direct, direct);
    row.fast_ms = timed(Mode::fast, fast);
    row.ratio = row.direct_ms / row.fast_ms;
    row.difference = trace_difference(*direct, *fast, problem.system);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fdg

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fdg/dg_core.hpp"
#include "fdg/frac_calc.hpp"
#include "fdg/harness.hpp"
#include "fdg/special.hpp"
#include "oracle.hpp"

using namespace fdg;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// worst kernel certification ratio (validate_soe / eps) over everything run
double worst_kernel = 0.0;
std::size_t kernels_checked = 0;

void certify(const SoeKernel& k) {
  worst_kernel = std::max(worst_kernel, validate_soe(k) / k.eps);
  ++kernels_checked;
}

const ErrorRow* find_row(const ErrorTable& t, double alpha, double r, std::size_t N, std::optional<double> h) {
  for (const auto& row : t.rows)
    if (std::abs(row.alpha - alpha) < 1e-12 && std::abs(row.r - r) < 1e-9 && row.N == N &&
        (!h || (row.h && std::abs(*row.h - *h) < 1e-15)))
      return &row;
  return nullptr;
}

std::string describe(const ReferenceCheck& c) {
  std::string s = fmt("%.0f rows compared, worst error deviation %.1f%%, worst rate deviation %.2f", double(c.compared),
                      100.0 * c.worst_error_rel, c.worst_rate_diff);
  if (!c.violations.empty()) s += ", " + std::to_string(c.violations.size()) + " violations, first: " + c.violations.front();
  return s;
}

std::string anchor_text(const ErrorRow* row, double err, std::optional<double> rate) {
  if (!row) return "anchor row missing";
  std::string s = fmt("anchor %.3e (published %.2e)", row->error, err);
  if (rate) s += fmt(", rate %.2f (published %.2f)", row->rate.value_or(NAN), *rate);
  return s;
}

bool anchor_ok(const ErrorRow* row, double err, std::optional<double> rate) {
  if (!row) return false;
  if (std::abs(row->error - err) > 0.05 * err) return false;
  return !rate || (row->rate && std::abs(*row->rate - *rate) <= 0.1);
}

// Criterion 1-3: table reproduction with spot anchor and runtime limit;
// fast_limit_s > 0 also times the same preset in fast mode.
void table_criterion(int id, const std::string& name, double limit_s, double alpha, double r, std::size_t N,
                     std::optional<double> h, double err, std::optional<double> rate, double fast_limit_s = 0.0) {
  auto t0 = std::chrono::steady_clock::now();
  const auto table = run_configs(table_preset(name));
  const double elapsed = seconds_since(t0);
  const auto check = check_against_reference(table, reference_table(name));
  const ErrorRow* row = find_row(table, alpha, r, N, h);
  bool ok = check.ok() && anchor_ok(row, err, rate) && elapsed < limit_s;
  std::string detail = name + " direct: " + describe(check) + "; " + anchor_text(row, err, rate) +
                       fmt("; %.1f s (limit %.0f s)", elapsed, limit_s);
  if (fast_limit_s > 0.0) {
    auto configs = table_preset(name);
    for (auto& c : configs) c.mode = Mode::fast;
    t0 = std::chrono::steady_clock::now();
    const auto fast = run_configs(configs);
    const double fast_s = seconds_since(t0);
    worst_kernel = std::max(worst_kernel, fast.kernel_error);
    kernels_checked += fast.rows.size();
    const auto fcheck = check_against_reference(fast, reference_table(name));
    ok = ok && fcheck.ok() && fast_s < fast_limit_s;
    detail += "; fast: " + describe(fcheck) + fmt("; %.1f s (limit %.0f s)", fast_s, fast_limit_s);
  }
  report(id, ok, detail);
}

std::vector<double> nodal_values(const Problem& pr, double t) {
  std::vector<double> v(pr.system.dofs);
  pr.system.load(t, v);
  return v;
}

// Criterion 8 pieces; each returns the worst normalised deviation (pass <= 1).
double oracle_conv_poly_power() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> g(0.05, 2.5), pos(0.0, 3.0), len(0.01, 2.0), gap(0.0, 1.5);
  std::uniform_int_distribution<int> deg(0, 3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = g(rng), a = pos(rng), b = a + len(rng);
    const double t = i % 4 == 0 ? b : b + gap(rng);
    const int m = deg(rng);
    const double ref =
        t == b ? oracle::integrate_power([&](double w) { return std::pow(b - w - a, m); }, b - a, gamma - 1.0) /
                     oracle::gamma(gamma)
               : oracle::integrate(
                     [&](double s) { return std::pow(t - s, gamma - 1.0) / oracle::gamma(gamma) * std::pow(s - a, m); },
                     a, b);
    worst = std::max(worst, std::abs(conv_poly_power(gamma, a, b, m, t) - ref) / std::abs(ref));
  }
  return worst / 1e-11;
}

PolyTrace random_trace(const GradedMesh& mesh, int p, std::size_t dofs, std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyTrace tr(mesh, p, dofs);
  for (std::size_t n = 1; n <= count; ++n) {
    std::vector<double> block((p + 1) * dofs);
    for (double& c : block) c = u(rng);
    tr.append(block);
  }
  return tr;
}

double oracle_blocks() {
  double worst = 0.0;
  const GradedMesh mesh(4.0, 6, 2.5);
  for (double alpha : {0.2, 0.5, 0.8})
    for (int p : {1, 2})
      for (std::size_t n : {1u, 2u, 4u}) {
        const auto blocks = local_frac_block(mesh, n, alpha, p);
        double scale = 1.0;
        for (double v : blocks.self.data) scale = std::max(scale, std::abs(v));
        for (int a = 0; a <= p; ++a)
          for (int b = 0; b <= p; ++b) {
            worst = std::max(worst, std::abs(blocks.self(a, b) - oracle::rl_block_entry(mesh, n, n, a, b, alpha)) / scale);
            if (n >= 2)
              worst = std::max(
                  worst, std::abs(blocks.neighbour(a, b) - oracle::rl_block_entry(mesh, n, n - 1, a, b, alpha)) / scale);
          }
      }
  std::mt19937_64 rng(41);
  for (int p : {1, 2}) {
    const double alpha = p == 1 ? 0.35 : 0.75;
    const std::size_t n = 5;
    const auto tr = random_trace(mesh, p, 2, rng, n - 1);
    const auto h = history_direct(tr, n, alpha);
    for (int a = 0; a <= p; ++a)
      for (std::size_t i = 0; i < 2; ++i) {
        double ref = 0.0;
        for (std::size_t k = 1; k < n; ++k)
          for (int b = 0; b <= p; ++b) ref += oracle::rl_block_entry(mesh, n, k, a, b, alpha) * tr.coeff(k, b, i);
        worst = std::max(worst, std::abs(h[a * 2 + i] - ref) / std::max(1.0, std::abs(ref)));
      }
  }
  return worst / 1e-10;
}

double oracle_brute_force() {
  struct Case {
    double alpha;
    int p;
    double r;
    std::size_t N;
  };
  double worst = 0.0;
  for (const Case& c : {Case{0.5, 1, 7.0 / 3.0, 8}, Case{0.2, 2, 29.0 / 6.0, 6}, Case{0.8, 1, 1.0, 8}}) {
    const auto pr = example1(c.alpha);
    const GradedMesh mesh(4.0, c.N, c.r);
    const auto tr = solve(Mode::direct, pr.system, mesh, c.alpha, c.p);
    const auto ref = oracle::global_dg(mesh, c.alpha, c.p, {{1.0}}, {{1.0}},
                                       [&](double t) { return nodal_values(pr, t); }, {1.0});
    double diff = 0.0, scale = 0.0;
    for (std::size_t n = 1; n <= c.N; ++n)
      for (int a = 0; a <= c.p; ++a) {
        diff = std::max(diff, std::abs(tr.coeff(n, a, 0) - ref[(n - 1) * (c.p + 1) + a]));
        scale = std::max(scale, std::abs(ref[(n - 1) * (c.p + 1) + a]));
      }
    worst = std::max(worst, diff / scale);
  }
  return worst / 1e-8;
}

// smallest a(v, v) / bound over 100 random traces; pass when >= 1
double oracle_coercivity() {
  std::mt19937_64 rng(123);
  double worst = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 2;
    const std::size_t N = std::size_t{4} << (trial % 3);
    const double alpha = 0.1 + 0.8 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double r = 1.0 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const GradedMesh mesh(4.0, N, r);
    const auto v = random_trace(mesh, p, 1, rng, N);
    const double bound = std::pow(4.0, -alpha) / (2.0 * gamma_fn(1.0 - alpha)) * time_l2_norm_sq(v, N);
    worst = std::min(worst, bilinear_form(v, v, alpha, N) / bound);
  }
  return worst;
}

double oracle_identities() {
  double worst = 0.0;
  for (double z = -50.0; z <= 50.0; z += 0.37) {
    double out[4];
    phi_all(z, out);
    for (int k = 1; k <= 3; ++k) {
      const double lhs = z * out[k], rhs = std::exp(z) - k * out[k - 1];
      const double scale = std::max({std::abs(lhs), std::exp(z), k * std::abs(out[k - 1])});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  const GradedMesh mesh(4.0, 16, 2.0);
  for (double beta : {0.3, 0.5, 0.9, 1.5})
    for (int m = 0; m <= 2; ++m) {
      PolyTrace tr(mesh, 2, 1, {m == 0 ? 1.0 : 0.0});
      for (std::size_t n = 1; n <= 16; ++n) {
        std::vector<double> block(3, 0.0);
        for (int k = 0; k <= m; ++k) block[k] = binomial(m, k) * std::pow(mesh.t(n - 1), m - k) * std::pow(mesh.tau(n), k);
        tr.append(block);
      }
      const auto direct = rl_integral_direct(tr, beta);
      const double c = gamma_fn(m + 1.0) / gamma_fn(m + 1.0 + beta);
      for (std::size_t n = 1; n <= 16; ++n) {
        const double exact = c * std::pow(mesh.t(n), m + beta);
        worst = std::max(worst, std::abs(direct[n - 1][0] - exact) / std::max(1.0, exact));
      }
    }
  return worst / 1e-13;
}

}  // namespace

int main() {
  // 9 first: it gates the table runs
  const double res1 = std::max({caputo_residual(example1(0.2), 4.0), caputo_residual(example1(0.5), 4.0),
                                caputo_residual(example1(0.8), 4.0)});
  const auto gate_grid = build_grid(1.0 / 16);
  const double res2 = std::max({caputo_residual(example2(0.2, gate_grid), 4.0), caputo_residual(example2(0.5, gate_grid), 4.0),
                                caputo_residual(example2(0.8, gate_grid), 4.0)});
  const bool gate = res1 <= kResidualTolerance && res2 <= kResidualTolerance;
  report(9, gate, fmt("Caputo residual example 1 %.2e, example 2 %.2e (tolerance %.0e)", res1, res2, kResidualTolerance));

  if (gate) {
    table_criterion(1, "t1", 120.0, 0.5, 3.5 / 1.5, 512, std::nullopt, 2.56e-06, std::nullopt);
    table_criterion(2, "t2", 300.0, 0.8, 5.0, 512, std::nullopt, 1.89e-09, 2.98);
    table_criterion(3, "t3", 900.0, 0.2, 3.8 / 1.2, 512, 1.0 / 256, 2.00e-05, 2.06, 180.0);

    const auto t4 = run_configs(table_preset("t4"));
    worst_kernel = std::max(worst_kernel, t4.kernel_error);
    kernels_checked += t4.rows.size();
    double worst_rate = 0.0;
    for (const auto& row : t4.rows)
      if (row.h && std::abs(*row.h - 1.0 / 64) < 1e-15) worst_rate = std::max(worst_rate, std::abs(row.rate.value_or(0.0) - 2.0));
    const ErrorRow* anchor = find_row(t4, 0.5, 1.0, 20000, 1.0 / 64);
    report(4, worst_rate <= 0.05 && anchor_ok(anchor, 1.73e-3, std::nullopt),
           fmt("t4 fast N=20000: worst |rate - 2| at h=1/64 is %.3f; ", worst_rate) + anchor_text(anchor, 1.73e-3, std::nullopt));
  } else {
    for (int id = 1; id <= 4; ++id) report(id, false, "skipped, residual gate failed");
  }

  {
    const auto pr = example1(0.5);
    const GradedMesh mesh(4.0, 512, 2.0);
    const auto direct = solve(Mode::direct, pr.system, mesh, 0.5, 1);
    std::vector<double> diff;
    for (double eps : {1e-12, 1e-9, 1e-6}) {
      const auto kernel = build_dg_kernel(mesh, 0.5, eps);
      certify(kernel);
      const auto fast = solve(Mode::fast, pr.system, mesh, 0.5, 1, kernel);
      diff.push_back(trace_difference(direct, fast, pr.system).weighted);
    }
    const double s1 = diff[1] / diff[0] / 1e3, s2 = diff[2] / diff[1] / 1e3;
    const bool ok = diff[0] <= 1e-9 && s1 >= 0.1 && s1 <= 10.0 && s2 >= 0.1 && s2 <= 10.0;
    report(5, ok, fmt("weighted difference %.2e / %.2e / %.2e at eps 1e-12 / 1e-9 / 1e-6", diff[0], diff[1], diff[2]) +
                      fmt(", per-decade scaling relative to linear %.2f, %.2f", s1, s2));
  }

  {
    RunConfig cfg;
    cfg.alpha = 0.5;
    cfg.p = 1;
    cfg.r = 2.0;
    cfg.N_list = {2500, 5000, 10000};
    const auto bench = bench_fast_vs_direct(cfg);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < bench.rows.size(); ++i) {
      const auto& row = bench.rows[i];
      const GradedMesh mesh(cfg.T, row.N, 2.0);
      certify(build_dg_kernel(mesh, cfg.alpha, default_soe_eps(mesh, cfg.alpha)));
      if (i > 0 && !(row.ratio > bench.rows[i - 1].ratio)) ok = false;
      detail += fmt("N=%.0f ratio %.2f (direct %.0f ms, fast %.0f ms); ", double(row.N), row.ratio, row.direct_ms, row.fast_ms);
    }
    const auto& last = bench.rows.back();
    ok = ok && last.fast_ms < last.direct_ms && last.ratio >= 3.0;
    report(6, ok, detail + "need ratio >= 3 at N=10000 and increasing");
  }

  // t1..t3 direct runs use no kernels; t3 fast and t4 record theirs in kernel_error
  report(7, worst_kernel <= 1.0,
         fmt("worst validate_soe / eps over %.0f kernels and table runs: %.3f", double(kernels_checked), worst_kernel));

  const double a = oracle_conv_poly_power(), b = oracle_blocks(), c = oracle_brute_force(), d = oracle_coercivity(),
               e = oracle_identities();
  report(8, a <= 1.0 && b <= 1.0 && c <= 1.0 && d >= 1.0 && e <= 1.0,
         fmt("deviation / tolerance: (a) %.3f (b) %.3f (c) %.3f", a, b, c) +
             fmt(" (d) min a(v,v)/bound %.3f (e) %.3f", d, e));

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

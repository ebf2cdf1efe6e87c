#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdg/dg_core.hpp"
#include "fdg/harness.hpp"
#include "fdg/soe_kernel.hpp"
#include "fdg/time_mesh.hpp"

namespace {

using namespace fdg;

constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

template <class T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    if constexpr (std::is_same_v<T, double>) {
      // accepts 1/64 style fractions
      const auto slash = item.find('/');
      if (slash != std::string::npos) {
        out.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
        continue;
      }
      out.push_back(std::stod(item, &used));
    } else {
      out.push_back(static_cast<T>(std::stoull(item, &used)));
    }
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
  }
  return out;
}

std::optional<double> parse_r(const std::string& text) {
  if (text.empty() || text == "opt" || text == "optimal") return std::nullopt;
  return std::stod(text);
}

std::optional<double> parse_eps(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  return std::stod(text);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// Shared experiment flags.
struct Flags {
  std::string config;
  double alpha = 0.5;
  int p = 1;
  std::string r = "opt";
  std::string n_list;
  std::string h_list;
  std::string mode;
  std::string eps;
  double T = 4.0;
  std::string out;
  std::string format = "csv";
  bool check = false;

  void add(CLI::App* app) {
    app->set_help_flag("--help", "print this help message and exit");
    app->add_option("--config", config, "JSON file mirroring RunConfig");
    app->add_option("--alpha", alpha, "fractional order in (0,1)");
    app->add_option("--p", p, "temporal degree (1 or 2)");
    app->add_option("--r", r, "grading exponent or 'opt'");
    app->add_option("--N", n_list, "comma-separated interval counts");
    app->add_option("--h", h_list, "comma-separated mesh widths (e.g. 1/64)");
    app->add_option("--mode", mode, "direct or fast");
    app->add_option("--eps", eps, "SOE accuracy or 'auto'");
    app->add_option("--T", T, "final time");
    app->add_option("--out", out, "output path (stdout when omitted)");
    app->add_option("--format", format, "csv, json or markdown");
    app->add_flag("--check", check, "nonzero exit on tolerance violation");
  }

  RunConfig config_for(ExampleKind kind, const CLI::App& app) const {
    RunConfig c = config.empty() ? RunConfig{} : load_run_config(config);
    if (config.empty()) c.example = kind;
    if (config.empty() || app.count("--alpha")) c.alpha = alpha;
    if (config.empty() || app.count("--p")) c.p = p;
    if (config.empty() || app.count("--r")) c.r = parse_r(r);
    if (!n_list.empty()) c.N_list = split_list<std::size_t>(n_list);
    if (!h_list.empty()) c.h_list = split_list<double>(h_list);
    if (!mode.empty()) c.mode = parse_mode(mode);
    if (!eps.empty()) c.eps = parse_eps(eps);
    if (config.empty() || app.count("--T")) c.T = T;
    if (!out.empty()) c.out = out;
    return c;
  }
};

bool residual_gate(ExampleKind kind, double alpha, double final_time) {
  const auto problem = make_problem(kind, alpha, kind == ExampleKind::pde1 ? std::optional<double>(0.125) : std::nullopt);
  const double res = caputo_residual(problem, final_time);
  if (res > kResidualTolerance) {
    std::fprintf(stderr, "residual gate failed for %s alpha=%g: %.3e > %.1e\n", to_string(kind).c_str(), alpha, res,
                 kResidualTolerance);
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-stepping DG solver for time-fractional subdiffusion"};
  app.require_subcommand(1);

  // soe --------------------------------------------------------------------
  auto* soe = app.add_subcommand("soe", "sum-of-exponentials kernels");
  soe->require_subcommand(1);
  auto* soe_build = soe->add_subcommand("build", "build and certify a kernel");
  double sb_alpha = 0.5, sb_eps = 1e-12, sb_T = 4.0, sb_r = 2.0;
  std::optional<double> sb_beta, sb_delta;
  std::size_t sb_n = 512;
  std::string sb_out;
  soe_build->add_option("--alpha", sb_alpha, "kernel omega_{-alpha}");
  soe_build->add_option("--beta", sb_beta, "explicit kernel exponent (overrides --alpha)");
  soe_build->add_option("--eps", sb_eps, "relative accuracy");
  soe_build->add_option("--delta", sb_delta, "window start (default t_1 of the graded mesh)");
  soe_build->add_option("--N", sb_n, "mesh size used for the default delta");
  soe_build->add_option("--r", sb_r, "mesh grading used for the default delta");
  soe_build->add_option("--T", sb_T, "window end");
  soe_build->add_option("--out", sb_out, "output JSON path");

  auto* soe_validate = soe->add_subcommand("validate", "check a kernel on log-spaced samples");
  std::string sv_in;
  std::size_t sv_samples = kCertificationSamples;
  bool sv_check = false;
  soe_validate->add_option("--in", sv_in, "kernel JSON")->required();
  soe_validate->add_option("--samples", sv_samples, "sample count");
  soe_validate->add_flag("--check", sv_check, "nonzero exit when the declared eps is exceeded");

  // solve ------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve one manufactured example");
  std::string solve_kind;
  std::string samples_out;
  Flags solve_flags;
  solve_flags.n_list = "512";
  solve_cmd->add_option("example", solve_kind, "ode or pde")->required();
  solve_flags.add(solve_cmd);
  solve_cmd->add_option("--samples-out", samples_out, "sampled-solution CSV path");

  // table ------------------------------------------------------------------
  auto* table_cmd = app.add_subcommand("table", "convergence tables");
  std::string table_name;
  Flags table_flags;
  std::string example_name = "ode1";
  table_cmd->add_option("name", table_name, "t1, t2, t3, t4 or custom")->required();
  table_cmd->add_option("--example", example_name, "ode1 or pde1 (custom tables)");
  table_flags.add(table_cmd);

  // bench ------------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "fast versus direct timing and difference");
  Flags bench_flags;
  bench_flags.alpha = 0.8;
  bench_flags.r = "2";
  bench_flags.n_list = "2500,5000,10000";
  int repeats = 3;
  bench_flags.add(bench_cmd);
  bench_cmd->add_option("--repeats", repeats, "timed runs per mode");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*soe_build) {
      const double beta = sb_beta.value_or(-sb_alpha);
      const double delta = sb_delta.value_or(GradedMesh(sb_T, sb_n, sb_r).t(1));
      const auto kernel = build_soe(beta, sb_eps, delta, sb_T);
      write_output(soe_to_json(kernel) + "\n", sb_out);
      std::fprintf(stderr, "Q=%zu max_rel_err=%.3e eps=%.1e\n", kernel.size(), validate_soe(kernel), kernel.eps);
      return 0;
    }
    if (*soe_validate) {
      const auto kernel = load_soe(sv_in);
      const double err = validate_soe(kernel, sv_samples);
      const bool ok = err <= kernel.eps;
      std::printf("Q=%zu beta=%g window=[%.6e, %.6e] max_rel_err=%.3e eps=%.1e %s\n", kernel.size(), kernel.beta,
                  kernel.delta, kernel.horizon, err, kernel.eps, ok ? "ok" : "FAIL");
      return (sv_check && !ok) ? kCheckFailed : 0;
    }
    if (*solve_cmd) {
      const auto kind = parse_example(solve_kind);
      auto cfg = solve_flags.config_for(kind, *solve_cmd);
      if (kind == ExampleKind::pde1 && cfg.h_list.empty()) cfg.h_list = {1.0 / 64};
      cfg.validate();
      if (cfg.N_list.size() != 1 || cfg.h_list.size() > 1)
        throw std::invalid_argument("solve takes a single N and at most one h");
      const auto problem =
          make_problem(cfg.example, cfg.alpha, cfg.h_list.empty() ? std::nullopt : std::optional(cfg.h_list[0]));
      const GradedMesh mesh(cfg.T, cfg.N_list[0], cfg.grading());
      std::optional<SoeKernel> kernel;
      if (cfg.mode == Mode::fast && mesh.intervals() >= 3)
        kernel = build_dg_kernel(mesh, cfg.alpha, cfg.eps.value_or(default_soe_eps(mesh, cfg.alpha)));
      const auto trace = solve(cfg.mode, problem.system, mesh, cfg.alpha, cfg.p, kernel);
      if (!cfg.out.empty()) write_trace_csv(trace, cfg.out);
      if (!samples_out.empty()) write_samples_csv(trace, samples_out);
      const double err = average_error(trace, problem.system);
      std::printf("example=%s alpha=%g p=%d r=%.6g N=%zu mode=%s", to_string(cfg.example).c_str(), cfg.alpha, cfg.p,
                  cfg.grading(), cfg.N_list[0], to_string(cfg.mode).c_str());
      if (!cfg.h_list.empty()) std::printf(" h=%g", cfg.h_list[0]);
      if (kernel) std::printf(" Q=%zu", kernel->size());
      std::printf(" error=%.6e\n", err);
      if (solve_flags.check) {
        bool ok = residual_gate(cfg.example, cfg.alpha, cfg.T);
        if (kernel && validate_soe(*kernel) > kernel->eps) ok = false;
        return ok ? 0 : kCheckFailed;
      }
      return 0;
    }
    if (*table_cmd) {
      std::vector<RunConfig> configs;
      const bool preset = table_name != "custom";
      if (preset) {
        configs = table_preset(table_name);
        for (auto& c : configs) {
          if (!table_flags.mode.empty()) c.mode = parse_mode(table_flags.mode);
          if (!table_flags.n_list.empty()) c.N_list = split_list<std::size_t>(table_flags.n_list);
          if (!table_flags.eps.empty()) c.eps = parse_eps(table_flags.eps);
        }
      } else {
        configs.push_back(table_flags.config_for(parse_example(example_name), *table_cmd));
      }
      for (const auto& c : configs)
        if (!residual_gate(c.example, c.alpha, c.T)) return kCheckFailed;
      const auto table = run_configs(configs);
      write_output(format_table(table, parse_format(table_flags.format)), table_flags.out);
      if (table_flags.check && preset) {
        const auto check = check_against_reference(table, reference_table(table_name));
        for (const auto& v : check.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
        std::fprintf(stderr, "compared %zu cells, worst error deviation %.3f, worst rate deviation %.3f\n",
                     check.compared, check.worst_error_rel, check.worst_rate_diff);
        if (table.Q > 0 && table.kernel_error > 1.0) {
          std::fprintf(stderr, "kernel certification exceeded (%.3f of eps)\n", table.kernel_error);
          return kCheckFailed;
        }
        return check.ok() ? 0 : kCheckFailed;
      }
      return 0;
    }
    if (*bench_cmd) {
      auto cfg = bench_flags.config_for(ExampleKind::ode1, *bench_cmd);
      cfg.validate();
      const auto report = bench_fast_vs_direct(cfg, repeats);
      write_output(format_bench(report, parse_format(bench_flags.format)), bench_flags.out);
      if (bench_flags.check) {
        bool ok = !report.rows.empty() && report.rows.back().ratio >= 3.0;
        for (std::size_t i = 1; i < report.rows.size(); ++i) ok = ok && report.rows[i].ratio > report.rows[i - 1].ratio;
        return ok ? 0 : kCheckFailed;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return 0;
}

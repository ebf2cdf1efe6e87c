#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fdg/harness.hpp"
#include "fdg/special.hpp"

using namespace fdg;
using std::numbers::pi;

namespace {

std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("example 1") {
  const auto pr = example1(0.5);
  CHECK(pr.exact(0.0, 0.0) == 1.0);
  CHECK(pr.system.initial[0] == 1.0);
  const double g = gamma_fn(1.5);
  CHECK(pr.forcing(0.0, 1.0) == doctest::Approx(1.0 + g + (1.0 + 1.0 / g) + 1.0).epsilon(1e-14));
  CHECK(caputo_residual(pr, 4.0) <= kResidualTolerance);
  for (double a : {0.2, 0.8}) CHECK(caputo_residual(example1(a), 4.0) <= kResidualTolerance);
  CHECK_THROWS_AS(example1(1.0), std::invalid_argument);
}

TEST_CASE("example 2") {
  const auto grid = build_grid(1.0 / 8);
  const auto pr = example2(0.5, grid);
  for (double t : {0.0, 0.3, 4.0}) {
    CHECK(std::abs(pr.exact(0.0, t)) <= 1e-15);
    CHECK(std::abs(pr.exact(1.0, t)) <= 1e-14);
  }
  CHECK(pr.exact(0.3, 0.0) == doctest::Approx(std::sin(2.0 * pi * 0.3)));
  const double g1 = gamma_fn(1.5), g2 = gamma_fn(2.0);
  const double k2 = 4.0 * pi * pi;
  CHECK(pr.forcing(0.25, 1.0) == doctest::Approx(k2 + g1 + (k2 + g2 / g1) + k2).epsilon(1e-13));
  for (double a : {0.2, 0.5, 0.8}) CHECK(caputo_residual(example2(a, grid), 4.0) <= kResidualTolerance);
  CHECK_THROWS_AS(make_problem(ExampleKind::pde1, 0.5, std::nullopt), std::invalid_argument);
}

TEST_CASE("the residual gate rejects a wrong forcing") {
  auto pr = example1(0.5);
  pr.forcing = [f = pr.forcing](double x, double t) { return f(x, t) * (1.0 + 1e-6); };
  CHECK(caputo_residual(pr, 4.0) > kResidualTolerance);
}

TEST_CASE("average error") {
  const auto pr = example1(0.5);
  const GradedMesh mesh(4.0, 8, 1.0);
  PolyTrace exact(mesh, 1, 1, {1.0});
  for (std::size_t n = 1; n <= 8; ++n) exact.append(std::vector<double>{0.0, pr.exact(0.0, mesh.t(n))});
  CHECK(average_error(exact, pr.system) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  SpatialSystem bare = pr.system;
  bare.error_norm = nullptr;
  CHECK_THROWS_AS(average_error(exact, bare), std::invalid_argument);
}

TEST_CASE("rates for exact power laws") {
  ErrorTable t;
  for (double s : {1.3, 2.0})
    for (std::size_t N : {32u, 64u, 128u, 256u}) t.rows.push_back({0.5, s, N, std::nullopt, 3.0 * std::pow(N, -s)});
  compute_rates(t);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i % 4 == 0) {
      CHECK_FALSE(t.rows[i].rate.has_value());
      continue;
    }
    REQUIRE(t.rows[i].rate.has_value());
    CHECK(std::abs(*t.rows[i].rate - t.rows[i].r) <= 1e-12);
  }
  ErrorTable h;
  h.sweep = "h";
  for (double w : {0.25, 0.125, 0.0625}) h.rows.push_back({0.5, 2.0, 100, w, w * w});
  compute_rates(h);
  CHECK(*h.rows[2].rate == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("run config json") {
  RunConfig c;
  c.example = ExampleKind::pde1;
  c.alpha = 0.3;
  c.sigma = 0.45;
  c.p = 2;
  c.r.reset();
  c.N_list = {16, 32};
  c.h_list = {0.125};
  c.mode = Mode::fast;
  c.eps = 1e-11;
  c.T = 2.0;
  c.seed = 99;
  c.out = "out.csv";
  const auto back = run_config_from_json(run_config_to_json(c));
  CHECK(back.example == c.example);
  CHECK(back.alpha == c.alpha);
  CHECK(back.sigma == c.sigma);
  CHECK(back.p == 2);
  CHECK_FALSE(back.r.has_value());
  CHECK(back.N_list == c.N_list);
  CHECK(back.h_list == c.h_list);
  CHECK(back.mode == Mode::fast);
  CHECK(back.eps == c.eps);
  CHECK(back.T == 2.0);
  CHECK(back.seed == 99);
  CHECK(back.out == "out.csv");
  CHECK(back.grading() == doctest::Approx(optimal_r(0.3, 0.45, 2)));

  const auto partial = run_config_from_json(R"({"alpha": 0.7, "r": 2.5, "eps": "auto"})");
  CHECK(partial.alpha == 0.7);
  CHECK(*partial.r == 2.5);
  CHECK_FALSE(partial.eps.has_value());
  CHECK_THROWS_AS(run_config_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"alpha": 1.5})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"r": "steep"})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"N_list": [64, 32]})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"example": "pde1"})"), std::invalid_argument);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), std::runtime_error);

  RunConfig low;
  low.alpha = 0.5;
  low.sigma = 5.0;
  CHECK(low.grading() == 1.0);
}

TEST_CASE("emit") {
  const auto dir = std::filesystem::temp_directory_path();
  ErrorTable empty;
  emit(empty, Format::csv, dir / "fdg_empty.csv");
  CHECK(slurp(dir / "fdg_empty.csv") == "alpha,r,N,h,error,rate,wall_time_ms\n");
  CHECK_THROWS_AS(emit(empty, Format::csv, "/nonexistent/dir/t.csv"), std::runtime_error);

  RunConfig c;
  c.N_list = {8, 16, 32};
  c.r = 2.0;
  const auto t = run_convergence(c);
  REQUIRE(t.rows.size() == 3);
  const auto back = table_from_json(format_table(t, Format::json));
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(back.rows[i].alpha == t.rows[i].alpha);
    CHECK(back.rows[i].r == t.rows[i].r);
    CHECK(back.rows[i].N == t.rows[i].N);
    CHECK(back.rows[i].h == t.rows[i].h);
    CHECK(back.rows[i].error == t.rows[i].error);
    CHECK(back.rows[i].rate == t.rows[i].rate);
  }
  CHECK(back.mode == t.mode);
  CHECK(back.p == t.p);
  CHECK_THROWS_AS(table_from_json("[]"), std::invalid_argument);
  CHECK(parse_format("md") == Format::markdown);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("markdown layout keyed by grading") {
  auto configs = table_preset("t1");
  for (auto& c : configs) c.N_list = {8, 16};
  const auto t = run_configs(configs);
  CHECK(t.rows.size() == 30);
  const auto md = format_table(t, Format::markdown);
  const auto header = md.substr(0, md.find('\n'));
  std::size_t pairs = 0;
  for (std::size_t pos = 0; (pos = header.find(" error |", pos)) != std::string::npos; ++pos) ++pairs;
  CHECK(pairs == 5);
  CHECK(header.find("r=1 error") != std::string::npos);
  CHECK(header.find("r=3.5 rate") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : md) lines += ch == '\n';
  CHECK(lines == 2 + 3 * 2);
}

TEST_CASE("reproducible csv apart from timings") {
  RunConfig c;
  c.alpha = 0.4;
  c.N_list = {16, 32};
  c.mode = Mode::fast;
  const auto a = format_table(run_convergence(c), Format::csv);
  const auto b = format_table(run_convergence(c), Format::csv);
  CHECK(strip_timing(a) == strip_timing(b));
}

TEST_CASE("convergence runs") {
  RunConfig c;
  c.N_list = {64};
  const auto one = run_convergence(c);
  REQUIRE(one.rows.size() == 1);
  CHECK_FALSE(one.rows[0].rate.has_value());

  RunConfig opt;
  opt.alpha = 0.5;
  opt.N_list = {64, 128, 256};
  const auto t = run_convergence(opt);
  CHECK(t.rows.back().r == doctest::Approx(7.0 / 3.0));
  CHECK(*t.rows.back().rate >= 2.0 - 0.1);

  RunConfig pde;
  pde.example = ExampleKind::pde1;
  pde.N_list = {256};
  pde.h_list = {1.0 / 4, 1.0 / 8, 1.0 / 16};
  const auto sp = run_convergence(pde);
  CHECK(sp.sweep == "h");
  CHECK(*sp.rows[2].rate == doctest::Approx(2.0).epsilon(0.1));

  RunConfig fast = opt;
  fast.mode = Mode::fast;
  const auto tf = run_convergence(fast);
  CHECK(tf.Q > 0);
  CHECK(tf.kernel_error <= 1.0);
  CHECK(tf.eps.has_value());
}

TEST_CASE("table presets and reference tables") {
  for (const char* name : {"t1", "t2", "t3", "t4"}) {
    const auto presets = table_preset(name);
    CHECK(presets.size() == 15);
    const auto ref = reference_table(name);
    CHECK_FALSE(ref.rows.empty());
  }
  CHECK(table_preset("t2").front().p == 2);
  CHECK(table_preset("t4").front().mode == Mode::fast);
  CHECK_THROWS_AS(table_preset("t9"), std::invalid_argument);
  CHECK_THROWS_AS(reference_table("t9"), std::invalid_argument);

  const auto ref = reference_table("t1");
  auto same = ref;
  const auto ok = check_against_reference(same, ref);
  CHECK(ok.ok());
  CHECK(ok.compared == ref.rows.size());
  for (auto& row : same.rows) row.error *= 1.2;
  const auto bad = check_against_reference(same, ref);
  CHECK_FALSE(bad.ok());
  CHECK(bad.worst_error_rel == doctest::Approx(0.2));
  CHECK_FALSE(check_against_reference(ErrorTable{}, ref).ok());
}

TEST_CASE("fast versus direct bench") {
  RunConfig c;
  c.N_list = {16, 64};
  c.r = 2.0;
  c.eps = 1e-12;
  const auto rep = bench_fast_vs_direct(c, 1);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.difference.weighted <= 1e-8);
    CHECK(row.direct_ms > 0.0);
    CHECK(row.Q > 0);
  }
  const auto csv = format_bench(rep, Format::csv);
  CHECK(csv.rfind("N,direct_ms,fast_ms,ratio,max_diff,weighted_diff,Q\n", 0) == 0);
  CHECK(format_bench(rep, Format::json).find("\"rows\"") != std::string::npos);
  CHECK_THROWS_AS(bench_fast_vs_direct(c, 0), std::invalid_argument);

  // the first two steps coincide exactly
  const auto pr = example1(0.5);
  const GradedMesh mesh(4.0, 16, 2.0);
  const auto d = solve(Mode::direct, pr.system, mesh, 0.5, 1);
  const auto f = solve(Mode::fast, pr.system, mesh, 0.5, 1, build_dg_kernel(mesh, 0.5, 1e-12));
  for (std::size_t n = 1; n <= 2; ++n) CHECK(d.left_limit(n)[0] - f.left_limit(n)[0] == 0.0);
}

TEST_CASE("parsers") {
  CHECK(parse_example("ode1") == ExampleKind::ode1);
  CHECK(to_string(ExampleKind::pde1) == "pde1");
  CHECK(parse_mode("fast") == Mode::fast);
  CHECK(to_string(Mode::direct) == "direct");
  CHECK_THROWS_AS(parse_example("pde3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mode("slow"), std::invalid_argument);
}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "fdg/harness.hpp"

namespace fdg {

using nlohmann::json;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string h_label(double h) {
  const double inv = 1.0 / h;
  const double k = std::round(inv);
  if (std::abs(inv - k) < 1e-9 * k) return "1/" + std::to_string(static_cast<long long>(k));
  return fmt("%.6g", h);
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

// --- RunConfig ----------------------------------------------------------------

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["example"] = to_string(c.example);
  j["alpha"] = c.alpha;
  j["sigma"] = opt_number(c.sigma);
  j["p"] = c.p;
  j["r"] = c.r ? json(*c.r) : json("optimal");
  j["N_list"] = c.N_list;
  j["h_list"] = c.h_list;
  j["mode"] = to_string(c.mode);
  j["eps"] = c.eps ? json(*c.eps) : json("auto");
  j["T"] = c.T;
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("run config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("run config: top level must be an object");
  RunConfig c;
  try {
    if (j.contains("example")) c.example = parse_example(j["example"].get<std::string>());
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    c.sigma = number_or_null(j, "sigma");
    if (j.contains("p")) c.p = j["p"].get<int>();
    if (j.contains("r")) {
      const auto& r = j["r"];
      if (r.is_string()) {
        const auto s = r.get<std::string>();
        if (s != "optimal" && s != "opt") throw std::invalid_argument("run config: r must be a number or \"optimal\"");
        c.r.reset();
      } else {
        c.r = r.get<double>();
      }
    }
    if (j.contains("N_list")) c.N_list = j["N_list"].get<std::vector<std::size_t>>();
    if (j.contains("h_list")) c.h_list = j["h_list"].get<std::vector<double>>();
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("eps")) {
      const auto& e = j["eps"];
      if (e.is_string()) {
        if (e.get<std::string>() != "auto") throw std::invalid_argument("run config: eps must be a number or \"auto\"");
        c.eps.reset();
      } else {
        c.eps = e.get<double>();
      }
    }
    if (j.contains("T")) c.T = j["T"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str());
}

// --- tables ------------------------------------------------------------------

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "markdown" || name == "md") return Format::markdown;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv, json or markdown)");
}

namespace {

std::string table_csv(const ErrorTable& t) {
  std::string s = "alpha,r,N,h,error,rate,wall_time_ms\n";
  for (const auto& row : t.rows) {
    s += fmt("%.6g", row.alpha) + "," + fmt("%.10g", row.r) + "," + std::to_string(row.N) + ",";
    if (row.h) s += fmt("%.10g", *row.h);
    s += "," + fmt("%.6e", row.error) + ",";
    if (row.rate) s += fmt("%.4f", *row.rate);
    s += "," + fmt("%.3f", row.wall_time_ms) + "\n";
  }
  return s;
}

json table_json(const ErrorTable& t) {
  json meta;
  meta["example"] = t.example;
  meta["mode"] = t.mode;
  meta["p"] = t.p;
  meta["eps"] = opt_number(t.eps);
  meta["Q"] = t.Q;
  meta["kernel_error"] = t.kernel_error;
  meta["sweep"] = t.sweep;
  meta["T"] = t.T;
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"alpha", row.alpha},
                    {"r", row.r},
                    {"N", row.N},
                    {"h", opt_number(row.h)},
                    {"error", row.error},
                    {"rate", opt_number(row.rate)},
                    {"wall_time_ms", row.wall_time_ms}});
  }
  return json{{"metadata", meta}, {"rows", rows}};
}

std::string table_markdown(const ErrorTable& t) {
  const bool by_h = t.sweep == "h";
  auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
  auto add_unique = [&](std::vector<double>& v, double x) {
    for (double y : v)
      if (same(x, y)) return;
    v.push_back(x);
  };
  std::vector<double> alphas;
  for (const auto& row : t.rows) add_unique(alphas, row.alpha);
  // column j holds the j-th distinct grading of each alpha block
  std::vector<std::vector<double>> grades(alphas.size());
  std::size_t ncol = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (const auto& row : t.rows)
      if (same(row.alpha, alphas[i])) add_unique(grades[i], row.r);
    ncol = std::max(ncol, grades[i].size());
  }
  std::string s = std::string("| alpha | ") + (by_h ? "h" : "N") + " |";
  std::string rule = "|---|---|";
  for (std::size_t j = 0; j < ncol; ++j) {
    std::string label;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (j >= grades[i].size()) continue;
      const std::string v = fmt("%.4g", grades[i][j]);
      if (label.empty())
        label = v;
      else if (label.find(v) == std::string::npos)
        label += "/" + v;
    }
    s += " r=" + label + " error | r=" + label + " rate |";
    rule += "---|---|";
  }
  s += "\n" + rule + "\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    std::vector<std::pair<std::size_t, std::optional<double>>> keys;
    for (const auto& row : t.rows) {
      if (!same(row.alpha, a)) continue;
      std::pair<std::size_t, std::optional<double>> k{row.N, row.h};
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    for (const auto& k : keys) {
      s += "| " + fmt("%.4g", a) + " | " + (by_h ? (k.second ? h_label(*k.second) : "-") : std::to_string(k.first)) + " |";
      for (std::size_t j = 0; j < ncol; ++j) {
        const ErrorRow* cell = nullptr;
        if (j < grades[i].size())
          for (const auto& row : t.rows)
            if (same(row.alpha, a) && same(row.r, grades[i][j]) && row.N == k.first && row.h == k.second) cell = &row;
        if (!cell) {
          s += "  |  |";
          continue;
        }
        s += " " + fmt("%.2e", cell->error) + " | " + (cell->rate ? fmt("%.2f", *cell->rate) : "-") + " |";
      }
      s += "\n";
    }
  }
  return s;
}

}  // namespace

std::string format_table(const ErrorTable& table, Format format) {
  switch (format) {
    case Format::csv: return table_csv(table);
    case Format::json: return table_json(table).dump(2) + "\n";
    case Format::markdown: return table_markdown(table);
  }
  throw std::invalid_argument("format_table: bad format");
}

ErrorTable table_from_json(const std::string& text) {
  ErrorTable t;
  try {
    const json j = json::parse(text);
    const auto& m = j.at("metadata");
    t.example = m.at("example").get<std::string>();
    t.mode = m.at("mode").get<std::string>();
    t.p = m.at("p").get<int>();
    t.eps = number_or_null(m, "eps");
    t.Q = m.at("Q").get<std::size_t>();
    t.kernel_error = m.at("kernel_error").get<double>();
    t.sweep = m.at("sweep").get<std::string>();
    t.T = m.at("T").get<double>();
    for (const auto& r : j.at("rows")) {
      ErrorRow row;
      row.alpha = r.at("alpha").get<double>();
      row.r = r.at("r").get<double>();
      row.N = r.at("N").get<std::size_t>();
      row.h = number_or_null(r, "h");
      row.error = r.at("error").get<double>();
      row.rate = number_or_null(r, "rate");
      row.wall_time_ms = r.at("wall_time_ms").get<double>();
      t.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("table_from_json: ") + e.what());
  }
  return t;
}

void emit(const ErrorTable& table, Format format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open " + path.string());
  out << format_table(table, format);
  if (!out) throw std::runtime_error("emit: write failed for " + path.string());
}

std::string format_bench(const BenchReport& report, Format format) {
  if (format == Format::json) {
    json rows = json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"N", r.N},
                      {"direct_ms", r.direct_ms},
                      {"fast_ms", r.fast_ms},
                      {"ratio", r.ratio},
                      {"max_diff", r.difference.max},
                      {"weighted_diff", r.difference.weighted},
                      {"Q", r.Q}});
    json j{{"alpha", report.alpha}, {"r", report.r}, {"p", report.p}, {"eps", opt_number(report.eps)}, {"rows", rows}};
    return j.dump(2) + "\n";
  }
  std::string s;
  if (format == Format::csv) {
    s = "N,direct_ms,fast_ms,ratio,max_diff,weighted_diff,Q\n";
    for (const auto& r : report.rows)
      s += std::to_string(r.N) + "," + fmt("%.3f", r.direct_ms) + "," + fmt("%.3f", r.fast_ms) + "," +
           fmt("%.3f", r.ratio) + "," + fmt("%.6e", r.difference.max) + "," + fmt("%.6e", r.difference.weighted) + "," +
           std::to_string(r.Q) + "\n";
    return s;
  }
  s = "| N | direct (ms) | fast (ms) | direct/fast | max diff | weighted diff | Q |\n|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows)
    s += "| " + std::to_string(r.N) + " | " + fmt("%.1f", r.direct_ms) + " | " + fmt("%.1f", r.fast_ms) + " | " +
         fmt("%.2f", r.ratio) + " | " + fmt("%.2e", r.difference.max) + " | " + fmt("%.2e", r.difference.weighted) +
         " | " + std::to_string(r.Q) + " |\n";
  return s;
}

}  // namespace fdg

#include "fdg/harness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdg {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

// [alpha][row][column] with alpha in {0.2, 0.5, 0.8} and five grading columns
struct RefData {
  double error[3][5][5];
  double rate[3][5][5];
};

const RefData kT1 = {
  {{{1.67e-02, 9.66e-03, 3.26e-03, 4.21e-04, 4.41e-04}, {9.67e-03, 4.97e-03, 1.32e-03, 1.18e-04, 1.24e-04}, {5.56e-03, 2.53e-03, 5.28e-04, 3.24e-05, 3.42e-05}, {3.18e-03, 1.28e-03, 2.08e-04, 8.80e-06, 9.29e-06}, {1.81e-03, 6.45e-04, 8.15e-05, 2.36e-06, 2.50e-06}},
   {{7.32e-03, 3.24e-03, 9.12e-04, 5.80e-04, 8.37e-04}, {3.03e-03, 1.11e-03, 2.46e-04, 1.52e-04, 2.21e-04}, {1.23e-03, 3.74e-04, 6.52e-05, 3.93e-05, 5.75e-05}, {4.88e-04, 1.23e-04, 1.70e-05, 1.01e-05, 1.48e-05}, {1.91e-04, 3.99e-05, 4.39e-06, 2.56e-06, 3.79e-06}},
   {{1.28e-03, 5.73e-04, 6.03e-04, 7.03e-04, 2.15e-03}, {4.32e-04, 1.57e-04, 1.54e-04, 1.79e-04, 5.47e-04}, {1.41e-04, 4.24e-05, 3.89e-05, 4.53e-05, 1.39e-04}, {4.51e-05, 1.13e-05, 9.79e-06, 1.14e-05, 3.50e-05}, {1.41e-05, 3.00e-06, 2.46e-06, 2.87e-06, 8.80e-06}}},
  {{{kNone, kNone, kNone, kNone, kNone}, {0.79, 0.96, 1.30, 1.84, 1.83}, {0.80, 0.97, 1.32, 1.86, 1.86}, {0.81, 0.98, 1.34, 1.88, 1.88}, {0.81, 0.99, 1.35, 1.90, 1.89}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.27, 1.54, 1.89, 1.93, 1.92}, {1.30, 1.57, 1.92, 1.95, 1.94}, {1.33, 1.60, 1.94, 1.96, 1.96}, {1.35, 1.63, 1.95, 1.97, 1.97}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.56, 1.87, 1.97, 1.97, 1.97}, {1.61, 1.89, 1.98, 1.98, 1.98}, {1.65, 1.90, 1.99, 1.99, 1.99}, {1.68, 1.92, 1.99, 1.99, 1.99}}}};

const RefData kT2 = {
  {{{6.98e-04, 4.11e-04, 2.01e-04, 2.75e-05, 2.81e-05}, {2.86e-04, 1.53e-04, 6.45e-05, 3.98e-06, 4.06e-06}, {1.15e-04, 5.61e-05, 2.03e-05, 5.54e-07, 5.63e-07}, {4.62e-05, 2.03e-05, 6.32e-06, 7.54e-08, 7.65e-08}, {1.83e-05, 7.29e-06, 1.94e-06, 1.01e-08, 1.02e-08}},
   {{2.33e-04, 1.16e-04, 4.31e-05, 5.81e-06, 6.13e-06}, {7.37e-05, 3.19e-05, 9.61e-06, 8.62e-07, 1.05e-06}, {2.23e-05, 8.39e-06, 2.03e-06, 1.21e-07, 1.66e-07}, {6.55e-06, 2.13e-06, 4.12e-07, 1.65e-08, 2.43e-08}, {1.87e-06, 5.27e-07, 8.16e-08, 2.19e-09, 3.38e-09}},
   {{4.04e-05, 1.72e-05, 4.86e-06, 1.76e-06, 6.77e-06}, {1.11e-05, 4.09e-06, 9.25e-07, 2.39e-07, 9.03e-07}, {2.91e-06, 9.28e-07, 1.69e-07, 3.15e-08, 1.17e-07}, {7.47e-07, 2.06e-07, 3.01e-08, 4.11e-09, 1.50e-08}, {1.89e-07, 4.53e-08, 5.34e-09, 5.33e-10, 1.89e-09}}},
  {{{kNone, kNone, kNone, kNone, kNone}, {1.29, 1.42, 1.64, 2.79, 2.79}, {1.31, 1.45, 1.67, 2.84, 2.85}, {1.32, 1.47, 1.69, 2.88, 2.88}, {1.34, 1.48, 1.70, 2.90, 2.90}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.66, 1.86, 2.17, 2.75, 2.54}, {1.72, 1.93, 2.24, 2.83, 2.66}, {1.77, 1.98, 2.30, 2.88, 2.77}, {1.81, 2.02, 2.34, 2.91, 2.85}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.87, 2.08, 2.39, 2.88, 2.91}, {1.93, 2.14, 2.46, 2.92, 2.95}, {1.96, 2.17, 2.48, 2.94, 2.97}, {1.98, 2.19, 2.50, 2.95, 2.98}}}};

const RefData kT3 = {
  {{{1.94e-01, 1.32e-01, 6.14e-02, 6.79e-03, 6.12e-03}, {1.14e-01, 7.00e-02, 2.65e-02, 1.54e-03, 1.39e-03}, {6.68e-02, 3.71e-02, 1.15e-02, 3.56e-04, 3.29e-04}, {3.93e-02, 1.97e-02, 4.97e-03, 8.37e-05, 7.98e-05}, {2.32e-02, 1.05e-02, 2.16e-03, 2.00e-05, 1.96e-05}},
   {{4.69e-02, 2.46e-02, 6.83e-03, 1.78e-03, 2.20e-03}, {2.12e-02, 9.47e-03, 1.90e-03, 4.40e-04, 5.66e-04}, {9.50e-03, 3.57e-03, 5.06e-04, 1.08e-04, 1.44e-04}, {4.20e-03, 1.30e-03, 1.30e-04, 2.69e-05, 3.62e-05}, {1.82e-03, 4.61e-04, 3.25e-05, 6.68e-06, 9.09e-06}},
   {{1.17e-02, 4.74e-03, 1.22e-03, 1.15e-03, 3.16e-03}, {3.76e-03, 1.15e-03, 2.60e-04, 2.81e-04, 8.44e-04}, {1.12e-03, 2.53e-04, 6.23e-05, 7.09e-05, 2.19e-04}, {3.16e-04, 5.15e-05, 1.57e-05, 1.79e-05, 5.59e-05}, {8.51e-05, 1.04e-05, 3.97e-06, 4.51e-06, 1.42e-05}}},
  {{{kNone, kNone, kNone, kNone, kNone}, {0.77, 0.92, 1.21, 2.14, 2.13}, {0.77, 0.92, 1.21, 2.11, 2.08}, {0.76, 0.91, 1.21, 2.09, 2.05}, {0.76, 0.91, 1.21, 2.06, 2.02}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.15, 1.38, 1.85, 2.02, 1.96}, {1.16, 1.41, 1.91, 2.02, 1.98}, {1.18, 1.45, 1.96, 2.01, 1.99}, {1.21, 1.50, 2.00, 2.01, 1.99}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.64, 2.04, 2.23, 2.03, 1.90}, {1.74, 2.19, 2.06, 1.99, 1.95}, {1.83, 2.30, 1.99, 1.99, 1.97}, {1.89, 2.31, 1.98, 1.99, 1.98}}}};

const RefData kT4 = {
  {{{4.04e-01, 4.04e-01, 4.04e-01, 4.04e-01, 4.04e-01}, {1.24e-01, 1.24e-01, 1.24e-01, 1.24e-01, 1.24e-01}, {3.26e-02, 3.26e-02, 3.26e-02, 3.26e-02, 3.26e-02}, {8.35e-03, 8.24e-03, 8.23e-03, 8.23e-03, 8.23e-03}, {2.48e-03, 2.09e-03, 2.06e-03, 2.06e-03, 2.06e-03}},
   {{3.41e-01, 3.41e-01, 3.41e-01, 3.41e-01, 3.41e-01}, {1.05e-01, 1.05e-01, 1.05e-01, 1.05e-01, 1.05e-01}, {2.73e-02, 2.73e-02, 2.73e-02, 2.73e-02, 2.73e-02}, {6.91e-03, 6.91e-03, 6.91e-03, 6.91e-03, 6.91e-03}, {1.73e-03, 1.73e-03, 1.73e-03, 1.73e-03, 1.73e-03}},
   {{2.87e-01, 2.87e-01, 2.87e-01, 2.87e-01, 2.87e-01}, {8.69e-02, 8.69e-02, 8.69e-02, 8.69e-02, 8.69e-02}, {2.27e-02, 2.27e-02, 2.27e-02, 2.27e-02, 2.27e-02}, {5.72e-03, 5.72e-03, 5.72e-03, 5.72e-03, 5.72e-03}, {1.43e-03, 1.43e-03, 1.43e-03, 1.43e-03, 1.43e-03}}},
  {{{kNone, kNone, kNone, kNone, kNone}, {1.70, 1.70, 1.70, 1.70, 1.70}, {1.93, 1.93, 1.93, 1.93, 1.93}, {1.97, 1.98, 1.98, 1.98, 1.98}, {1.75, 1.98, 2.00, 2.00, 2.00}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.71, 1.71, 1.71, 1.71, 1.71}, {1.93, 1.93, 1.93, 1.93, 1.93}, {1.98, 1.98, 1.98, 1.98, 1.98}, {2.00, 2.00, 2.00, 2.00, 2.00}},
   {{kNone, kNone, kNone, kNone, kNone}, {1.72, 1.72, 1.72, 1.72, 1.72}, {1.94, 1.94, 1.94, 1.94, 1.94}, {1.99, 1.99, 1.99, 1.99, 1.99}, {2.00, 2.00, 2.00, 2.00, 2.00}}}};

}  // namespace
ErrorTable reference_table(const std::string& name) {
  const RefData* data;
  if (name == "t1") data = &kT1;
  else if (name == "t2") data = &kT2;
  else if (name == "t3") data = &kT3;
  else if (name == "t4") data = &kT4;
  else throw std::invalid_argument("unknown reference table '" + name + "'");

  const auto configs = table_preset(name);
  ErrorTable t;
  t.example = to_string(configs.front().example);
  t.mode = to_string(configs.front().mode);
  t.p = configs.front().p;
  t.eps = configs.front().eps;
  t.sweep = name == "t4" ? "h" : "N";
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t c = 0; c < 5; ++c) {
      const auto& cfg = configs[a * 5 + c];
      for (std::size_t k = 0; k < 5; ++k) {
        ErrorRow row;
        row.alpha = cfg.alpha;
        row.r = cfg.grading();
        if (name == "t4") {
          row.N = cfg.N_list.front();
          row.h = cfg.h_list[k];
        } else {
          row.N = cfg.N_list[k];
          if (!cfg.h_list.empty()) row.h = cfg.h_list.front();
        }
        row.error = data->error[a][k][c];
        if (!std::isnan(data->rate[a][k][c])) row.rate = data->rate[a][k][c];
        t.rows.push_back(row);
      }
    }
  return t;
}

}  // namespace fdg

// Copyright 2026 The FAE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fae/toy.h"

#include <cmath>
#include <cstdio>

#include "fae/games.h"
#include "fae/models.h"
#include "fae/shapley.h"

namespace fae {

Dataset mover_dataset() {
  return Dataset(toy_schema(), {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
                 std::vector<double>{0.1, 0.0, 0.4, 0.5});
}

FeatureVector mover_input() { return {1.0, 1.0}; }

bool ToyCell::matches() const {
  const double half_ulp_of_print = 0.5 * std::pow(10.0, -decimals);
  return std::abs(computed - printed) <= half_ulp_of_print + 1e-12;
}

std::vector<ToyCell> compute_toy_table() {
  struct Printed {
    const char* formulation;
    const char* model;
    double phi[2];
    int decimals;
  };
  static constexpr Printed kPrinted[] = {
      {"SHAP", "f_male", {0.05, 0.05}, 2},       {"KernelSHAP", "f_male", {0.10, 0.00}, 2},
      {"QII", "f_male", {0.10, 0.00}, 2},        {"IME", "f_male", {0.50, 0.00}, 2},
      {"SHAP", "f_both", {0.028, 0.472}, 3},     {"KernelSHAP", "f_both", {0.050, 0.450}, 3},
      {"QII", "f_both", {0.075, 0.475}, 3},      {"IME", "f_both", {0.375, 0.375}, 3},
  };
  const Dataset data = mover_dataset();
  const FeatureVector x = mover_input();
  std::vector<ToyCell> cells;
  for (const auto& p : kPrinted) {
    const auto model = make_builtin_model(p.model);
    const std::string f = p.formulation;
    GamePtr game;
    if (f == "SHAP") {
      game = conditional_payoff(model, x, data);
    } else if (f == "KernelSHAP") {
      game = unified_payoff(model, x, ReferenceSource::empirical(data), ExactEnumeration{});
    } else if (f == "QII") {
      game = unified_payoff(model, x, ReferenceSource::joint_marginal(data), ExactEnumeration{});
    } else {
      game = unified_payoff(model, x, ReferenceSource::uniform_over(data), ExactEnumeration{});
    }
    const auto phi = exact_shapley(*game);
    for (int i = 0; i < 2; ++i) {
      cells.push_back({p.formulation, p.model, i, phi[i], p.phi[i], p.decimals});
    }
  }
  return cells;
}

std::string format_toy_table(const std::vector<ToyCell>& cells) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-12s %-12s %-12s %-12s\n", "formulation",
                "f_male:male", "f_male:lift", "f_both:male", "f_both:lift");
  out += line;
  auto rtrim = [](std::string s) {
    s.erase(s.find_last_not_of(' ') + 1);
    return s;
  };
  out = rtrim(out.substr(0, out.size() - 1)) + "\n";
  for (const char* f : {"SHAP", "KernelSHAP", "QII", "IME"}) {
    std::string row;
    std::snprintf(line, sizeof line, "%-12s", f);
    row += line;
    for (const char* m : {"f_male", "f_both"}) {
      for (int i = 0; i < 2; ++i) {
        for (const auto& c : cells) {
          if (c.formulation == f && c.model == m && c.feature == i) {
            std::snprintf(line, sizeof line, " %-12.*f%s", c.decimals, c.computed,
                          c.matches() ? "" : "!");
            row += line;
          }
        }
      }
    }
    out += rtrim(row) + "\n";
  }
  return out;
}

}  // namespace fae

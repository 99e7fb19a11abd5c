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

#ifndef FAE_TOY_H_
#define FAE_TOY_H_

#include <string>
#include <vector>

#include "fae/references.h"

namespace fae {

// The four-point mover-hiring distribution over (male, lift) with
// probabilities 0.1, 0.0, 0.4, 0.5 for (0,0), (0,1), (1,0), (1,1).
Dataset mover_dataset();

// The explained input (male = 1, lift = 1).
FeatureVector mover_input();

// One cell of the published comparison table: a game formulation, a toy
// model and a feature, with the value as printed.
struct ToyCell {
  std::string formulation;  // SHAP, KernelSHAP, QII, IME
  std::string model;        // f_male, f_both
  int feature = 0;
  double computed = 0.0;
  double printed = 0.0;
  int decimals = 2;

  bool matches() const;
};

// All 16 cells computed by exact Shapley: conditional game (SHAP),
// empirical (KernelSHAP), joint-marginal (QII) and uniform (IME) unified
// games.
std::vector<ToyCell> compute_toy_table();

std::string format_toy_table(const std::vector<ToyCell>& cells);

}  // namespace fae

#endif  // FAE_TOY_H_

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

#ifndef FAE_GAMES_H_
#define FAE_GAMES_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fae/core.h"
#include "fae/models.h"
#include "fae/references.h"

namespace fae {

// A cooperative game v: 2^M -> R with v(empty) = 0. Instances are immutable
// apart from an internal memo table, which is guarded so concurrent value()
// calls are safe and return the same results as sequential ones.
class Game {
 public:
  virtual ~Game() = default;

  int arity() const { return arity_; }

  // Memoized payoff. value(empty) is exactly 0.
  double value(Coalition s) const;

  // Payoff without touching the memo table.
  double evaluate(Coalition s) const;

  // The reference-side prediction phi_0 that makes attributions additive;
  // zero for abstract games.
  virtual double baseline() const { return 0.0; }

  std::size_t memo_size() const;

 protected:
  explicit Game(int arity);

  // Called only for non-empty coalitions within the grand coalition.
  virtual double compute(Coalition s) const = 0;

 private:
  int arity_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, double> memo_;
};

using GamePtr = std::shared_ptr<const Game>;

// Game given by an explicit table indexed by coalition mask.
class TabularGame final : public Game {
 public:
  // `payoffs` has 2^M entries and payoffs[0] == 0.
  TabularGame(int arity, std::vector<double> payoffs);

  const std::vector<double>& payoffs() const { return payoffs_; }

 protected:
  double compute(Coalition s) const override { return payoffs_[s.mask()]; }

 private:
  std::vector<double> payoffs_;
};

// alpha * u + beta * w.
class LinearCombinationGame final : public Game {
 public:
  LinearCombinationGame(double alpha, GamePtr u, double beta, GamePtr w);

  double baseline() const override;

 protected:
  double compute(Coalition s) const override;

 private:
  double alpha_;
  GamePtr u_;
  double beta_;
  GamePtr w_;
};

// v(S) = f(z(x, r, S)) - f(r).
class SingleReferenceGame final : public Game {
 public:
  SingleReferenceGame(ModelHandle model, FeatureVector x, FeatureVector r);

  double baseline() const override { return f_reference_; }
  double prediction() const { return f_input_; }
  const FeatureVector& reference() const { return r_; }

 protected:
  double compute(Coalition s) const override;

 private:
  ModelHandle model_;
  FeatureVector x_;
  FeatureVector r_;
  double f_input_;
  double f_reference_;
};

// v(S) = sum_j w_j [f(z(x, r_j, S)) - f(r_j)] over a frozen weighted
// reference sample.
class UnifiedGame final : public Game {
 public:
  UnifiedGame(ModelHandle model, FeatureVector x, std::vector<WeightedReference> refs);

  double baseline() const override { return baseline_; }
  double prediction() const { return f_input_; }
  const std::vector<WeightedReference>& references() const { return refs_; }

 protected:
  double compute(Coalition s) const override;

 private:
  ModelHandle model_;
  FeatureVector x_;
  std::vector<WeightedReference> refs_;
  std::vector<double> f_refs_;
  double baseline_ = 0.0;
  double f_input_ = 0.0;
};

// v(S) = E[f(z(x, R, S)) | R_S = x_S] - E[f(R)] with R drawn from the rows
// of a discrete dataset; conditioning is by exact match.
class ConditionalGame final : public Game {
 public:
  ConditionalGame(ModelHandle model, FeatureVector x, const Dataset& data);

  double baseline() const override { return baseline_; }
  double prediction() const { return f_input_; }

 protected:
  double compute(Coalition s) const override;

 private:
  ModelHandle model_;
  FeatureVector x_;
  std::vector<FeatureVector> rows_;
  std::vector<double> weights_;
  std::vector<double> f_rows_;
  double baseline_ = 0.0;
  double f_input_ = 0.0;
};

GamePtr single_reference_payoff(ModelHandle model, FeatureVector x, FeatureVector r);

struct ExactEnumeration {};
struct SampledReferences {
  std::size_t n = 0;
  std::uint64_t seed = 0;
};
using UnifiedMode = std::variant<ExactEnumeration, SampledReferences>;

// Exact mode enumerates the source; sampled mode draws n references once at
// construction (weight 1/n each) and reuses them for every coalition.
GamePtr unified_payoff(ModelHandle model, FeatureVector x, const ReferenceSource& src,
                       UnifiedMode mode);

// Requires an all-discrete schema. Coalitions whose conditioning subset has
// no positive-weight rows raise kConditioningSupport when evaluated.
GamePtr conditional_payoff(ModelHandle model, FeatureVector x, const Dataset& data);

}  // namespace fae

#endif  // FAE_GAMES_H_

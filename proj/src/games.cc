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

#include "fae/games.h"

#include <cmath>

#include "fae/error.h"

namespace fae {

Game::Game(int arity) : arity_(arity) {
  if (arity < 1 || arity > FeatureSchema::kMaxFeatures) {
    throw Error(ErrorKind::kSize, "game arity must be in [1, 64]");
  }
}

double Game::value(Coalition s) const {
  if (s.empty()) return 0.0;
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(s.mask()); it != memo_.end()) return it->second;
  }
  const double v = evaluate(s);
  std::lock_guard lock(mu_);
  memo_.emplace(s.mask(), v);
  return v;
}

double Game::evaluate(Coalition s) const {
  if (s.empty()) return 0.0;
  if ((s.mask() & ~Coalition::grand(arity_).mask()) != 0) {
    throw Error(ErrorKind::kRange, "coalition " + s.to_string() + " exceeds " +
                                       std::to_string(arity_) + " players");
  }
  return compute(s);
}

std::size_t Game::memo_size() const {
  std::lock_guard lock(mu_);
  return memo_.size();
}

TabularGame::TabularGame(int arity, std::vector<double> payoffs)
    : Game(arity), payoffs_(std::move(payoffs)) {
  if (arity > 30) throw Error(ErrorKind::kSize, "tabular games support at most 30 players");
  if (payoffs_.size() != (std::size_t{1} << arity)) {
    throw Error(ErrorKind::kSchema, "tabular game needs 2^M payoffs");
  }
  if (payoffs_[0] != 0.0) throw Error(ErrorKind::kRange, "tabular game needs v(empty) = 0");
}

LinearCombinationGame::LinearCombinationGame(double alpha, GamePtr u, double beta, GamePtr w)
    : Game(u->arity()), alpha_(alpha), u_(std::move(u)), beta_(beta), w_(std::move(w)) {
  if (w_->arity() != arity()) throw Error(ErrorKind::kSchema, "combined games differ in arity");
}

double LinearCombinationGame::baseline() const {
  return alpha_ * u_->baseline() + beta_ * w_->baseline();
}

double LinearCombinationGame::compute(Coalition s) const {
  return alpha_ * u_->value(s) + beta_ * w_->value(s);
}

SingleReferenceGame::SingleReferenceGame(ModelHandle model, FeatureVector x, FeatureVector r)
    : Game(model->schema().size()), model_(std::move(model)), x_(std::move(x)), r_(std::move(r)) {
  if (x_.size() != r_.size()) {
    throw Error(ErrorKind::kSchema, "input and reference differ in length");
  }
  const std::vector<FeatureVector> batch{x_, r_};
  const auto f = model_->predict(batch);
  f_input_ = f[0];
  f_reference_ = f[1];
}

double SingleReferenceGame::compute(Coalition s) const {
  return model_->predict_one(composite_input(x_, r_, s)) - f_reference_;
}

UnifiedGame::UnifiedGame(ModelHandle model, FeatureVector x, std::vector<WeightedReference> refs)
    : Game(model->schema().size()), model_(std::move(model)), x_(std::move(x)), refs_(std::move(refs)) {
  if (refs_.empty()) throw Error(ErrorKind::kEmptySource, "unified game needs references");
  model_->schema().check(x_);
  std::vector<FeatureVector> points;
  points.reserve(refs_.size());
  for (const auto& ref : refs_) points.push_back(ref.point);
  f_refs_ = model_->predict(points);
  for (std::size_t j = 0; j < refs_.size(); ++j) baseline_ += refs_[j].probability * f_refs_[j];
  f_input_ = model_->predict_one(x_);
}

double UnifiedGame::compute(Coalition s) const {
  std::vector<FeatureVector> batch(refs_.size(), FeatureVector(x_.size()));
  for (std::size_t j = 0; j < refs_.size(); ++j) {
    composite_input_into(x_, refs_[j].point, s, batch[j]);
  }
  const auto f = model_->predict(batch);
  double v = 0.0;
  for (std::size_t j = 0; j < refs_.size(); ++j) {
    v += refs_[j].probability * (f[j] - f_refs_[j]);
  }
  return v;
}

ConditionalGame::ConditionalGame(ModelHandle model, FeatureVector x, const Dataset& data)
    : Game(model->schema().size()), model_(std::move(model)), x_(std::move(x)) {
  if (!data.schema().all_discrete()) {
    throw Error(ErrorKind::kConfig,
                "the conditional game requires every feature to be discrete");
  }
  if (data.schema().size() != arity()) {
    throw Error(ErrorKind::kSchema, "dataset and model differ in feature count");
  }
  model_->schema().check(x_);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weight(i) > 0.0) {
      rows_.push_back(data.row(i));
      weights_.push_back(data.weight(i));
    }
  }
  if (rows_.empty()) throw Error(ErrorKind::kEmptySource, "conditional game over an empty dataset");
  f_rows_ = model_->predict(rows_);
  for (std::size_t j = 0; j < rows_.size(); ++j) baseline_ += weights_[j] * f_rows_[j];
  f_input_ = model_->predict_one(x_);
}

double ConditionalGame::compute(Coalition s) const {
  std::vector<FeatureVector> batch;
  std::vector<double> w;
  double total = 0.0;
  const auto members = s.members();
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    bool match = true;
    for (int i : members) {
      if (rows_[j][i] != x_[i]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    batch.push_back(composite_input(x_, rows_[j], s));
    w.push_back(weights_[j]);
    total += weights_[j];
  }
  if (batch.empty()) {
    throw Error(ErrorKind::kConditioningSupport,
                "no reference rows match the input on coalition " + s.to_string());
  }
  const auto f = model_->predict(batch);
  double conditional = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) conditional += w[j] * f[j];
  return conditional / total - baseline_;
}

GamePtr single_reference_payoff(ModelHandle model, FeatureVector x, FeatureVector r) {
  return std::make_shared<SingleReferenceGame>(std::move(model), std::move(x), std::move(r));
}

GamePtr unified_payoff(ModelHandle model, FeatureVector x, const ReferenceSource& src,
                       UnifiedMode mode) {
  if (src.arity() != model->schema().size()) {
    throw Error(ErrorKind::kSchema, "reference source and model differ in feature count");
  }
  std::vector<WeightedReference> refs;
  if (std::holds_alternative<ExactEnumeration>(mode)) {
    if (!src.is_finite()) {
      throw Error(ErrorKind::kNotEnumerable,
                  "exact unified game needs an enumerable reference source");
    }
    refs = enumerate_weighted(src);
  } else {
    const auto& sampled = std::get<SampledReferences>(mode);
    const double w = 1.0 / static_cast<double>(sampled.n);
    for (auto& r : sample_references(src, sampled.n, sampled.seed)) {
      refs.push_back({std::move(r), w});
    }
  }
  return std::make_shared<UnifiedGame>(std::move(model), std::move(x), std::move(refs));
}

GamePtr conditional_payoff(ModelHandle model, FeatureVector x, const Dataset& data) {
  return std::make_shared<ConditionalGame>(std::move(model), std::move(x), data);
}

}  // namespace fae

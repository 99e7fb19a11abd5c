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

#ifndef FAE_MODELS_H_
#define FAE_MODELS_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fae/core.h"

namespace fae {

// A black-box scoring function f: X -> R over a fixed schema.
// Implementations must be deterministic and safe for concurrent predict
// calls.
class Model {
 public:
  virtual ~Model() = default;

  const FeatureSchema& schema() const { return schema_; }

  // Validates every input against the schema and every output for
  // finiteness. Output order matches input order.
  std::vector<double> predict(std::span<const FeatureVector> batch) const;
  double predict_one(std::span<const double> x) const;

  virtual std::string describe() const = 0;

 protected:
  explicit Model(FeatureSchema schema) : schema_(std::move(schema)) {}

  // Inputs are already validated; `out` has one slot per row.
  virtual void predict_rows(std::span<const FeatureVector> batch,
                            std::span<double> out) const = 0;

 private:
  FeatureSchema schema_;
};

using ModelHandle = std::shared_ptr<const Model>;

// Wraps a plain function. Used for builtins and tests.
ModelHandle make_function_model(FeatureSchema schema,
                                std::function<double(std::span<const double>)> fn,
                                std::string description);

// The two mover-hiring toy models over (male, lift):
//   f_male(x) = x_male,  f_both(x) = x_male AND x_lift.
ModelHandle make_builtin_model(std::string_view name);
bool is_builtin_model(std::string_view name);
FeatureSchema toy_schema();

struct LinearSpec {
  std::vector<double> weights;
  double bias = 0.0;
  bool logistic = false;
};

// f(x) = b + w.x, optionally passed through the logistic function.
ModelHandle make_linear_model(FeatureSchema schema, LinearSpec spec);

// Binary tree node: internal when `feature >= 0`, otherwise a leaf.
// Traversal goes left iff x[feature] < threshold.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

// Node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;
};

enum class PostTransform { kIdentity, kLogistic };

struct TreeEnsembleSpec {
  std::vector<Tree> trees;
  PostTransform post_transform = PostTransform::kIdentity;
};

// Throws kParse naming the offending tree/node when a tree is not a
// well-formed binary tree over `num_features` inputs.
void validate_tree_ensemble(const TreeEnsembleSpec& spec, int num_features);

ModelHandle make_tree_ensemble(FeatureSchema schema, TreeEnsembleSpec spec);

// Parses a model specification: either a builtin name or a JSON document
// ({"type": "builtin" | "linear" | "tree_ensemble", ...}). When `schema` is
// given the model is bound to it; otherwise the document's feature names
// (or x0..x{M-1}) are used.
ModelHandle parse_model_spec(std::string_view text,
                             const std::optional<FeatureSchema>& schema = std::nullopt,
                             std::string_view origin = "<model>");

// Reads `path_or_builtin` as a builtin name or a JSON model file.
ModelHandle load_model(const std::string& path_or_builtin,
                       const std::optional<FeatureSchema>& schema = std::nullopt);

struct ExternalOptions {
  std::chrono::milliseconds timeout{30000};
};

// Starts `command` via /bin/sh and speaks newline-delimited JSON on its
// stdin/stdout:
//   request  {"id": <int>, "inputs": [[f64, ...], ...]}
//   response {"id": <int>, "outputs": [f64, ...]}
// Concurrent callers are serialized. The child is shut down when the last
// handle is released.
ModelHandle load_external(const std::string& command, FeatureSchema schema,
                          ExternalOptions options = {});

}  // namespace fae

#endif  // FAE_MODELS_H_

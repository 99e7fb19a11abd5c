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

#include "fae/models.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fae/error.h"

namespace fae {

using json = nlohmann::json;

std::vector<double> Model::predict(std::span<const FeatureVector> batch) const {
  for (const auto& x : batch) schema_.check(x);
  std::vector<double> out(batch.size());
  predict_rows(batch, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      throw Error(ErrorKind::kModel, describe() + " produced a non-finite prediction");
    }
  }
  return out;
}

double Model::predict_one(std::span<const double> x) const {
  const FeatureVector row(x.begin(), x.end());
  return predict(std::span<const FeatureVector>(&row, 1)).front();
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

class FunctionModel final : public Model {
 public:
  FunctionModel(FeatureSchema schema, std::function<double(std::span<const double>)> fn,
                std::string description)
      : Model(std::move(schema)), fn_(std::move(fn)), description_(std::move(description)) {}

  std::string describe() const override { return description_; }

 protected:
  void predict_rows(std::span<const FeatureVector> batch,
                    std::span<double> out) const override {
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = fn_(batch[i]);
  }

 private:
  std::function<double(std::span<const double>)> fn_;
  std::string description_;
};

class LinearModel final : public Model {
 public:
  LinearModel(FeatureSchema schema, LinearSpec spec)
      : Model(std::move(schema)), spec_(std::move(spec)) {
    if (static_cast<int>(spec_.weights.size()) != this->schema().size()) {
      throw Error(ErrorKind::kSchema, "linear model has " +
                                          std::to_string(spec_.weights.size()) +
                                          " weights for " +
                                          std::to_string(this->schema().size()) +
                                          " features");
    }
    for (double w : spec_.weights) {
      if (!std::isfinite(w)) throw Error(ErrorKind::kParse, "linear model: non-finite weight");
    }
    if (!std::isfinite(spec_.bias)) throw Error(ErrorKind::kParse, "linear model: non-finite bias");
  }

  std::string describe() const override {
    return spec_.logistic ? "linear(logistic)" : "linear";
  }

 protected:
  void predict_rows(std::span<const FeatureVector> batch,
                    std::span<double> out) const override {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      double z = spec_.bias;
      for (std::size_t f = 0; f < spec_.weights.size(); ++f) z += spec_.weights[f] * batch[i][f];
      out[i] = spec_.logistic ? logistic(z) : z;
    }
  }

 private:
  LinearSpec spec_;
};

class TreeEnsembleModel final : public Model {
 public:
  TreeEnsembleModel(FeatureSchema schema, TreeEnsembleSpec spec)
      : Model(std::move(schema)), spec_(std::move(spec)) {
    validate_tree_ensemble(spec_, this->schema().size());
  }

  std::string describe() const override {
    return "tree_ensemble(" + std::to_string(spec_.trees.size()) + " trees)";
  }

 protected:
  void predict_rows(std::span<const FeatureVector> batch,
                    std::span<double> out) const override {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& x = batch[i];
      double sum = 0.0;
      for (const auto& tree : spec_.trees) {
        int node = 0;
        while (!tree.nodes[node].is_leaf()) {
          const auto& n = tree.nodes[node];
          node = x[n.feature] < n.threshold ? n.left : n.right;
        }
        sum += tree.nodes[node].value;
      }
      out[i] = spec_.post_transform == PostTransform::kLogistic ? logistic(sum) : sum;
    }
  }

 private:
  TreeEnsembleSpec spec_;
};

std::string line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void field_error(std::string_view origin, const std::string& field,
                              const std::string& what) {
  throw Error(ErrorKind::kParse, std::string(origin) + ": " + field + ": " + what);
}

template <typename T>
T get_field(const json& obj, const char* key, std::string_view origin,
            const std::string& path) {
  if (!obj.contains(key)) field_error(origin, path + "." + key, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    field_error(origin, path + "." + key, "wrong type");
  }
}

std::optional<std::vector<std::string>> names_of(const json& doc, std::string_view origin) {
  if (!doc.contains("feature_names")) return std::nullopt;
  return get_field<std::vector<std::string>>(doc, "feature_names", origin, "$");
}

FeatureSchema bind_schema(const std::optional<FeatureSchema>& given,
                          const std::optional<std::vector<std::string>>& names, int m,
                          std::string_view origin) {
  if (given) {
    if (given->size() != m) {
      throw Error(ErrorKind::kSchema, std::string(origin) + ": model expects " +
                                          std::to_string(m) + " features, data has " +
                                          std::to_string(given->size()));
    }
    if (names && *names != given->names()) {
      throw Error(ErrorKind::kSchema,
                  std::string(origin) + ": model feature names do not match the data header");
    }
    return *given;
  }
  if (names) {
    if (static_cast<int>(names->size()) != m) {
      field_error(origin, "$.feature_names", "length does not match the model");
    }
    return FeatureSchema(*names, std::vector<FeatureKind>(m, FeatureKind::kContinuous));
  }
  return FeatureSchema::with_default_names(m);
}

TreeEnsembleSpec parse_trees(const json& doc, std::string_view origin) {
  TreeEnsembleSpec spec;
  const auto post = doc.value("post_transform", std::string("identity"));
  if (post == "identity") {
    spec.post_transform = PostTransform::kIdentity;
  } else if (post == "logistic") {
    spec.post_transform = PostTransform::kLogistic;
  } else {
    field_error(origin, "$.post_transform", "expected identity or logistic");
  }
  if (!doc.contains("trees") || !doc["trees"].is_array()) {
    field_error(origin, "$.trees", "missing or not an array");
  }
  for (std::size_t t = 0; t < doc["trees"].size(); ++t) {
    const auto& jt = doc["trees"][t];
    const std::string tpath = "$.trees[" + std::to_string(t) + "]";
    if (!jt.contains("nodes") || !jt["nodes"].is_array()) {
      field_error(origin, tpath + ".nodes", "missing or not an array");
    }
    Tree tree;
    for (std::size_t n = 0; n < jt["nodes"].size(); ++n) {
      const auto& jn = jt["nodes"][n];
      const std::string npath = tpath + ".nodes[" + std::to_string(n) + "]";
      if (!jn.is_object()) field_error(origin, npath, "not an object");
      TreeNode node;
      if (jn.contains("leaf")) {
        node.value = get_field<double>(jn, "leaf", origin, npath);
      } else {
        node.feature = get_field<int>(jn, "feature", origin, npath);
        node.threshold = get_field<double>(jn, "threshold", origin, npath);
        node.left = get_field<int>(jn, "left", origin, npath);
        node.right = get_field<int>(jn, "right", origin, npath);
        if (node.feature < 0) field_error(origin, npath + ".feature", "negative index");
      }
      tree.nodes.push_back(node);
    }
    spec.trees.push_back(std::move(tree));
  }
  return spec;
}

}  // namespace

ModelHandle make_function_model(FeatureSchema schema,
                                std::function<double(std::span<const double>)> fn,
                                std::string description) {
  return std::make_shared<FunctionModel>(std::move(schema), std::move(fn),
                                         std::move(description));
}

FeatureSchema toy_schema() {
  return FeatureSchema({"male", "lift"}, {FeatureKind::kDiscrete, FeatureKind::kDiscrete});
}

bool is_builtin_model(std::string_view name) { return name == "f_male" || name == "f_both"; }

ModelHandle make_builtin_model(std::string_view name) {
  if (name == "f_male") {
    return make_function_model(
        toy_schema(), [](std::span<const double> x) { return x[0]; }, "f_male");
  }
  if (name == "f_both") {
    return make_function_model(
        toy_schema(),
        [](std::span<const double> x) { return (x[0] != 0.0 && x[1] != 0.0) ? 1.0 : 0.0; },
        "f_both");
  }
  throw Error(ErrorKind::kConfig, "unknown builtin model '" + std::string(name) +
                                      "' (expected f_male or f_both)");
}

ModelHandle make_linear_model(FeatureSchema schema, LinearSpec spec) {
  return std::make_shared<LinearModel>(std::move(schema), std::move(spec));
}

void validate_tree_ensemble(const TreeEnsembleSpec& spec, int num_features) {
  for (std::size_t t = 0; t < spec.trees.size(); ++t) {
    const auto& nodes = spec.trees[t].nodes;
    const std::string where = "tree " + std::to_string(t);
    if (nodes.empty()) throw Error(ErrorKind::kParse, where + ": no nodes");
    const int n = static_cast<int>(nodes.size());
    std::vector<int> parents(n, 0);
    for (int i = 0; i < n; ++i) {
      const auto& node = nodes[i];
      const std::string at = where + " node " + std::to_string(i);
      if (node.is_leaf()) {
        if (!std::isfinite(node.value)) throw Error(ErrorKind::kParse, at + ": non-finite leaf");
        continue;
      }
      if (node.feature >= num_features) {
        throw Error(ErrorKind::kParse, at + ": feature index " +
                                           std::to_string(node.feature) + " >= " +
                                           std::to_string(num_features));
      }
      if (!std::isfinite(node.threshold)) {
        throw Error(ErrorKind::kParse, at + ": non-finite threshold");
      }
      for (int child : {node.left, node.right}) {
        if (child <= 0 || child >= n) {
          throw Error(ErrorKind::kParse, at + ": child index " + std::to_string(child) +
                                             " out of range");
        }
        ++parents[child];
      }
    }
    // Every non-root node needs exactly one parent and must be reachable.
    for (int i = 1; i < n; ++i) {
      if (parents[i] != 1) {
        throw Error(ErrorKind::kParse, where + " node " + std::to_string(i) + " has " +
                                           std::to_string(parents[i]) + " parents");
      }
    }
    std::vector<int> stack{0};
    int visited = 0;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      if (++visited > n) throw Error(ErrorKind::kParse, where + ": cycle");
      if (!nodes[i].is_leaf()) {
        stack.push_back(nodes[i].left);
        stack.push_back(nodes[i].right);
      }
    }
    if (visited != n) throw Error(ErrorKind::kParse, where + ": unreachable nodes");
  }
}

ModelHandle make_tree_ensemble(FeatureSchema schema, TreeEnsembleSpec spec) {
  return std::make_shared<TreeEnsembleModel>(std::move(schema), std::move(spec));
}

ModelHandle parse_model_spec(std::string_view text, const std::optional<FeatureSchema>& schema,
                             std::string_view origin) {
  std::string trimmed(text);
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
  if (is_builtin_model(trimmed)) text = trimmed;
  if (is_builtin_model(text)) {
    auto model = make_builtin_model(text);
    if (schema && schema->size() != 2) {
      throw Error(ErrorKind::kSchema, "builtin " + std::string(text) +
                                          " needs 2 features, data has " +
                                          std::to_string(schema->size()));
    }
    return model;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string(origin) + ":" + line_of(text, e.byte) +
                                       ": invalid JSON");
  }
  if (!doc.is_object()) field_error(origin, "$", "expected an object");
  const auto type = get_field<std::string>(doc, "type", origin, "$");
  if (type == "builtin") {
    return parse_model_spec(get_field<std::string>(doc, "name", origin, "$"), schema, origin);
  }
  if (type == "linear") {
    LinearSpec spec;
    spec.weights = get_field<std::vector<double>>(doc, "weights", origin, "$");
    if (doc.contains("bias")) spec.bias = get_field<double>(doc, "bias", origin, "$");
    if (doc.contains("logistic")) spec.logistic = get_field<bool>(doc, "logistic", origin, "$");
    if (spec.weights.empty()) field_error(origin, "$.weights", "empty");
    auto bound = bind_schema(schema, names_of(doc, origin),
                             static_cast<int>(spec.weights.size()), origin);
    return make_linear_model(std::move(bound), std::move(spec));
  }
  if (type == "tree_ensemble") {
    auto spec = parse_trees(doc, origin);
    auto names = names_of(doc, origin);
    int m = 0;
    if (doc.contains("num_features")) {
      m = get_field<int>(doc, "num_features", origin, "$");
    } else if (names) {
      m = static_cast<int>(names->size());
    } else if (schema) {
      m = schema->size();
    } else {
      for (const auto& t : spec.trees) {
        for (const auto& n : t.nodes) m = std::max(m, n.feature + 1);
      }
    }
    if (m < 1) field_error(origin, "$.num_features", "must be >= 1");
    try {
      validate_tree_ensemble(spec, m);
    } catch (const Error& e) {
      throw Error(ErrorKind::kParse, std::string(origin) + ": " + e.what());
    }
    return make_tree_ensemble(bind_schema(schema, names, m, origin), std::move(spec));
  }
  field_error(origin, "$.type", "unknown model type '" + type + "'");
}

ModelHandle load_model(const std::string& path_or_builtin,
                       const std::optional<FeatureSchema>& schema) {
  if (is_builtin_model(path_or_builtin)) return parse_model_spec(path_or_builtin, schema);
  std::ifstream in(path_or_builtin);
  if (!in) {
    throw Error(ErrorKind::kConfig, "cannot open model file '" + path_or_builtin + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_spec(buf.str(), schema, path_or_builtin);
}

}  // namespace fae

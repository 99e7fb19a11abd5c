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

#ifndef FAE_CLI_H_
#define FAE_CLI_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fae/models.h"
#include "fae/references.h"

namespace fae::cli {

// Settings of the `explain` command; field names mirror the kebab-case
// flags.
struct ExplainConfig {
  std::string model;          // builtin name or model JSON path
  std::string model_command;  // external model; exclusive with `model`
  std::string data;           // CSV path
  std::optional<std::size_t> row;
  std::optional<std::string> input;  // "1,0.5"
  std::string game = "unified";      // single-ref | unified | conditional
  std::string reference = "empirical";
  std::vector<std::string> filters;  // extra conjunctive filter expressions
  std::string estimator = "exact";
  std::optional<std::size_t> n_references;  // absent: enumerate the source
  double confidence = 0.95;
  std::vector<std::string> summaries = {"mean", "quantiles"};
  std::optional<std::uint64_t> seed;
  bool emit_rows = false;
  bool assume_unbiased = false;
  std::string output;     // empty: stdout
  std::string plot_data;  // CSV path for per-reference attributions
  int threads = 1;
  int external_timeout_ms = 30000;
};

struct AuditConfig {
  std::string model;
  std::string model_command;
  std::string data;
  std::optional<std::size_t> row;
  std::optional<std::string> input;
  std::string game = "unified";
  std::string reference = "uniform";
  std::vector<std::string> filters;
  std::optional<std::size_t> n_references;
  std::optional<std::uint64_t> seed;
  std::string output;
  int external_timeout_ms = 30000;
};

// Report JSON for `explain`. Throws fae::Error on any failure.
std::string run_explain(const ExplainConfig& config);

// Computes the comparison table and returns the process exit status
// (0 on a full match, 6 otherwise), printing the table to `out`.
int run_toy_table(std::ostream& out);

// Report JSON for `axiom-audit`.
std::string run_axiom_audit(const AuditConfig& config);

// Serializes with insertion-ordered keys and 17 significant digits for
// every floating-point number.
std::string dump_report(const nlohmann::ordered_json& report);

// Parses one filter expression: `<feature> <op> <number>`,
// `score <op> <number>` or `score >= quantile(<q>)`, op in
// {<, <=, >, >=, ==}. Quantile thresholds are taken over `scores`.
RowPredicate parse_filter(const std::string& expr, const FeatureSchema& schema,
                          std::span<const double> scores);

// True when the expression refers to the model score.
bool filter_uses_score(const std::string& expr);

}  // namespace fae::cli

#endif  // FAE_CLI_H_

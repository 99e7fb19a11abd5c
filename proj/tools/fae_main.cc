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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fae/cli.h"
#include "fae/error.h"

namespace {

// CLI11 has no direct optional<size_t> binding on every version, so parse
// through a string.
template <typename T>
std::optional<T> parse_opt(const std::string& flag, const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw fae::Error(fae::ErrorKind::kConfig, flag + ": '" + text + "' is not a nonnegative integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fae: feature attributions over reference distributions"};
  app.require_subcommand(1);

  fae::cli::ExplainConfig ex;
  std::string ex_row, ex_input, ex_n, ex_seed;
  auto* explain = app.add_subcommand("explain", "attribute one input against a reference distribution");
  explain->add_option("--model", ex.model, "builtin name (f_male, f_both) or model JSON file");
  explain->add_option("--model-command", ex.model_command, "external model speaking NDJSON on stdio");
  explain->add_option("--data", ex.data, "CSV dataset");
  explain->add_option("--row", ex_row, "explain this data row (0-based)");
  explain->add_option("--input", ex_input, "explain this comma-separated vector");
  explain->add_option("--game", ex.game, "single-ref | unified | conditional")->capture_default_str();
  explain->add_option("--reference", ex.reference,
                      "empirical | joint-marginal | uniform | filtered:<expr> | point:<v>")
      ->capture_default_str();
  explain->add_option("--filter", ex.filters, "extra filter, repeatable (conjunction)");
  explain->add_option("--estimator", ex.estimator,
                      "exact | permutation:k | coalition:k | wls | wls:k | wls-kernel:k")
      ->capture_default_str();
  explain->add_option("--n-references", ex_n, "sample N references (default: enumerate)");
  explain->add_option("--confidence", ex.confidence, "interval level")->capture_default_str();
  explain->add_option("--summary", ex.summaries, "mean | quantiles | clusters[:k], repeatable")
      ->delimiter(',');
  explain->add_option("--seed", ex_seed, "master seed");
  explain->add_flag("--emit-rows", ex.emit_rows, "include per-reference rows in the report");
  explain->add_flag("--assume-unbiased", ex.assume_unbiased,
                    "allow confidence intervals for subsampled WLS");
  explain->add_option("--output", ex.output, "write the report here instead of stdout");
  explain->add_option("--plot-data", ex.plot_data, "write per-reference attributions as CSV");
  explain->add_option("--threads", ex.threads, "worker threads")->check(CLI::PositiveNumber);
  explain->add_option("--timeout-ms", ex.external_timeout_ms, "external model reply timeout");

  auto* toy = app.add_subcommand("toy-table", "reproduce the four-formulation comparison table");

  fae::cli::AuditConfig au;
  std::string au_row, au_input, au_n, au_seed;
  auto* audit = app.add_subcommand("axiom-audit", "check Shapley axioms on one explanation game");
  audit->add_option("--model", au.model);
  audit->add_option("--model-command", au.model_command);
  audit->add_option("--data", au.data);
  audit->add_option("--row", au_row);
  audit->add_option("--input", au_input);
  audit->add_option("--game", au.game)->capture_default_str();
  audit->add_option("--reference", au.reference)->capture_default_str();
  audit->add_option("--filter", au.filters);
  audit->add_option("--n-references", au_n);
  audit->add_option("--seed", au_seed);
  audit->add_option("--output", au.output);
  audit->add_option("--timeout-ms", au.external_timeout_ms);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fae::exit_code(fae::ErrorKind::kConfig);
  }

  try {
    if (*explain) {
      ex.row = parse_opt<std::size_t>("--row", ex_row);
      if (!ex_input.empty()) ex.input = ex_input;
      ex.n_references = parse_opt<std::size_t>("--n-references", ex_n);
      ex.seed = parse_opt<std::uint64_t>("--seed", ex_seed);
      const auto text = fae::cli::run_explain(ex);
      if (ex.output.empty()) std::cout << text;
      return 0;
    }
    if (*toy) return fae::cli::run_toy_table(std::cout);
    if (*audit) {
      au.row = parse_opt<std::size_t>("--row", au_row);
      if (!au_input.empty()) au.input = au_input;
      au.n_references = parse_opt<std::size_t>("--n-references", au_n);
      au.seed = parse_opt<std::uint64_t>("--seed", au_seed);
      const auto text = fae::cli::run_axiom_audit(au);
      if (au.output.empty()) std::cout << text;
      return 0;
    }
  } catch (const fae::Error& e) {
    std::cerr << "error: " << fae::error_class_name(e.kind()) << ": " << e.what() << "\n";
    return fae::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

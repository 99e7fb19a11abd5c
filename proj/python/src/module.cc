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

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fae/cli.h"
#include "fae/error.h"
#include "fae/games.h"
#include "fae/models.h"
#include "fae/shapley.h"
#include "fae/toy.h"

namespace py = pybind11;

namespace {

int arity_of(std::size_t n) {
  int m = 0;
  while ((std::size_t{1} << m) < n) ++m;
  if ((std::size_t{1} << m) != n) {
    throw fae::Error(fae::ErrorKind::kConfig, "payoff table length must be a power of two");
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_fae, m) {
  m.doc() = "Feature attributions over reference distributions";

  static py::exception<fae::Error> fae_error(m, "FaeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const fae::Error& e) {
      py::object err = fae_error;
      py::object inst = err(std::string(fae::error_class_name(e.kind())) + ": " + e.what());
      inst.attr("error_class") = fae::error_class_name(e.kind());
      inst.attr("exit_code") = fae::exit_code(e.kind());
      PyErr_SetObject(fae_error.ptr(), inst.ptr());
    }
  });

  m.def("exact_shapley",
        [](std::vector<double> payoffs) {
          const int arity = arity_of(payoffs.size());
          fae::TabularGame game(arity, std::move(payoffs));
          return fae::exact_shapley(game);
        },
        py::arg("payoffs"),
        "Shapley values of a game given as a payoff table indexed by coalition bitmask.");

  m.def("estimate_shapley",
        [](std::vector<double> payoffs, const std::string& estimator, std::uint64_t seed) {
          const int arity = arity_of(payoffs.size());
          fae::TabularGame game(arity, std::move(payoffs));
          const auto est = fae::estimate_shapley(game, fae::EstimatorSpec::parse(estimator), seed);
          return py::make_tuple(est.phi, est.ssd);
        },
        py::arg("payoffs"), py::arg("estimator"), py::arg("seed") = 0);

  m.def("predict",
        [](const std::string& model, const std::vector<std::vector<double>>& rows) {
          const auto handle = fae::load_model(model);
          py::gil_scoped_release release;
          return handle->predict(rows);
        },
        py::arg("model"), py::arg("rows"));

  m.def("toy_table", [] {
    py::list out;
    for (const auto& c : fae::compute_toy_table()) {
      py::dict d;
      d["formulation"] = c.formulation;
      d["model"] = c.model;
      d["feature"] = c.feature;
      d["computed"] = c.computed;
      d["printed"] = c.printed;
      d["matches"] = c.matches();
      out.append(d);
    }
    return out;
  });

  m.def("explain",
        [](std::string model, std::string data, std::optional<std::size_t> row,
           std::optional<std::string> input, std::string game, std::string reference,
           std::vector<std::string> filters, std::string estimator,
           std::optional<std::size_t> n_references, double confidence,
           std::vector<std::string> summaries, std::optional<std::uint64_t> seed,
           bool emit_rows, bool assume_unbiased, int threads, std::string model_command) {
          fae::cli::ExplainConfig c;
          c.model = std::move(model);
          c.model_command = std::move(model_command);
          c.data = std::move(data);
          c.row = row;
          c.input = std::move(input);
          c.game = std::move(game);
          c.reference = std::move(reference);
          c.filters = std::move(filters);
          c.estimator = std::move(estimator);
          c.n_references = n_references;
          c.confidence = confidence;
          c.summaries = std::move(summaries);
          c.seed = seed;
          c.emit_rows = emit_rows;
          c.assume_unbiased = assume_unbiased;
          c.threads = threads;
          py::gil_scoped_release release;
          return fae::cli::run_explain(c);
        },
        py::arg("model") = "", py::arg("data") = "", py::arg("row") = py::none(),
        py::arg("input") = py::none(), py::arg("game") = "unified",
        py::arg("reference") = "empirical", py::arg("filters") = std::vector<std::string>{},
        py::arg("estimator") = "exact", py::arg("n_references") = py::none(),
        py::arg("confidence") = 0.95,
        py::arg("summaries") = std::vector<std::string>{"mean", "quantiles"},
        py::arg("seed") = py::none(), py::arg("emit_rows") = false,
        py::arg("assume_unbiased") = false, py::arg("threads") = 1,
        py::arg("model_command") = "",
        "Runs the explain pipeline and returns the report JSON text.");

  m.def("axiom_audit",
        [](std::string model, std::string data, std::optional<std::size_t> row,
           std::optional<std::string> input, std::string game, std::string reference,
           std::optional<std::uint64_t> seed) {
          fae::cli::AuditConfig c;
          c.model = std::move(model);
          c.data = std::move(data);
          c.row = row;
          c.input = std::move(input);
          c.game = std::move(game);
          c.reference = std::move(reference);
          c.seed = seed;
          py::gil_scoped_release release;
          return fae::cli::run_axiom_audit(c);
        },
        py::arg("model") = "", py::arg("data") = "", py::arg("row") = py::none(),
        py::arg("input") = py::none(), py::arg("game") = "unified",
        py::arg("reference") = "uniform", py::arg("seed") = py::none());
}

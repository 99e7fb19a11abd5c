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

// Acceptance suite: prints one PASS/FAIL line per criterion.
// Usage: fae_acceptance <path-to-fae-cli>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fae/cli.h"
#include "fae/error.h"
#include "fae/explain.h"
#include "fae/rng.h"
#include "fae/shapley.h"
#include "fae/toy.h"

namespace {

using namespace fae;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelHandle f_male() { return make_builtin_model("f_male"); }
ModelHandle f_both() { return make_builtin_model("f_both"); }

ReferenceSource uniform_toy() {
  return ReferenceSource::uniform(
      toy_schema(), {FeatureDomain::values({0.0, 1.0}), FeatureDomain::values({0.0, 1.0})});
}

std::vector<ReferenceSource> toy_sources() {
  const auto d = mover_dataset();
  return {ReferenceSource::empirical(d), ReferenceSource::joint_marginal(d), uniform_toy(),
          filter_references(d, [](std::span<const double> r, double) { return r[0] == 1.0; },
                            {}, "male == 1")};
}

struct ToyGame {
  std::string name;
  ModelHandle model;
  ReferenceSource src;
};

std::vector<ToyGame> toy_games() {
  std::vector<ToyGame> out;
  for (const auto& [name, model] :
       std::vector<std::pair<std::string, ModelHandle>>{{"f_male", f_male()}, {"f_both", f_both()}}) {
    for (const auto& src : toy_sources()) out.push_back({name + "/" + src.describe(), model, src});
  }
  return out;
}

std::shared_ptr<TabularGame> random_game(int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<double> payoffs(std::size_t{1} << m);
  for (std::size_t s = 1; s < payoffs.size(); ++s) payoffs[s] = normal(gen);
  return std::make_shared<TabularGame>(m, std::move(payoffs));
}

ModelHandle random_model(int m, std::uint64_t seed, int irrelevant = -1) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  std::vector<double> w(m), q(m);
  for (int i = 0; i < m; ++i) {
    w[i] = i == irrelevant ? 0.0 : n(gen);
    q[i] = i == irrelevant ? 0.0 : n(gen);
  }
  return make_function_model(
      FeatureSchema::with_default_names(m),
      [w, q](std::span<const double> x) {
        double lin = 0.0, inter = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          lin += w[i] * x[i];
          inter *= q[i] == 0.0 ? 1.0 : std::tanh(q[i] * x[i]);
        }
        return std::sin(lin) + inter;
      },
      "random");
}

ReferenceSource random_source(int m, int points, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> v(0, 3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<FeatureVector> rows;
  std::vector<double> w;
  double total = 0.0;
  for (int j = 0; j < points; ++j) {
    FeatureVector r(m);
    for (auto& x : r) x = v(gen);
    rows.push_back(r);
    w.push_back(u(gen));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return ReferenceSource::empirical(Dataset(FeatureSchema::with_default_names(m), rows, w));
}

Outcome toy_table() {
  const auto t0 = Clock::now();
  const auto cells = compute_toy_table();
  const double secs = seconds_since(t0);
  Outcome o;
  int matched = 0;
  for (const auto& c : cells) {
    if (c.matches()) {
      ++matched;
    } else {
      o.pass = false;
      o.detail += c.formulation + "/" + c.model + "/" + std::to_string(c.feature) + " ";
    }
  }
  o.pass = o.pass && cells.size() == 16 && secs < 1.0;
  o.detail += std::to_string(matched) + "/16 cells, " + fmt("%.3fs", secs);
  return o;
}

Outcome prop1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int games = 0;
  auto compare = [&](const ModelHandle& model, const FeatureVector& x, const ReferenceSource& src) {
    const auto unified = exact_shapley(*unified_payoff(model, x, src, ExactEnumeration{}));
    std::vector<double> mean(unified.size(), 0.0);
    for (const auto& wr : enumerate_weighted(src)) {
      const auto phi = exact_shapley(*single_reference_payoff(model, x, wr.point));
      for (std::size_t i = 0; i < phi.size(); ++i) mean[i] += wr.probability * phi[i];
    }
    for (std::size_t i = 0; i < mean.size(); ++i) worst = std::max(worst, std::abs(mean[i] - unified[i]));
    ++games;
  };
  for (const auto& g : toy_games()) compare(g.model, mover_input(), g.src);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FeatureVector x(6);
    std::mt19937_64 gen(seed + 7);
    for (auto& v : x) v = static_cast<double>(gen() % 4);
    compare(random_model(6, seed + 300), x, random_source(6, 10, seed + 400));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && games == 28 && secs < 10.0,
          std::to_string(games) + " games, max dev " + fmt("%.2e", worst) + ", " +
              fmt("%.3fs", secs)};
}

Outcome axioms() {
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int m = 1 + static_cast<int>(seed % 8);
    const auto g = random_game(m, 7000 + seed);
    AxiomOptions opt;
    opt.linearity_seed = seed;
    if (check_axioms(g, exact_shapley(*g), opt).all_passed()) ++passed;
  }
  // Insensitivity under unified/single-reference games.
  double worst_irrelevant = 0.0;
  int planted = 0;
  for (const auto& src : toy_sources()) {
    const auto phi = exact_shapley(*unified_payoff(f_male(), mover_input(), src, ExactEnumeration{}));
    worst_irrelevant = std::max(worst_irrelevant, std::abs(phi[1]));
    ++planted;
  }
  bool audit_ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 5;
    const int dead = static_cast<int>(seed % m);
    const auto model = random_model(m, seed + 50, dead);
    const std::vector<std::vector<double>> domain(m, {0, 1, 2, 3});
    audit_ok = audit_ok && insensitivity_audit(*model, domain) == std::vector<int>{dead};
    const auto src = random_source(m, 10, seed + 60);
    const FeatureVector x(m, 3.0);
    const auto phi = exact_shapley(*unified_payoff(model, x, src, ExactEnumeration{}));
    worst_irrelevant = std::max(worst_irrelevant, std::abs(phi[dead]));
    for (const auto& wr : enumerate_weighted(src)) {
      worst_irrelevant = std::max(
          worst_irrelevant, std::abs(exact_shapley(*single_reference_payoff(model, x, wr.point))[dead]));
    }
    ++planted;
  }
  const auto cond = exact_shapley(*conditional_payoff(f_male(), mover_input(), mover_dataset()));
  const bool violation_shown = std::abs(cond[1] - 0.05) < 1e-12;
  return {passed == 50 && worst_irrelevant <= 1e-12 && audit_ok && violation_shown,
          std::to_string(passed) + "/50 random games pass; " + std::to_string(planted) +
              " planted-irrelevant cases max |phi| " + fmt("%.1e", worst_irrelevant) +
              "; conditional phi_lift " + fmt("%.17g", cond[1])};
}

Outcome estimators() {
  const std::size_t k = 5000;
  double worst_rate = 1.0;
  bool efficiency = true;
  for (const auto& g : toy_games()) {
    const auto game = unified_payoff(g.model, mover_input(), g.src, ExactEnumeration{});
    const auto exact = exact_shapley(*game);
    for (const bool perm : {true, false}) {
      int hits = 0;
      for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t seed = derive_seed(perm ? 1 : 2, static_cast<std::uint64_t>(trial));
        const auto est = perm ? permutation_shapley(*game, k, seed) : coalition_shapley(*game, k, seed);
        bool within = true;
        for (std::size_t i = 0; i < exact.size(); ++i) {
          const double sem = est.ssd[i] / std::sqrt(static_cast<double>(k));
          within = within && std::abs(est.phi[i] - exact[i]) <= 3 * sem + 1e-12;
        }
        hits += within;
        if (perm) {
          double total = 0.0;
          for (double p : est.phi) total += p;
          efficiency = efficiency && std::abs(total - game->value(Coalition::grand(2))) <= 1e-9;
        }
      }
      worst_rate = std::min(worst_rate, hits / 100.0);
    }
  }
  double wls_err = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = random_game(8, 9100 + seed);
    const auto a = wls_shapley(*g, WlsFull{}, 0);
    const auto b = exact_shapley(*g);
    for (int i = 0; i < 8; ++i) wls_err = std::max(wls_err, std::abs(a[i] - b[i]));
  }
  return {worst_rate >= 0.95 && efficiency && wls_err < 1e-6,
          "min within-3SEM rate " + fmt("%.2f", worst_rate) + " over 16 game/estimator pairs; " +
              "permutation efficiency " + (efficiency ? "exact" : "violated") +
              "; WLS max err " + fmt("%.1e", wls_err)};
}

Outcome calibration() {
  const auto t0 = Clock::now();
  const std::vector<double> truth = {0.375, 0.375};
  std::string detail;
  bool pass = true;
  for (const auto& est : {EstimatorSpec::exact(), EstimatorSpec::permutation(10)}) {
    std::vector<int> covered(2, 0);
    for (int run = 0; run < 500; ++run) {
      const auto s = attribute_distribution(f_both(), mover_input(), uniform_toy(), est, 100,
                                            derive_seed(0xca1, static_cast<std::uint64_t>(run)));
      const auto r = mean_with_ci(s, 0.95);
      for (int i = 0; i < 2; ++i) {
        covered[i] += *r.features[i].lo <= truth[i] && truth[i] <= *r.features[i].hi;
      }
    }
    for (int i = 0; i < 2; ++i) {
      const double rate = covered[i] / 500.0;
      pass = pass && rate >= 0.90 && rate <= 0.98;
      detail += est.to_string() + "[" + std::to_string(i) + "] " + fmt("%.3f", rate) + " ";
    }
  }
  const double secs = seconds_since(t0);
  return {pass && secs < 120.0, detail + fmt("(%.2fs)", secs)};
}

Outcome misleading_means(const fs::path& dir) {
  // f = x0 + 0.1 x1 explained at the origin against x in {-1,1}^2: phi_0 = -r_0
  // is +-1 with equal odds.
  const auto data = dir / "signs.csv";
  const auto model = dir / "linear.json";
  std::ofstream(data) << "x0,x1\n-1,-1\n-1,1\n1,-1\n1,1\n";
  std::ofstream(model) << R"({"type":"linear","weights":[1,0.1],"bias":0})";
  cli::ExplainConfig c;
  c.model = model.string();
  c.data = data.string();
  c.input = "0,0";
  c.reference = "uniform";
  c.n_references = 20000;
  c.seed = 6;
  c.emit_rows = true;
  const auto r = nlohmann::json::parse(cli::run_explain(c));
  const double mean = r["summary"]["mean"]["features"][0]["mean"].get<double>();
  const auto& q = r["summary"]["quantiles"]["features"][0]["values"];
  const double spread = q[4].get<double>() - q[0].get<double>();
  std::size_t top = 0;
  for (const auto& row : r["rows"]) {
    const double a = std::abs(row["phi"][0].get<double>());
    const double b = std::abs(row["phi"][1].get<double>());
    top += a > b;
  }
  const double frac = static_cast<double>(top) / static_cast<double>(r["rows"].size());
  return {std::abs(mean) < 0.05 && spread > 1.0 && frac > 0.5,
          "|mean| " + fmt("%.4f", std::abs(mean)) + ", q95-q05 " + fmt("%.3f", spread) +
              ", top feature in " + fmt("%.3f", frac) + " of rows"};
}

Outcome clustering() {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> noise(0.0, 0.05);
  AttributionSample s;
  s.feature_names = {"a", "b"};
  std::vector<int> planted;
  for (int j = 0; j < 400; ++j) {
    const bool first = j % 2 == 0;
    s.rows.push_back({0.1 * noise(gen), {(first ? 1.0 : -1.0) + noise(gen), noise(gen)}});
    s.references.push_back({0, 0});
    s.weights.push_back(1.0 / 400);
    planted.push_back(first ? 0 : 1);
  }
  const auto report = cluster_summary(s, 2, 2024);
  std::vector<int> label(400, -1);
  for (std::size_t c = 0; c < report.clusters.size(); ++c) {
    for (auto m : report.clusters[c].members) label[m] = static_cast<int>(c);
  }
  int agree = 0;
  for (int j = 0; j < 400; ++j) agree += label[j] == planted[j];
  const int mis = std::min(agree, 400 - agree);
  const auto global = mean_with_ci(s);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    double total = 0.0;
    for (const auto& cl : report.clusters) total += cl.size_fraction * cl.features[i].mean;
    worst = std::max(worst, std::abs(total - global.features[i].mean));
  }
  return {report.clusters.size() == 2 && mis <= 4 && worst <= 1e-9,
          std::to_string(mis) + "/400 misassigned, mean reconstruction error " +
              fmt("%.1e", worst)};
}

Outcome determinism(const std::string& cli, const fs::path& dir) {
  const std::string src = FAE_SOURCE_DIR;
  const std::string base = "'" + cli + "' explain --model '" + src +
                           "/models/depth3_tree.json' --data '" + src +
                           "/data/synthetic.csv' --row 3 --estimator permutation:20"
                           " --n-references 200 --seed 1 --summary mean,quantiles,clusters"
                           " --emit-rows";
  std::vector<std::string> reports, plots;
  int run = 0;
  for (int threads : {1, 1, 1, 4}) {
    const auto out = dir / ("report" + std::to_string(run) + ".json");
    const auto plot = dir / ("plot" + std::to_string(run) + ".csv");
    const std::string cmd = base + " --threads " + std::to_string(threads) + " --output '" +
                            out.string() + "' --plot-data '" + plot.string() + "'";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    reports.push_back(read_file(out));
    plots.push_back(read_file(plot));
    ++run;
  }
  bool same = !reports[0].empty();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    same = same && reports[i] == reports[0] && plots[i] == plots[0];
  }
  return {same, std::to_string(reports.size()) + " runs (threads 1,1,1,4), " +
                    std::to_string(reports[0].size()) + "-byte report " +
                    (same ? "identical" : "differs")};
}

Outcome bridge(const std::string& cli, const fs::path& dir) {
  const std::string server = std::string("'") + FAE_MODEL_SERVER + "' f_both";
  const auto external = load_external(server, toy_schema());
  const auto got = exact_shapley(*unified_payoff(external, mover_input(), uniform_toy(), ExactEnumeration{}));
  const auto want = exact_shapley(*unified_payoff(f_both(), mover_input(), uniform_toy(), ExactEnumeration{}));
  bool pass = got == want && got == std::vector<double>{0.375, 0.375};
  // Same through the command line.
  const std::string src = FAE_SOURCE_DIR;
  const auto a = dir / "bridge_external.json";
  const auto b = dir / "bridge_builtin.json";
  const std::string common = " --data '" + src + "/data/mover.csv' --input 1,1 --reference uniform";
  const std::string c1 = "'" + cli + "' explain --model-command \"" + server + "\"" + common +
                         " --output '" + a.string() + "'";
  const std::string c2 = "'" + cli + "' explain --model f_both" + common + " --output '" + b.string() + "'";
  if (std::system(c1.c_str()) != 0 || std::system(c2.c_str()) != 0) return {false, "command failed"};
  const auto ja = nlohmann::json::parse(read_file(a));
  const auto jb = nlohmann::json::parse(read_file(b));
  pass = pass && ja["summary"] == jb["summary"];
  return {pass, "phi via bridge (" + fmt("%.17g", got[0]) + ", " + fmt("%.17g", got[1]) +
                    "); CLI summaries " + (ja["summary"] == jb["summary"] ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: fae_acceptance <fae-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path dir = fs::temp_directory_path() / ("fae_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"toy table reproduction", toy_table},
      {"unified game equals mean of single-reference games", prop1},
      {"axioms and insensitivity", axioms},
      {"estimator correctness", estimators},
      {"confidence interval calibration", calibration},
      {"misleading means exposed by quantiles", [&] { return misleading_means(dir); }},
      {"clustering recovery", clustering},
      {"determinism across runs and threads", [&] { return determinism(cli, dir); }},
      {"external model bridge", [&] { return bridge(cli, dir); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "AC" << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  fs::remove_all(dir);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

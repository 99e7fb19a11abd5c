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

#include "fae/explain.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "fae/error.h"
#include "fae/games.h"
#include "fae/kmeans.h"
#include "fae/rng.h"

namespace fae {
namespace {

// Stream index reserved for drawing references; row estimators use the
// indices 0..N-1 under the same master seed.
constexpr std::uint64_t kReferenceStream = ~std::uint64_t{0};

AttributionSample attribute_rows(const ModelHandle& model, const FeatureVector& x,
                                 std::vector<FeatureVector> references,
                                 std::vector<double> weights, const EstimatorSpec& estimator,
                                 std::uint64_t master_seed, int threads) {
  if (references.empty()) throw Error(ErrorKind::kEmptySource, "no references to attribute against");
  model->schema().check(x);
  AttributionSample sample;
  sample.feature_names = model->schema().names();
  sample.input = x;
  sample.prediction = model->predict_one(x);
  sample.estimator = estimator;
  sample.master_seed = master_seed;
  sample.weights = std::move(weights);
  sample.rows.resize(references.size());

  const std::size_t n = references.size();
  const auto workers = static_cast<std::size_t>(std::clamp<int>(threads, 1, 256));
  std::vector<std::exception_ptr> failure(n);

  auto run = [&](std::size_t worker) {
    for (std::size_t j = worker; j < n; j += workers) {
      try {
        const SingleReferenceGame game(model, x, references[j]);
        auto est = estimate_shapley(game, estimator, derive_seed(master_seed, j));
        sample.rows[j].baseline = game.baseline();
        sample.rows[j].per_feature = std::move(est.phi);
      } catch (...) {
        failure[j] = std::current_exception();
      }
    }
  };
  if (workers == 1 || n == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(workers, n); ++t) pool.emplace_back(run, t);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!failure[j]) continue;
    try {
      std::rethrow_exception(failure[j]);
    } catch (const Error& e) {
      throw Error(e.kind(), "reference row " + std::to_string(j) + ": " + e.what());
    }
  }
  sample.references = std::move(references);
  return sample;
}

double weighted_quantile(std::vector<std::pair<double, double>> values, double q) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (const auto& [v, w] : values) total += w;
  double acc = 0.0;
  for (const auto& [v, w] : values) {
    acc += w;
    if (acc >= q * total - 1e-12 * total) return v;
  }
  return values.back().first;
}

struct Moments {
  double mean = 0.0;
  double ssd = 0.0;
};

// Weighted mean; the spread is the weighted population deviation for
// enumerated distributions and the unbiased sample deviation otherwise.
Moments moments(std::span<const double> x, std::span<const double> w, bool enumerated) {
  Moments m;
  double mass = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    m.mean += w[j] * x[j];
    mass += w[j];
  }
  m.mean /= mass;
  double ss = 0.0;
  if (enumerated) {
    for (std::size_t j = 0; j < x.size(); ++j) ss += w[j] * (x[j] - m.mean) * (x[j] - m.mean);
    m.ssd = std::sqrt(ss / mass);
  } else if (x.size() > 1) {
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.ssd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  }
  return m;
}

FeatureSummary summarize(std::span<const double> x, std::span<const double> w,
                         bool enumerated, double z, bool with_quantiles) {
  const auto mo = moments(x, w, enumerated);
  FeatureSummary s;
  s.mean = mo.mean;
  s.ssd = mo.ssd;
  if (enumerated) {
    s.lo = s.mean;
    s.hi = s.mean;
  } else if (x.size() > 1) {
    const double half = z * s.ssd / std::sqrt(static_cast<double>(x.size()));
    s.lo = s.mean - half;
    s.hi = s.mean + half;
  }
  if (with_quantiles) {
    for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) {
      if (enumerated) {
        std::vector<std::pair<double, double>> vw;
        for (std::size_t j = 0; j < x.size(); ++j) vw.emplace_back(x[j], w[j]);
        s.quantiles[q] = weighted_quantile(std::move(vw), kQuantileLevels[q]);
      } else {
        s.quantiles[q] = quantile(x, kQuantileLevels[q]);
      }
    }
  }
  return s;
}

void require_unbiased(const AttributionSample& sample, bool assume_unbiased) {
  if (!sample.estimator.known_unbiased() && !assume_unbiased) {
    throw Error(ErrorKind::kConfig,
                "rows estimated by subsampled weighted least squares have no unbiasedness "
                "guarantee; pass assume-unbiased to build intervals anyway");
  }
}

}  // namespace

AttributionSample attribute_distribution(const ModelHandle& model, const FeatureVector& x,
                                         const ReferenceSource& src,
                                         const EstimatorSpec& estimator, std::size_t n,
                                         std::uint64_t master_seed, int threads) {
  if (n == 0) throw Error(ErrorKind::kConfig, "need at least one reference");
  if (src.arity() != model->schema().size()) {
    throw Error(ErrorKind::kSchema, "reference source and model differ in feature count");
  }
  auto refs = sample_references(src, n, derive_seed(master_seed, kReferenceStream));
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  return attribute_rows(model, x, std::move(refs), std::move(weights), estimator,
                        master_seed, threads);
}

AttributionSample attribute_enumerated(const ModelHandle& model, const FeatureVector& x,
                                       const ReferenceSource& src,
                                       const EstimatorSpec& estimator, int threads) {
  if (estimator.is_sampled()) {
    throw Error(ErrorKind::kConfig,
                "enumerated attribution needs a deterministic estimator (exact or wls);"
                " sample references with --n-references to use " + estimator.to_string());
  }
  if (src.arity() != model->schema().size()) {
    throw Error(ErrorKind::kSchema, "reference source and model differ in feature count");
  }
  std::vector<FeatureVector> refs;
  std::vector<double> weights;
  for (auto& wr : enumerate_weighted(src)) {
    refs.push_back(std::move(wr.point));
    weights.push_back(wr.probability);
  }
  auto sample = attribute_rows(model, x, std::move(refs), std::move(weights), estimator, 0,
                               threads);
  sample.enumerated = true;
  return sample;
}

AttributionVector expected_attribution(const AttributionSample& sample) {
  AttributionVector out;
  out.per_feature.assign(sample.arity(), 0.0);
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double w = sample.weights[j];
    out.baseline += w * sample.rows[j].baseline;
    for (int i = 0; i < sample.arity(); ++i) out.per_feature[i] += w * sample.rows[j].per_feature[i];
  }
  return out;
}

std::string_view interval_kind_name(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::kSem: return "sem";
    case IntervalKind::kExact: return "exact";
    case IntervalKind::kUndefined: return "undefined";
  }
  return "undefined";
}

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::kConfig, "confidence level must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
}

SummaryReport mean_with_ci(const AttributionSample& sample, double confidence,
                           bool assume_unbiased) {
  if (sample.size() == 0) throw Error(ErrorKind::kEmptySource, "empty attribution sample");
  require_unbiased(sample, assume_unbiased);
  SummaryReport report;
  report.n = sample.size();
  report.confidence = confidence;
  report.z = normal_critical_value(confidence);
  report.prediction = sample.prediction;
  report.interval = sample.enumerated ? IntervalKind::kExact
                    : sample.size() > 1 ? IntervalKind::kSem
                                        : IntervalKind::kUndefined;
  std::vector<double> column(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) column[j] = sample.rows[j].baseline;
  report.mean_baseline = moments(column, sample.weights, sample.enumerated).mean;
  for (int i = 0; i < sample.arity(); ++i) {
    for (std::size_t j = 0; j < sample.size(); ++j) column[j] = sample.rows[j].per_feature[i];
    report.features.push_back(
        summarize(column, sample.weights, sample.enumerated, report.z, true));
  }
  return report;
}

ClusterReport cluster_summary(const AttributionSample& sample, int k, std::uint64_t seed,
                              double confidence) {
  if (k < 1 || static_cast<std::size_t>(k) > sample.size()) {
    throw Error(ErrorKind::kSize, "cluster count must satisfy 1 <= k <= N (k=" +
                                      std::to_string(k) + ", N=" +
                                      std::to_string(sample.size()) + ")");
  }
  const double z = normal_critical_value(confidence);
  std::vector<std::vector<double>> points;
  points.reserve(sample.size());
  for (const auto& row : sample.rows) points.push_back(row.per_feature);
  const auto km = kmeans(points, sample.weights, k, seed);

  ClusterReport report;
  report.k = k;
  report.iterations = km.iterations;
  report.converged = km.converged;
  double total = 0.0;
  for (double w : sample.weights) total += w;
  for (int c = 0; c < k; ++c) {
    ClusterSummary cluster;
    std::vector<double> w;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (km.assignment[j] != c) continue;
      cluster.members.push_back(j);
      w.push_back(sample.weights[j]);
      cluster.size_fraction += sample.weights[j];
    }
    cluster.size_fraction /= total;
    std::vector<double> column(cluster.members.size());
    for (std::size_t t = 0; t < column.size(); ++t) column[t] = sample.rows[cluster.members[t]].baseline;
    cluster.mean_baseline = moments(column, w, sample.enumerated).mean;
    for (int i = 0; i < sample.arity(); ++i) {
      for (std::size_t t = 0; t < column.size(); ++t) {
        column[t] = sample.rows[cluster.members[t]].per_feature[i];
      }
      cluster.features.push_back(summarize(column, w, sample.enumerated, z, false));
    }
    report.clusters.push_back(std::move(cluster));
  }
  std::stable_sort(report.clusters.begin(), report.clusters.end(),
                   [](const ClusterSummary& a, const ClusterSummary& b) {
                     if (a.size_fraction != b.size_fraction) return a.size_fraction > b.size_fraction;
                     return a.members.front() < b.members.front();
                   });
  return report;
}

std::vector<int> insensitivity_audit(const Model& model,
                                     std::span<const std::vector<double>> domain) {
  const int m = model.schema().size();
  if (static_cast<int>(domain.size()) != m) {
    throw Error(ErrorKind::kSchema, "audit domain needs one value list per feature");
  }
  std::size_t total = 1;
  for (const auto& values : domain) {
    if (values.empty()) throw Error(ErrorKind::kNotEnumerable, "empty feature domain");
    if (total > kMaxEnumeratedSupport / values.size()) {
      throw Error(ErrorKind::kNotEnumerable, "audit domain is too large to enumerate");
    }
    total *= values.size();
  }
  // stride[i]: index distance between neighbours differing only in feature i
  // (last feature varies fastest).
  std::vector<std::size_t> stride(m, 1);
  for (int i = m - 2; i >= 0; --i) stride[i] = stride[i + 1] * domain[i + 1].size();
  std::vector<FeatureVector> points(total, FeatureVector(m));
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (int i = 0; i < m; ++i) points[idx][i] = domain[i][(idx / stride[i]) % domain[i].size()];
  }
  const auto f = model.predict(points);
  std::vector<int> irrelevant;
  for (int i = 0; i < m; ++i) {
    bool invariant = true;
    const std::size_t radix = domain[i].size();
    for (std::size_t idx = 0; idx < total && invariant; ++idx) {
      if ((idx / stride[i]) % radix != 0) continue;
      for (std::size_t d = 1; d < radix && invariant; ++d) {
        invariant = f[idx + d * stride[i]] == f[idx];
      }
    }
    if (invariant) irrelevant.push_back(i);
  }
  return irrelevant;
}

std::vector<std::vector<double>> discrete_domain(const Dataset& data) {
  if (!data.schema().all_discrete()) {
    throw Error(ErrorKind::kNotEnumerable,
                "insensitivity audit needs every feature to be discrete");
  }
  if (data.empty()) throw Error(ErrorKind::kEmptySource, "empty dataset");
  std::vector<std::vector<double>> domain;
  for (int i = 0; i < data.schema().size(); ++i) {
    auto col = data.column(i);
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    domain.push_back(std::move(col));
  }
  return domain;
}

}  // namespace fae

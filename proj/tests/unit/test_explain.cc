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
#include <random>

#include <gtest/gtest.h>

#include "fae/error.h"
#include "fae/explain.h"
#include "fae/kmeans.h"
#include "test_util.h"

namespace fae {
namespace {

using testing::f_both;
using testing::f_male;

AttributionSample sample_from_rows(const std::vector<std::vector<double>>& rows) {
  AttributionSample s;
  const int m = static_cast<int>(rows.front().size());
  for (int i = 0; i < m; ++i) s.feature_names.push_back("x" + std::to_string(i));
  for (const auto& r : rows) {
    s.rows.push_back({0.0, r});
    s.references.push_back(FeatureVector(m, 0.0));
    s.weights.push_back(1.0 / static_cast<double>(rows.size()));
  }
  s.prediction = 0.0;
  for (const auto& r : rows) s.prediction += testing::sum(r) / static_cast<double>(rows.size());
  return s;
}

TEST(Distribution, UniformExactWithinThreeSem) {
  const auto s = attribute_distribution(f_both(), {1, 1}, testing::uniform_toy(),
                                        EstimatorSpec::exact(), 400, 5);
  const auto r = mean_with_ci(s);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LE(std::abs(r.features[i].mean - 0.375), 3 * r.features[i].ssd / std::sqrt(400.0));
  }
}

TEST(Distribution, SinglePointRowsAreIdentical) {
  const auto src = ReferenceSource::single_point(toy_schema(), {0, 0});
  const auto s = attribute_distribution(f_both(), {1, 1}, src, EstimatorSpec::exact(), 7, 1);
  const auto want = exact_shapley(*single_reference_payoff(f_both(), {1, 1}, {0, 0}));
  for (const auto& row : s.rows) EXPECT_EQ(row.per_feature, want);
}

TEST(Distribution, FMaleEmpiricalRows) {
  const auto s = attribute_distribution(f_male(), {1, 1},
                                        ReferenceSource::empirical(mover_dataset()),
                                        EstimatorSpec::exact(), 1000, 21);
  double mean = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    EXPECT_EQ(s.rows[j].per_feature[1], 0.0);
    const double phi_male = s.rows[j].per_feature[0];
    EXPECT_TRUE(phi_male == 0.0 || phi_male == 1.0);
    EXPECT_EQ(phi_male, s.references[j][0] == 0.0 ? 1.0 : 0.0);
    mean += phi_male / 1000.0;
  }
  EXPECT_NEAR(mean, 0.1, 0.03);
}

TEST(Distribution, ThreadCountInvariant) {
  const auto model = make_linear_model(FeatureSchema::with_default_names(5),
                                       {{1, -1, 2, 0.5, 3}, 0.1, true});
  const auto src = ReferenceSource::uniform(
      model->schema(), std::vector<FeatureDomain>(5, FeatureDomain::range(-1, 1)));
  const FeatureVector x = {0.2, 0.4, -0.3, 0.9, 0.0};
  for (const char* est : {"permutation:8", "coalition:8", "exact", "wls-kernel:10"}) {
    const auto a = attribute_distribution(model, x, src, EstimatorSpec::parse(est), 64, 99, 1);
    const auto b = attribute_distribution(model, x, src, EstimatorSpec::parse(est), 64, 99, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_EQ(a.rows[j].per_feature, b.rows[j].per_feature) << est;
      EXPECT_EQ(a.references[j], b.references[j]);
    }
  }
}

TEST(Distribution, ErrorsCarryRowIndex) {
  const auto model = make_function_model(
      toy_schema(), [](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : 0.0; },
      "bad");
  try {
    attribute_enumerated(model, {0, 0}, testing::uniform_toy(), EstimatorSpec::exact(), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModel);
    EXPECT_NE(std::string(e.what()).find("reference row"), std::string::npos);
  }
}

TEST(Enumerated, MatchesUnifiedGame) {
  for (const auto& model : {f_male(), f_both()}) {
    for (const auto& src : {ReferenceSource::empirical(mover_dataset()),
                            ReferenceSource::joint_marginal(mover_dataset()),
                            testing::uniform_toy()}) {
      const auto s = attribute_enumerated(model, {1, 1}, src);
      const auto mean = expected_attribution(s);
      const auto game = unified_payoff(model, {1, 1}, src, ExactEnumeration{});
      const auto phi = exact_shapley(*game);
      for (int i = 0; i < 2; ++i) EXPECT_NEAR(mean.per_feature[i], phi[i], 1e-9);
      EXPECT_NEAR(mean.baseline, game->baseline(), 1e-12);
      const auto r = mean_with_ci(s);
      EXPECT_EQ(r.interval, IntervalKind::kExact);
    }
  }
}

TEST(Enumerated, RefusesSampledEstimator) {
  EXPECT_THROW(attribute_enumerated(f_both(), {1, 1}, testing::uniform_toy(),
                                    EstimatorSpec::permutation(5)),
               Error);
}

TEST(MeanCi, ThreeRows) {
  const auto r = mean_with_ci(sample_from_rows({{1, 0}, {2, 0}, {3, 0}}), 0.95);
  EXPECT_DOUBLE_EQ(r.features[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(r.features[0].ssd, 1.0);
  EXPECT_NEAR(*r.features[0].hi - 2.0, 1.959963984540054 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(*r.features[0].hi - 2.0, 1.132, 5e-4);
  EXPECT_EQ(r.features[1].ssd, 0.0);
  EXPECT_EQ(*r.features[1].lo, 0.0);
  EXPECT_EQ(r.interval, IntervalKind::kSem);
}

TEST(MeanCi, IdenticalRowsCollapse) {
  const auto r = mean_with_ci(sample_from_rows({{0.5, 2}, {0.5, 2}, {0.5, 2}, {0.5, 2}}));
  for (const auto& f : r.features) {
    EXPECT_EQ(f.ssd, 0.0);
    EXPECT_EQ(*f.lo, f.mean);
    EXPECT_EQ(*f.hi, f.mean);
  }
}

TEST(MeanCi, SingleRowUndefined) {
  const auto r = mean_with_ci(sample_from_rows({{0.5, 2}}));
  EXPECT_EQ(r.interval, IntervalKind::kUndefined);
  EXPECT_FALSE(r.features[0].lo.has_value());
}

TEST(MeanCi, RefusesSubsampledWlsUnlessAssumed) {
  auto s = sample_from_rows({{1, 0}, {2, 0}});
  s.estimator = EstimatorSpec::wls_sampled(10, false);
  try {
    mean_with_ci(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  EXPECT_NO_THROW(mean_with_ci(s, 0.95, true));
  s.estimator = EstimatorSpec::wls_full();
  EXPECT_NO_THROW(mean_with_ci(s));
}

TEST(MeanCi, CriticalValues) {
  EXPECT_NEAR(normal_critical_value(0.95), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_critical_value(0.90), 1.6448536269514722, 1e-12);
  EXPECT_THROW(normal_critical_value(1.0), Error);
  EXPECT_THROW(normal_critical_value(0.0), Error);
}

TEST(MeanCi, QuantilesExposeSymmetricSpread) {
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < 400; ++j) rows.push_back({j % 2 ? 1.0 : -1.0, 0.01});
  const auto r = mean_with_ci(sample_from_rows(rows));
  EXPECT_LT(std::abs(r.features[0].mean), 0.05);
  EXPECT_GT(r.features[0].quantiles[4] - r.features[0].quantiles[0], 1.0);
}

TEST(Clusters, KOneIsGlobal) {
  const auto s = attribute_distribution(f_both(), {1, 1}, testing::uniform_toy(),
                                        EstimatorSpec::exact(), 50, 8);
  const auto c = cluster_summary(s, 1, 3);
  const auto g = mean_with_ci(s);
  ASSERT_EQ(c.clusters.size(), 1u);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(c.clusters[0].features[i].mean, g.features[i].mean, 1e-12);
  EXPECT_DOUBLE_EQ(c.clusters[0].size_fraction, 1.0);
}

TEST(Clusters, KEqualsNSingletons) {
  const auto s = sample_from_rows({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {-3, 2}});
  const auto c = cluster_summary(s, 5, 4);
  ASSERT_EQ(c.clusters.size(), 5u);
  for (const auto& cl : c.clusters) {
    EXPECT_EQ(cl.members.size(), 1u);
    for (const auto& f : cl.features) EXPECT_EQ(f.ssd, 0.0);
  }
  EXPECT_THROW(cluster_summary(s, 6, 4), Error);
}

TEST(Clusters, BimodalRecovery) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < 400; ++j) {
    rows.push_back({(j < 200 ? 1.0 : -1.0) + noise(gen), noise(gen)});
  }
  const auto s = sample_from_rows(rows);
  const auto c = cluster_summary(s, 2, 7);
  ASSERT_EQ(c.clusters.size(), 2u);
  std::vector<double> means;
  for (const auto& cl : c.clusters) {
    EXPECT_NEAR(cl.size_fraction, 0.5, 1e-12);
    means.push_back(cl.features[0].mean);
  }
  std::sort(means.begin(), means.end());
  EXPECT_NEAR(means[0], -1.0, 0.05);
  EXPECT_NEAR(means[1], 1.0, 0.05);
}

TEST(ClustersProperty, WeightedMeansReconstructGlobal) {
  const auto model = make_linear_model(FeatureSchema::with_default_names(4),
                                       {{1, -2, 0.5, 3}, 0.0, true});
  const auto src = ReferenceSource::uniform(
      model->schema(), std::vector<FeatureDomain>(4, FeatureDomain::range(-2, 2)));
  const auto s = attribute_distribution(model, {0.5, 0.5, -1, 1}, src,
                                        EstimatorSpec::permutation(6), 300, 17);
  const auto g = mean_with_ci(s);
  for (int k : {1, 2, 3, 5, 8}) {
    const auto c = cluster_summary(s, k, 42);
    for (int i = 0; i < 4; ++i) {
      double total = 0.0;
      for (const auto& cl : c.clusters) total += cl.size_fraction * cl.features[i].mean;
      EXPECT_NEAR(total, g.features[i].mean, 1e-9);
    }
    double base = 0.0;
    for (const auto& cl : c.clusters) base += cl.size_fraction * cl.mean_baseline;
    EXPECT_NEAR(base, g.mean_baseline, 1e-9);
  }
}

TEST(KMeans, DeterministicForSeed) {
  std::vector<std::vector<double>> pts;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) pts.push_back({u(gen), u(gen)});
  const std::vector<double> w(100, 0.01);
  const auto a = kmeans(pts, w, 4, 3);
  const auto b = kmeans(pts, w, 4, 3);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_TRUE(a.converged);
}

TEST(Insensitivity, ToyModels) {
  const std::vector<std::vector<double>> domain = {{0, 1}, {0, 1}};
  EXPECT_EQ(insensitivity_audit(*f_male(), domain), (std::vector<int>{1}));
  EXPECT_TRUE(insensitivity_audit(*f_both(), domain).empty());
  const auto constant =
      make_function_model(toy_schema(), [](std::span<const double>) { return 0.3; }, "c");
  EXPECT_EQ(insensitivity_audit(*constant, domain), (std::vector<int>{0, 1}));
}

TEST(InsensitivityProperty, IrrelevantFeatureRowsAreZero) {
  // x2 is planted irrelevant.
  const auto schema = FeatureSchema({"a", "b", "c"}, std::vector<FeatureKind>(3, FeatureKind::kDiscrete));
  const auto model = make_function_model(
      schema, [](std::span<const double> x) { return x[0] * x[1] + 2 * x[0] - x[1]; }, "planted");
  const std::vector<std::vector<double>> domain = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  ASSERT_EQ(insensitivity_audit(*model, domain), (std::vector<int>{2}));
  const auto src = ReferenceSource::uniform(
      schema, {FeatureDomain::values({0, 1, 2}), FeatureDomain::values({0, 1, 2}),
               FeatureDomain::values({0, 1, 2})});
  for (const char* est : {"exact", "permutation:5", "coalition:5", "wls"}) {
    const auto s = attribute_distribution(model, {2, 1, 0}, src, EstimatorSpec::parse(est), 50, 3);
    for (const auto& row : s.rows) EXPECT_NEAR(row.per_feature[2], 0.0, 1e-12) << est;
  }
}

TEST(DiscreteDomain, RejectsContinuous) {
  EXPECT_EQ(discrete_domain(mover_dataset()), (std::vector<std::vector<double>>{{0, 1}, {0, 1}}));
  const Dataset d(FeatureSchema::with_default_names(1), {{0.5}});
  try {
    discrete_domain(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotEnumerable);
  }
}

}  // namespace
}  // namespace fae

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

#include <random>

#include <gtest/gtest.h>

#include "fae/core.h"
#include "fae/error.h"
#include "fae/rng.h"

namespace fae {
namespace {

TEST(Composite, EmptyCoalitionGivesReference) {
  EXPECT_EQ(composite_input(FeatureVector{1, 1}, FeatureVector{0, 0}, Coalition{}),
            (FeatureVector{0, 0}));
}

TEST(Composite, GrandCoalitionGivesInput) {
  EXPECT_EQ(composite_input(FeatureVector{1, 1}, FeatureVector{0, 0}, Coalition{0, 1}),
            (FeatureVector{1, 1}));
}

TEST(Composite, Mixed) {
  EXPECT_EQ(composite_input(FeatureVector{1, 1}, FeatureVector{0, 1}, Coalition{0}),
            (FeatureVector{1, 1}));
}

TEST(Composite, LengthMismatchThrows) {
  try {
    composite_input(FeatureVector{1, 1}, FeatureVector{0}, Coalition{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
}

TEST(CompositeProperty, SelfIdempotentAndLocal) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 10);
    FeatureVector x(m), r(m);
    for (int i = 0; i < m; ++i) {
      x[i] = u(gen);
      r[i] = u(gen);
    }
    const Coalition s(gen() & ((std::uint64_t{1} << m) - 1));
    EXPECT_EQ(composite_input(x, x, s), x);
    const auto z = composite_input(x, r, s);
    EXPECT_EQ(composite_input(z, r, s), z);
    for (int i = 0; i < m; ++i) {
      const auto zi = composite_input(x, r, s.with(i));
      for (int j = 0; j < m; ++j) {
        if (j != i) EXPECT_EQ(zi[j], z[j]);
      }
    }
  }
}

TEST(Coalition, SetAlgebra) {
  Coalition s{0, 2};
  EXPECT_TRUE(s.contains(0));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.with(1), Coalition::grand(3));
  EXPECT_EQ(s.without(0), Coalition{2});
  EXPECT_EQ(s.complement(3), Coalition{1});
  EXPECT_EQ(s.members(), (std::vector<int>{0, 2}));
  EXPECT_EQ(s.to_string(), "{0,2}");
  EXPECT_EQ(Coalition::grand(64).size(), 64);
  EXPECT_TRUE(Coalition::empty_set().empty());
}

TEST(Schema, Validation) {
  EXPECT_THROW(FeatureSchema({"a", "a"}, {FeatureKind::kDiscrete, FeatureKind::kDiscrete}),
               Error);
  EXPECT_THROW(FeatureSchema({}, {}), Error);
  EXPECT_THROW(FeatureSchema::with_default_names(65), Error);
  const auto s = FeatureSchema::with_default_names(3);
  EXPECT_EQ(s.name(2), "x2");
  EXPECT_EQ(s.index_of("x1"), 1);
  EXPECT_FALSE(s.index_of("nope").has_value());
  EXPECT_THROW(s.check(FeatureVector{1, 2}), Error);
  EXPECT_THROW(s.check(FeatureVector{1, 2, std::nan("")}), Error);
  EXPECT_NO_THROW(s.check(FeatureVector{1, 2, 3}));
}

TEST(Attribution, Total) {
  AttributionVector a{0.25, {0.375, 0.375}};
  EXPECT_DOUBLE_EQ(a.total(), 1.0);
}

TEST(Rng, DeterministicAndIndependentStreams) {
  CounterRng a(42), b(42), c(derive_seed(42, 1));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(CounterRng(42).next(), c.next());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
}

TEST(Rng, UniformAndBelowRanges) {
  CounterRng r(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    counts[r.below(7)]++;
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, ShuffleIsPermutation) {
  CounterRng r(3);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  shuffle(v, r);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(Errors, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorKind::kConfig), 2);
  EXPECT_EQ(exit_code(ErrorKind::kParse), 3);
  EXPECT_EQ(exit_code(ErrorKind::kEmptyContrastClass), 3);
  EXPECT_EQ(exit_code(ErrorKind::kModel), 4);
  EXPECT_EQ(exit_code(ErrorKind::kSize), 5);
  EXPECT_EQ(exit_code(ErrorKind::kMismatch), 6);
  EXPECT_STREQ(error_class_name(ErrorKind::kEmptyContrastClass), "empty_contrast_class");
}

}  // namespace
}  // namespace fae

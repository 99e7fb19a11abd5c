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

#ifndef FAE_KMEANS_H_
#define FAE_KMEANS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace fae {

struct KMeansOptions {
  int max_iterations = 300;
  // Lloyd iterations stop once no centroid moves farther than this.
  double tolerance = 1e-8;
};

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignment;
  int iterations = 0;
  bool converged = false;
};

// Weighted k-means on `points` (all the same dimension) with k-means++
// seeding. Deterministic for a given seed. Clusters that become empty are
// re-seeded with the point farthest from its centroid among clusters that
// have at least two members, so every cluster is non-empty when k <= N.
KMeansResult kmeans(std::span<const std::vector<double>> points,
                    std::span<const double> weights, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace fae

#endif  // FAE_KMEANS_H_

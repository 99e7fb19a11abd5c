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

#include "fae/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fae/error.h"
#include "fae/rng.h"

namespace fae {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

std::vector<std::vector<double>> plus_plus_seeds(std::span<const std::vector<double>> points,
                                                 std::span<const double> weights, int k,
                                                 CounterRng& rng) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> centroids;
  std::vector<bool> taken(n, false);
  std::vector<double> cumulative(n);
  auto draw = [&](std::span<const double> mass) -> std::size_t {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += mass[i];
      cumulative[i] = acc;
    }
    if (acc <= 0.0) {
      // All remaining mass sits on chosen centroids: take the first free point.
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i]) return i;
      }
      return 0;
    }
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(n - 1)));
    while (idx > 0 && mass[idx] <= 0.0) --idx;
    return idx;
  };

  const std::size_t first = draw(weights);
  taken[first] = true;
  centroids.push_back(points[first]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);
  std::vector<double> mass(n);
  while (static_cast<int>(centroids.size()) < k) {
    for (std::size_t i = 0; i < n; ++i) mass[i] = taken[i] ? 0.0 : weights[i] * d2[i];
    const std::size_t next = draw(mass);
    taken[next] = true;
    centroids.push_back(points[next]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(std::span<const std::vector<double>> points,
                    std::span<const double> weights, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
  const std::size_t n = points.size();
  if (k < 1) throw Error(ErrorKind::kSize, "k-means needs k >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw Error(ErrorKind::kSize, "k-means needs k <= N (k=" + std::to_string(k) +
                                      ", N=" + std::to_string(n) + ")");
  }
  if (weights.size() != n) throw Error(ErrorKind::kSchema, "k-means weights differ in length");
  const std::size_t dim = points[0].size();

  CounterRng rng(seed);
  KMeansResult result;
  result.centroids = plus_plus_seeds(points, weights, k, rng);
  result.assignment.assign(n, 0);

  std::vector<double> distance(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], result.centroids[c]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      result.assignment[i] = arg;
      distance[i] = best;
    }

    std::vector<std::size_t> members(k, 0);
    for (int a : result.assignment) ++members[a];
    for (int c = 0; c < k; ++c) {
      if (members[c] > 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (members[result.assignment[i]] < 2) continue;
        if (far == n || distance[i] > distance[far]) far = i;
      }
      --members[result.assignment[far]];
      result.assignment[far] = c;
      distance[far] = 0.0;
      ++members[c];
    }

    std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
    std::vector<double> mass(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = result.assignment[i];
      mass[c] += weights[i];
      ++count[c];
      for (std::size_t d = 0; d < dim; ++d) next[c][d] += weights[i] * points[i][d];
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        for (double& x : next[c]) x /= mass[c];
      } else {
        // Only zero-weight members: use their plain average.
        std::fill(next[c].begin(), next[c].end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          if (result.assignment[i] != c) continue;
          for (std::size_t d = 0; d < dim; ++d) next[c][d] += points[i][d] / count[c];
        }
      }
      shift = std::max(shift, std::sqrt(squared_distance(next[c], result.centroids[c])));
    }
    result.centroids = std::move(next);
    if (shift < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace fae

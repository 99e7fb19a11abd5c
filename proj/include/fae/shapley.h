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

#ifndef FAE_SHAPLEY_H_
#define FAE_SHAPLEY_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fae/games.h"

namespace fae {

// Exhaustive enumeration is refused above this many players by default.
inline constexpr int kDefaultExactCap = 25;

// Result of a sampling estimator: per-player means and the sample standard
// deviation of the per-sample contributions.
struct Estimate {
  std::vector<double> phi;
  std::vector<double> ssd;
  std::size_t samples = 0;
};

// Shapley values by the weighted sum over all 2^M coalitions.
std::vector<double> exact_shapley(const Game& game, int cap = kDefaultExactCap);

// Mean marginal contribution over `k` uniformly drawn orderings.
Estimate permutation_shapley(const Game& game, std::size_t k, std::uint64_t seed);

// Same estimator over caller-chosen orderings (each a permutation of 0..M-1).
Estimate permutation_shapley_over(const Game& game,
                                  std::span<const std::vector<int>> orderings);

// Importance weight applied to a marginal contribution to a uniformly drawn
// coalition of size `s` out of the other m - 1 players:
// 2^(m-1) / (m * C(m-1, s)).
double coalition_sample_weight(int m, int s);

// For each player, averages weighted marginal contributions over `k`
// coalitions drawn uniformly from the subsets of the other players.
Estimate coalition_shapley(const Game& game, std::size_t k, std::uint64_t seed);

// Shapley kernel (m - 1) / (C(m, s) * s * (m - s)) for 0 < s < m.
double shapley_kernel_weight(int m, int s);

struct WlsFull {};
struct WlsSampled {
  std::size_t k = 0;
  // Sample coalitions proportionally to the kernel and fit unweighted.
  bool kernel_weighted = false;
};
using WlsMode = std::variant<WlsFull, WlsSampled>;

// Kernel-weighted least squares fit of v(S) ~ sum_{i in S} phi_i over
// proper coalitions, with v(empty) = 0 and sum phi = v(M) imposed exactly.
// Sampled mode without the kernel trick draws k distinct coalitions
// uniformly and weights them by the kernel.
std::vector<double> wls_shapley(const Game& game, const WlsMode& mode, std::uint64_t seed,
                                int cap = kDefaultExactCap);

class EstimatorSpec {
 public:
  enum class Kind { kExact, kPermutation, kCoalition, kWls };

  static EstimatorSpec exact(int cap = kDefaultExactCap);
  static EstimatorSpec permutation(std::size_t k);
  static EstimatorSpec coalition(std::size_t k);
  static EstimatorSpec wls_full(int cap = kDefaultExactCap);
  static EstimatorSpec wls_sampled(std::size_t k, bool kernel_weighted);

  // "exact", "permutation:<k>", "coalition:<k>", "wls", "wls:<k>",
  // "wls-kernel:<k>".
  static EstimatorSpec parse(const std::string& text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  bool full() const { return full_; }
  bool kernel_weighted() const { return kernel_weighted_; }
  int exact_cap() const { return cap_; }
  bool is_sampled() const;
  // Exact, permutation and coalition sampling are unbiased; subsampled WLS
  // has no such guarantee.
  bool known_unbiased() const;

 private:
  Kind kind_ = Kind::kExact;
  std::size_t k_ = 0;
  bool full_ = false;
  bool kernel_weighted_ = false;
  int cap_ = kDefaultExactCap;
};

// Dispatches to the estimator named by `spec`. Deterministic estimators
// report a zero ssd.
Estimate estimate_shapley(const Game& game, const EstimatorSpec& spec, std::uint64_t seed);

struct AxiomCheck {
  std::string axiom;
  bool passed = true;
  double residual = 0.0;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::vector<int> dummy_players;
  std::vector<std::pair<int, int>> interchangeable_pairs;

  bool all_passed() const;
  const AxiomCheck& check(const std::string& axiom) const;
};

struct AxiomOptions {
  double tolerance = 1e-9;
  int cap = kDefaultExactCap;
  // Seed of the random companion game used by the linearity check.
  std::uint64_t linearity_seed = 0x5eed;
  double alpha = 2.0;
  double beta = -0.5;
};

using AttributionMethod = std::function<std::vector<double>(const Game&)>;

// phi(alpha u + beta w) vs alpha phi(u) + beta phi(w) under `method`.
AxiomCheck check_linearity(const GamePtr& u, const GamePtr& w, double alpha, double beta,
                           const AttributionMethod& method, double tolerance = 1e-9);

// Efficiency, Dummy, Symmetry and Linearity for the attribution `phi` of
// `game`. Linearity combines the game with a seeded random companion game
// w: phi(alpha v + beta w) computed exactly must equal alpha phi + beta
// phi(w).
AxiomReport check_axioms(const GamePtr& game, std::span<const double> phi,
                         const AxiomOptions& options = {});

}  // namespace fae

#endif  // FAE_SHAPLEY_H_

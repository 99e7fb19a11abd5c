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

#include "fae/shapley.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "fae/error.h"
#include "fae/rng.h"

namespace fae {
namespace {

// Welford accumulator per player.
class RunningStats {
 public:
  explicit RunningStats(int m) : mean_(m, 0.0), m2_(m, 0.0) {}

  void add(int i, double x, std::size_t count) {
    const double delta = x - mean_[i];
    mean_[i] += delta / static_cast<double>(count);
    m2_[i] += delta * (x - mean_[i]);
  }

  Estimate finish(std::size_t count) const {
    Estimate e;
    e.phi = mean_;
    e.ssd.assign(mean_.size(), 0.0);
    e.samples = count;
    if (count > 1) {
      for (std::size_t i = 0; i < mean_.size(); ++i) {
        e.ssd[i] = std::sqrt(m2_[i] / static_cast<double>(count - 1));
      }
    }
    return e;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> m2_;
};

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / j;
  return std::round(c);
}

void check_cap(int m, int cap, const char* what) {
  if (m > cap) {
    throw Error(ErrorKind::kSize,
                std::string(what) + " needs " + std::to_string(m) +
                    " <= " + std::to_string(cap) +
                    " players; use the permutation, coalition or sampled WLS estimator");
  }
}

// All 2^M payoffs indexed by mask. Small games go through the memo so later
// checks can reuse the values.
std::vector<double> payoff_table(const Game& game) {
  const int m = game.arity();
  const std::uint64_t n = std::uint64_t{1} << m;
  std::vector<double> v(n);
  const bool memoize = m <= 20;
  for (std::uint64_t mask = 1; mask < n; ++mask) {
    v[mask] = memoize ? game.value(Coalition(mask)) : game.evaluate(Coalition(mask));
  }
  return v;
}

std::vector<double> shapley_from_table(int m, std::span<const double> v) {
  std::vector<double> weight(m);
  for (int s = 0; s < m; ++s) weight[s] = 1.0 / (m * binomial(m - 1, s));
  std::vector<double> phi(m, 0.0);
  const std::uint64_t n = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    const int s = std::popcount(mask);
    if (s == m) continue;
    const double w = weight[s];
    for (int i = 0; i < m; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (mask & bit) continue;
      phi[i] += w * (v[mask | bit] - v[mask]);
    }
  }
  return phi;
}

std::uint64_t proper_coalition_count(int m) {
  return m == 64 ? ~std::uint64_t{0} - 1 : (std::uint64_t{1} << m) - 2;
}

class ConstrainedFit {
 public:
  ConstrainedFit(int m, double grand_value)
      : m_(m), d_(m - 1), grand_(grand_value),
        ata_(Eigen::MatrixXd::Zero(d_, d_)), aty_(Eigen::VectorXd::Zero(d_)), row_(d_) {}

  void add(std::uint64_t mask, double payoff, double weight) {
    const double last = (mask >> (m_ - 1)) & 1U;
    for (int i = 0; i < d_; ++i) row_[i] = static_cast<double>((mask >> i) & 1U) - last;
    const double y = payoff - last * grand_;
    ata_.noalias() += weight * row_ * row_.transpose();
    aty_.noalias() += weight * y * row_;
  }

  std::vector<double> solve() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ata_, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    if (ev.size() > 0 && (ev.maxCoeff() <= 0.0 || ev.minCoeff() <= 1e-12 * ev.maxCoeff())) {
      throw Error(ErrorKind::kUnderdetermined,
                  "sampled least-squares system is rank deficient; increase k");
    }
    const Eigen::VectorXd sol = ata_.ldlt().solve(aty_);
    std::vector<double> phi(m_);
    double rest = grand_;
    for (int i = 0; i < d_; ++i) {
      phi[i] = sol[i];
      rest -= sol[i];
    }
    phi[m_ - 1] = rest;
    return phi;
  }

 private:
  int m_;
  int d_;
  double grand_;
  Eigen::MatrixXd ata_;
  Eigen::VectorXd aty_;
  Eigen::VectorXd row_;
};

}  // namespace

std::vector<double> exact_shapley(const Game& game, int cap) {
  const int m = game.arity();
  check_cap(m, std::min(cap, 30), "exact Shapley");
  const auto v = payoff_table(game);
  return shapley_from_table(m, v);
}

Estimate permutation_shapley_over(const Game& game,
                                  std::span<const std::vector<int>> orderings) {
  const int m = game.arity();
  if (orderings.empty()) throw Error(ErrorKind::kConfig, "permutation estimator needs k >= 1");
  RunningStats stats(m);
  std::vector<double> contrib(m);
  std::size_t count = 0;
  for (const auto& order : orderings) {
    if (static_cast<int>(order.size()) != m) {
      throw Error(ErrorKind::kRange, "ordering length differs from the player count");
    }
    Coalition s;
    double prev = 0.0;
    for (int p : order) {
      if (p < 0 || p >= m || s.contains(p)) {
        throw Error(ErrorKind::kRange, "ordering is not a permutation");
      }
      s = s.with(p);
      const double cur = game.value(s);
      contrib[p] = cur - prev;
      prev = cur;
    }
    ++count;
    for (int i = 0; i < m; ++i) stats.add(i, contrib[i], count);
  }
  return stats.finish(count);
}

Estimate permutation_shapley(const Game& game, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::kConfig, "permutation estimator needs k >= 1");
  const int m = game.arity();
  CounterRng rng(seed);
  std::vector<std::vector<int>> orders(k, std::vector<int>(m));
  for (auto& order : orders) {
    for (int i = 0; i < m; ++i) order[i] = i;
    shuffle(order, rng);
  }
  return permutation_shapley_over(game, orders);
}

double coalition_sample_weight(int m, int s) {
  return std::ldexp(1.0, m - 1) / (m * binomial(m - 1, s));
}

Estimate coalition_shapley(const Game& game, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::kConfig, "coalition estimator needs k >= 1");
  const int m = game.arity();
  const std::uint64_t grand = Coalition::grand(m).mask();
  std::vector<double> weight(m);
  for (int s = 0; s < m; ++s) weight[s] = coalition_sample_weight(m, s);
  RunningStats stats(m);
  for (int i = 0; i < m; ++i) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const std::uint64_t others = grand & ~(std::uint64_t{1} << i);
    for (std::size_t t = 0; t < k; ++t) {
      const Coalition s(rng.next() & others);
      const double c = weight[s.size()] * (game.value(s.with(i)) - game.value(s));
      stats.add(i, c, t + 1);
    }
  }
  return stats.finish(k);
}

double shapley_kernel_weight(int m, int s) {
  return (m - 1) / (binomial(m, s) * s * (m - s));
}

std::vector<double> wls_shapley(const Game& game, const WlsMode& mode, std::uint64_t seed,
                                int cap) {
  const int m = game.arity();
  const double grand = game.value(Coalition::grand(m));
  if (m == 1) return {grand};
  ConstrainedFit fit(m, grand);
  if (std::holds_alternative<WlsFull>(mode)) {
    check_cap(m, std::min(cap, 30), "full weighted least squares");
    std::vector<double> kernel(m);
    for (int s = 1; s < m; ++s) kernel[s] = shapley_kernel_weight(m, s);
    const std::uint64_t last = (std::uint64_t{1} << m) - 1;
    const bool memoize = m <= 20;
    for (std::uint64_t mask = 1; mask < last; ++mask) {
      const Coalition s(mask);
      fit.add(mask, memoize ? game.value(s) : game.evaluate(s), kernel[s.size()]);
    }
    return fit.solve();
  }
  const auto& sampled = std::get<WlsSampled>(mode);
  if (sampled.k < static_cast<std::size_t>(m)) {
    throw Error(ErrorKind::kConfig, "sampled weighted least squares needs k >= M");
  }
  CounterRng rng(seed);
  if (sampled.kernel_weighted) {
    // Size s drawn with probability proportional to C(m, s) * kernel(s).
    std::vector<double> cumulative(m, 0.0);
    double acc = 0.0;
    for (int s = 1; s < m; ++s) {
      acc += static_cast<double>(m - 1) / (s * (m - s));
      cumulative[s] = acc;
    }
    std::vector<int> players(m);
    for (std::size_t t = 0; t < sampled.k; ++t) {
      const double u = rng.uniform() * acc;
      int size = 1;
      while (size < m - 1 && cumulative[size] <= u) ++size;
      for (int i = 0; i < m; ++i) players[i] = i;
      std::uint64_t mask = 0;
      for (int j = 0; j < size; ++j) {
        const auto pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - j)));
        std::swap(players[j], players[pick]);
        mask |= std::uint64_t{1} << players[j];
      }
      fit.add(mask, game.value(Coalition(mask)), 1.0);
    }
    return fit.solve();
  }
  // Distinct coalitions, uniformly without replacement (Floyd's algorithm).
  const std::uint64_t total = proper_coalition_count(m);
  std::set<std::uint64_t> chosen;
  if (sampled.k >= total) {
    for (std::uint64_t j = 0; j < total; ++j) chosen.insert(j);
  } else {
    for (std::uint64_t j = total - sampled.k; j < total; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
  }
  for (std::uint64_t idx : chosen) {
    const Coalition s(idx + 1);
    fit.add(s.mask(), game.value(s), shapley_kernel_weight(m, s.size()));
  }
  return fit.solve();
}

// ---------------------------------------------------------------------------
// EstimatorSpec

EstimatorSpec EstimatorSpec::exact(int cap) {
  EstimatorSpec e;
  e.kind_ = Kind::kExact;
  e.cap_ = cap;
  return e;
}

EstimatorSpec EstimatorSpec::permutation(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kConfig, "permutation estimator needs k >= 1");
  EstimatorSpec e;
  e.kind_ = Kind::kPermutation;
  e.k_ = k;
  return e;
}

EstimatorSpec EstimatorSpec::coalition(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kConfig, "coalition estimator needs k >= 1");
  EstimatorSpec e;
  e.kind_ = Kind::kCoalition;
  e.k_ = k;
  return e;
}

EstimatorSpec EstimatorSpec::wls_full(int cap) {
  EstimatorSpec e;
  e.kind_ = Kind::kWls;
  e.full_ = true;
  e.cap_ = cap;
  return e;
}

EstimatorSpec EstimatorSpec::wls_sampled(std::size_t k, bool kernel_weighted) {
  if (k == 0) throw Error(ErrorKind::kConfig, "sampled WLS needs k >= 1");
  EstimatorSpec e;
  e.kind_ = Kind::kWls;
  e.k_ = k;
  e.kernel_weighted_ = kernel_weighted;
  return e;
}

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::size_t k = 0;
  if (colon != std::string::npos) {
    const std::string arg = text.substr(colon + 1);
    std::size_t used = 0;
    long long parsed = -1;
    try {
      parsed = std::stoll(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty() || parsed < 1) {
      throw Error(ErrorKind::kConfig, "estimator '" + text + "': k must be a positive integer");
    }
    k = static_cast<std::size_t>(parsed);
  }
  const bool has_k = colon != std::string::npos;
  if (name == "exact" && !has_k) return exact();
  if (name == "permutation" && has_k) return permutation(k);
  if (name == "coalition" && has_k) return coalition(k);
  if (name == "wls") return has_k ? wls_sampled(k, false) : wls_full();
  if (name == "wls-kernel" && has_k) return wls_sampled(k, true);
  throw Error(ErrorKind::kConfig,
              "unknown estimator '" + text +
                  "' (expected exact, permutation:<k>, coalition:<k>, wls, wls:<k>, "
                  "wls-kernel:<k>)");
}

std::string EstimatorSpec::to_string() const {
  switch (kind_) {
    case Kind::kExact: return "exact";
    case Kind::kPermutation: return "permutation:" + std::to_string(k_);
    case Kind::kCoalition: return "coalition:" + std::to_string(k_);
    case Kind::kWls:
      if (full_) return "wls";
      return (kernel_weighted_ ? "wls-kernel:" : "wls:") + std::to_string(k_);
  }
  return "unknown";
}

bool EstimatorSpec::is_sampled() const {
  return kind_ == Kind::kPermutation || kind_ == Kind::kCoalition ||
         (kind_ == Kind::kWls && !full_);
}

bool EstimatorSpec::known_unbiased() const { return kind_ != Kind::kWls || full_; }

Estimate estimate_shapley(const Game& game, const EstimatorSpec& spec, std::uint64_t seed) {
  Estimate e;
  switch (spec.kind()) {
    case EstimatorSpec::Kind::kExact:
      e.phi = exact_shapley(game, spec.exact_cap());
      break;
    case EstimatorSpec::Kind::kPermutation:
      return permutation_shapley(game, spec.k(), seed);
    case EstimatorSpec::Kind::kCoalition:
      return coalition_shapley(game, spec.k(), seed);
    case EstimatorSpec::Kind::kWls:
      if (spec.full()) {
        e.phi = wls_shapley(game, WlsFull{}, seed, spec.exact_cap());
      } else {
        e.phi = wls_shapley(game, WlsSampled{spec.k(), spec.kernel_weighted()}, seed);
      }
      break;
  }
  e.ssd.assign(e.phi.size(), 0.0);
  return e;
}

// ---------------------------------------------------------------------------
// Axioms

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(const std::string& axiom) const {
  for (const auto& c : checks) {
    if (c.axiom == axiom) return c;
  }
  throw Error(ErrorKind::kConfig, "no axiom check named '" + axiom + "'");
}

AxiomCheck check_linearity(const GamePtr& u, const GamePtr& w, double alpha, double beta,
                           const AttributionMethod& method, double tolerance) {
  const LinearCombinationGame combined(alpha, u, beta, w);
  const auto lhs = method(combined);
  const auto pu = method(*u);
  const auto pw = method(*w);
  AxiomCheck c{"linearity", true, 0.0, ""};
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double r = std::abs(lhs[i] - (alpha * pu[i] + beta * pw[i]));
    if (r > c.residual) {
      c.residual = r;
      c.witness = "player " + std::to_string(i);
    }
  }
  c.passed = c.residual <= tolerance;
  return c;
}

AxiomReport check_axioms(const GamePtr& game, std::span<const double> phi,
                         const AxiomOptions& options) {
  const int m = game->arity();
  check_cap(m, std::min(options.cap, 30), "axiom checks");
  if (static_cast<int>(phi.size()) != m) {
    throw Error(ErrorKind::kSchema, "attribution length differs from the game arity");
  }
  const auto v = payoff_table(*game);
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = options.tolerance * scale;
  const std::uint64_t n = std::uint64_t{1} << m;

  AxiomReport report;

  AxiomCheck eff{"efficiency", true, 0.0, ""};
  double sum = 0.0;
  for (double p : phi) sum += p;
  eff.residual = sum - v[n - 1];
  eff.passed = std::abs(eff.residual) <= tol;
  if (!eff.passed) {
    std::ostringstream os;
    os.precision(17);
    os << "sum(phi)=" << sum << " v(M)=" << v[n - 1];
    eff.witness = os.str();
  }
  report.checks.push_back(eff);

  AxiomCheck dummy{"dummy", true, 0.0, ""};
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    bool is_dummy = true;
    for (std::uint64_t mask = 0; mask < n && is_dummy; ++mask) {
      if (!(mask & bit)) is_dummy = std::abs(v[mask | bit] - v[mask]) <= tol;
    }
    if (!is_dummy) continue;
    report.dummy_players.push_back(i);
    if (std::abs(phi[i]) > std::abs(dummy.residual)) dummy.residual = phi[i];
    if (std::abs(phi[i]) > tol && dummy.passed) {
      dummy.passed = false;
      dummy.witness = "dummy player " + std::to_string(i) + " has nonzero attribution";
    }
  }
  report.checks.push_back(dummy);

  AxiomCheck sym{"symmetry", true, 0.0, ""};
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      const std::uint64_t bj = std::uint64_t{1} << j;
      bool same = true;
      for (std::uint64_t mask = 0; mask < n && same; ++mask) {
        if (mask & (bi | bj)) continue;
        same = std::abs(v[mask | bi] - v[mask | bj]) <= tol;
      }
      if (!same) continue;
      report.interchangeable_pairs.emplace_back(i, j);
      const double diff = phi[i] - phi[j];
      if (std::abs(diff) > std::abs(sym.residual)) sym.residual = diff;
      if (std::abs(diff) > tol && sym.passed) {
        sym.passed = false;
        sym.witness = "players " + std::to_string(i) + " and " + std::to_string(j) +
                      " are interchangeable but differ";
      }
    }
  }
  report.checks.push_back(sym);

  // Seeded companion game with payoffs uniform on [-1, 1].
  CounterRng rng(options.linearity_seed);
  std::vector<double> table(n, 0.0);
  for (std::uint64_t mask = 1; mask < n; ++mask) table[mask] = 2.0 * rng.uniform() - 1.0;
  const auto w = std::make_shared<TabularGame>(m, std::move(table));
  const LinearCombinationGame combined(options.alpha, game, options.beta, w);
  const auto lhs = exact_shapley(combined, options.cap);
  const auto pw = exact_shapley(*w, options.cap);
  AxiomCheck lin{"linearity", true, 0.0, ""};
  for (int i = 0; i < m; ++i) {
    const double r = lhs[i] - (options.alpha * phi[i] + options.beta * pw[i]);
    if (std::abs(r) > std::abs(lin.residual)) {
      lin.residual = r;
      lin.witness = "player " + std::to_string(i);
    }
  }
  lin.passed = std::abs(lin.residual) <= tol * (1.0 + std::abs(options.alpha) + std::abs(options.beta));
  if (lin.passed) lin.witness.clear();
  report.checks.push_back(lin);
  return report;
}

}  // namespace fae

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

#ifndef FAE_RNG_H_
#define FAE_RNG_H_

#include <cstdint>
#include <span>

namespace fae {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed for the `index`-th independent stream under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Counter-based generator: the i-th draw is mix64(key + i * golden), so a
// stream is fully determined by its seed and every platform produces the
// same sequence. Not thread-safe; give each worker its own instance.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// In-place Fisher-Yates shuffle.
void shuffle(std::span<int> values, CounterRng& rng);

}  // namespace fae

#endif  // FAE_RNG_H_

// Copyright 2026 The robonlu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBONLU_RNG_HPP_
#define ROBONLU_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "robonlu/error.hpp"

namespace robonlu {

// Seeded generator with hand-rolled draw helpers. std::mt19937_64 output is
// pinned by the standard, while the std distributions are not, so every draw
// path goes through the helpers below and results are reproducible across
// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). Modulo bias is negligible for the sizes used
  // here (lexicons, templates, datasets).
  std::size_t index(std::size_t n) {
    if (n == 0) throw ArgumentError("Rng::index: n must be positive");
    return static_cast<std::size_t>(next_u64() % n);
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = index(i + 1);
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace robonlu

#endif  // ROBONLU_RNG_HPP_

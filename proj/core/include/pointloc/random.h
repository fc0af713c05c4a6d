// Copyright 2026 The pointloc Authors. All Rights Reserved.
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

#ifndef POINTLOC_RANDOM_H_
#define POINTLOC_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pointloc {

// Counter-based generator: draw i is splitmix64(key + i * golden_gamma), so
// any draw can be reproduced from (key, i) alone. Gaussians use the
// Box-Muller transform on two consecutive uniform draws and return both
// outputs of the pair.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream keyed by (this key, tag). Does not advance *this.
  Rng derive(uint64_t tag) const;

  uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  size_t below(size_t n);
  // Two independent N(0, 1) samples.
  std::pair<double, double> gaussian_pair();
  double gaussian() { return gaussian_pair().first; }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

  // Fisher-Yates, iterating from the back.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

  // k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<size_t> sample_without_replacement(size_t n, size_t k);

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

uint64_t splitmix64(uint64_t x);

}  // namespace pointloc

#endif  // POINTLOC_RANDOM_H_

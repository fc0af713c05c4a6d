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

#include "pointloc/random.h"

#include <cmath>
#include <numbers>

namespace pointloc {
namespace {

constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace

uint64_t splitmix64(uint64_t x) {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed) : key_(splitmix64(seed)) {}

Rng Rng::derive(uint64_t tag) const {
  Rng child(0);
  child.key_ = splitmix64(key_ ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL));
  return child;
}

uint64_t Rng::next_u64() {
  return splitmix64(key_ + (counter_++) * kGoldenGamma);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

size_t Rng::below(size_t n) {
  // Multiply-shift; the bias is below 2^-40 for any n used here.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next_u64()) * static_cast<uint64_t>(n);
  return static_cast<size_t>(wide >> 64);
}

std::pair<double, double> Rng::gaussian_pair() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::vector<size_t> Rng::sample_without_replacement(size_t n, size_t k) {
  if (k > n) k = n;
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace pointloc

// Copyright 2026 The procauction Authors.
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "procauction/seller_set.hpp"

namespace procauction {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v + 0x632be59bd9b4e019ULL));
}

// Maps a 64-bit hash to [0, 1) using its top 53 bits.
inline constexpr double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Seed shared by an allocation run and all of its payment re-runs. Every
// derived quantity is a pure function of (seed, round), so two runs with the
// same seed see the same random draws no matter what the bids are.
class RandomSeed {
 public:
  constexpr RandomSeed() = default;
  constexpr explicit RandomSeed(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  std::mt19937_64 stream(std::uint64_t salt) const {
    return std::mt19937_64(hash_combine(value_, salt));
  }

  RandomSeed derive(std::uint64_t index) const {
    return RandomSeed(hash_combine(value_, index));
  }

  // `size` distinct sellers drawn uniformly from [0, n) for `round`, sorted.
  std::vector<SellerId> batch(std::size_t round, std::size_t n,
                              std::size_t size) const {
    size = std::min(size, n);
    std::vector<SellerId> pool(n);
    std::iota(pool.begin(), pool.end(), SellerId{0});
    auto rng = stream(0xba7c4000ULL + round);
    for (std::size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(size);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  // r(k): the single seller drawn in `round`.
  SellerId draw(std::size_t round, std::size_t n) const {
    return batch(round, n, 1).front();
  }

  friend constexpr bool operator==(RandomSeed, RandomSeed) = default;

 private:
  std::uint64_t value_ = 0;
};

}  // namespace procauction

// Copyright 2026 The pseudoforge Authors
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

#ifndef PSEUDOFORGE_RANDOM_HPP_
#define PSEUDOFORGE_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace pseudoforge {

// Counter-based deterministic random source: Philox4x32-10 (Salmon, Moraes,
// Dror & Shaw, SC'11). The 64-bit seed forms the key; the 64-bit stream
// index occupies counter words 2..3, the running block counter words 0..1.
// Identical (seed, stream) gives an identical draw sequence on every
// platform, and distinct streams are statistically independent, which is
// what lets per-sentence streams make parallel generation order-independent.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform draw over the full 64-bit range.
  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double();

  // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

  // One Philox4x32-10 block for the given counter/key, exposed for
  // known-answer tests.
  static std::array<std::uint32_t, 4> philox_block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int cursor_ = 2;  // 2 = buffer exhausted
};

// Deterministic seed derivation for stage- and trial-scoped randomness:
// splitmix64 over the base seed combined with an FNV-1a hash of the tag.
std::uint64_t seed_mix(std::uint64_t base, std::string_view tag);
std::uint64_t seed_mix(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_RANDOM_HPP_

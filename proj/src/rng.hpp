// Copyright 2026 The quadsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random streams.
//
// Philox4x32-10 keyed by a 64-bit seed; the 128-bit counter is split into a
// 64-bit stream id and a 64-bit block index. A stream is therefore a pure
// function of (seed, stream id), which lets parallel workers derive their
// randomness per sample index with no shared state.
//
// Distributions are implemented here instead of via <random> so that draws
// are bit-identical across standard library implementations.

#include <array>
#include <cstdint>

namespace quadsynth {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(std::uint64_t key, std::uint64_t stream,
                        std::uint64_t block) noexcept;
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  /// Independent child stream. Children of distinct (stream, index) pairs
  /// never overlap with each other or with the parent.
  Rng split(std::uint64_t index) const noexcept;

  std::uint32_t next_u32() noexcept {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }
  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi) noexcept;

  /// Uniform integer in [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

  /// 128-layer ziggurat. Consumes the same entropy for every sigma, so
  /// sigma == 0 returns mean while keeping the stream aligned.
  double normal(double mean, double sigma) noexcept;

  bool bernoulli(double p) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
};

}  // namespace quadsynth

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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace quadsynth {

/// Row-major interleaved 8-bit raster.
template <int Channels>
class Raster {
 public:
  static constexpr int kChannels = Channels;

  Raster() = default;

  Raster(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

  Raster(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != checked_size(width, height)) {
      throw std::invalid_argument("raster data length does not match its dimensions");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t stride() const noexcept { return static_cast<std::size_t>(width_) * Channels; }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return data_; }

  std::uint8_t* row(int y) noexcept { return data_.data() + y * stride(); }
  const std::uint8_t* row(int y) const noexcept { return data_.data() + y * stride(); }

  std::uint8_t& at(int x, int y, int c = 0) noexcept { return row(y)[x * Channels + c]; }
  std::uint8_t at(int x, int y, int c = 0) const noexcept { return row(y)[x * Channels + c]; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) throw std::invalid_argument("raster dimensions must be >= 1");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Channels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using ImageBuffer = Raster<3>;
using Mask = Raster<1>;

inline std::uint8_t clamp_u8(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

inline std::uint8_t clamp_u8(int v) noexcept {
  return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

}  // namespace quadsynth

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

#include <array>
#include <cstdint>
#include <optional>

#include "config.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace quadsynth {

struct TransformParams {
  double cx = 1.0, cy = 1.0;
  double sx = 0.0, sy = 0.0;
  double alpha = 0.0;
  double px = 0.0, py = 0.0;
  double tx = 0.0, ty = 0.0;
};

/// M = T * P * R * S * C for the given parameters.
Homography compose_transform(const TransformParams& p);

struct SampledTransform {
  TransformParams params;
  Homography matrix;
  int attempts = 1;  // full-tuple draws consumed, including the accepted one
};

/// True iff every canonical corner keeps w > kWEps and the image quad
/// validates.
bool is_acceptable_transform(const Homography& m) noexcept;

/// Draws the five actions from cfg.transform until the composed matrix is
/// acceptable. Throws kSamplingFailure after cfg.max_resample_attempts draws.
SampledTransform sample_transform(Rng& rng, const GenConfig& cfg);

struct ScreenParams {
  double top = 0.0, bottom = 0.0, left = 0.0, right = 0.0;
  std::array<std::uint8_t, 3> color{0, 0, 0};
};

/// Present with probability cfg.screen.probability. Always consumes one
/// Bernoulli draw, then the padding and color draws when present.
std::optional<ScreenParams> sample_screen(Rng& rng, const GenConfig& cfg);

/// Scale-down-and-translate matrix that leaves the given padding fractions
/// around the image.
Homography screen_matrix(const ScreenParams& p);

}  // namespace quadsynth

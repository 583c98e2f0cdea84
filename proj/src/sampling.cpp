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

#include "sampling.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace quadsynth {

Homography compose_transform(const TransformParams& p) {
  Homography m = make_scale(p.cx, p.cy);
  m = compose(make_shear(p.sx, p.sy), m);
  m = compose(make_rotate(p.alpha), m);
  m = compose(make_perspective(p.px, p.py), m);
  return compose(make_translate(p.tx, p.ty), m);
}

bool is_acceptable_transform(const Homography& m) noexcept {
  for (double w : corner_weights(m)) {
    if (!(w > kWEps)) return false;
  }
  Quad q;
  for (int i = 0; i < 4; ++i) {
    const HomogeneousPoint h = apply_homogeneous(m, kCanonicalCorners[i]);
    q[i] = {h.x / h.w, h.y / h.w};
  }
  return validate_quad(q) == QuadValidity::kValid;
}

SampledTransform sample_transform(Rng& rng, const GenConfig& cfg) {
  const TransformConfig& t = cfg.transform;
  const int max_attempts = cfg.max_resample_attempts;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    TransformParams p;
    // |cx - cy| bound is enforced by redrawing the pair, never by clipping.
    bool pair_ok = false;
    for (int k = 0; k < max_attempts && !pair_ok; ++k) {
      p.cx = rng.uniform(t.scale.lo, t.scale.hi);
      p.cy = rng.uniform(t.scale.lo, t.scale.hi);
      pair_ok = std::abs(p.cx - p.cy) <= t.max_scale_difference;
    }
    if (!pair_ok) break;
    p.sx = rng.uniform(t.shear.lo, t.shear.hi);
    p.sy = rng.uniform(t.shear.lo, t.shear.hi);
    p.alpha = rng.uniform(t.rotation.lo, t.rotation.hi);
    p.px = rng.normal(0.0, t.perspective_sigma);
    p.py = rng.normal(0.0, t.perspective_sigma);
    p.tx = rng.normal(0.0, t.translation_sigma);
    p.ty = rng.normal(0.0, t.translation_sigma);

    if (std::abs(1.0 - p.sx * p.sy) < kDetEps) continue;
    Homography m;
    try {
      m = compose_transform(p);
    } catch (const Error&) {
      continue;
    }
    if (is_acceptable_transform(m)) return {p, m, attempt};
  }
  throw Error(ErrorCode::kSamplingFailure,
              "no acceptable transform within " + std::to_string(max_attempts) +
                  " attempts; check the transform ranges");
}

std::optional<ScreenParams> sample_screen(Rng& rng, const GenConfig& cfg) {
  if (!rng.bernoulli(cfg.screen.probability)) return std::nullopt;
  const Range& pad = cfg.screen.padding;
  ScreenParams p;
  p.top = rng.uniform(pad.lo, pad.hi);
  p.bottom = rng.uniform(pad.lo, pad.hi);
  p.left = rng.uniform(pad.lo, pad.hi);
  p.right = rng.uniform(pad.lo, pad.hi);
  for (auto& c : p.color) {
    c = static_cast<std::uint8_t>(rng.uniform_int(cfg.screen.color_min, cfg.screen.color_max));
  }
  return p;
}

Homography screen_matrix(const ScreenParams& p) {
  return Homography({1.0 - (p.left + p.right) / 2.0, 0.0, (p.left - p.right) / 2.0,
                     0.0, 1.0 - (p.top + p.bottom) / 2.0, (p.top - p.bottom) / 2.0,
                     0.0, 0.0});
}

}  // namespace quadsynth

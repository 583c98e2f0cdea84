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

#include "geometry.hpp"
#include "image.hpp"
#include "sampling.hpp"

namespace quadsynth {

/// Center of pixel (i, j) on a width x height raster, in the normalized frame.
inline Point pixel_to_normalized(double i, double j, int width, int height) noexcept {
  return {-1.0 + (2.0 * i + 1.0) / width, -1.0 + (2.0 * j + 1.0) / height};
}

/// Fractional pixel index whose center is `p`.
inline Point normalized_to_pixel(Point p, int width, int height) noexcept {
  return {((p.x + 1.0) * width - 1.0) / 2.0, ((p.y + 1.0) * height - 1.0) / 2.0};
}

/// Bilinear sample at fractional pixel index (x, y), clamp-to-edge.
void sample_bilinear(const ImageBuffer& src, double x, double y, std::uint8_t out[3]) noexcept;

struct WarpResult {
  ImageBuffer image;
  Mask mask;
};

/// Inverse-mapped projective warp: output pixel p pulls from
/// apply_point(M^-1, p). Coverage is the 2x2-supersampled fraction of
/// preimages inside the source frame; uncovered pixels are black.
/// Throws kSingular for non-invertible M.
WarpResult warp(const ImageBuffer& src, const Homography& m, int out_width, int out_height);

/// Same as warp, but `pull` maps output coordinates straight to source
/// coordinates (no inversion).
WarpResult warp_pull(const ImageBuffer& src, const Homography& pull, int out_width,
                     int out_height);

/// Per-pixel out = mask/255 * fg + (1 - mask/255) * bg, rounded. The
/// background is resampled to the foreground size when they differ.
ImageBuffer composite(const ImageBuffer& fg, const Mask& mask, const ImageBuffer& bg);

/// Shrinks `x` into its padded region and fills the padding with p.color.
ImageBuffer synthesize_screen(const ImageBuffer& x, const ScreenParams& p);

/// Undoes the projective transform `m` of a photo: output pixel p pulls from
/// apply_point(m, p). Throws kSingular for non-invertible m.
ImageBuffer rectify(const ImageBuffer& photo, const Homography& m, int out_width,
                    int out_height);

/// Bilinear resize with pixel-center alignment and clamp-to-edge borders.
ImageBuffer resample(const ImageBuffer& src, int out_width, int out_height);

/// Bilinear resize that first halves by 2x2 box averaging while the source
/// is at least twice the target, to limit aliasing on large downscales.
ImageBuffer resample_area(const ImageBuffer& src, int out_width, int out_height);

}  // namespace quadsynth

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

#include "compositor.hpp"

#include <cmath>

#include "error.hpp"

namespace quadsynth {
namespace {

inline bool inside_frame(const HomogeneousPoint& h) noexcept {
  return h.w > kWEps && std::abs(h.x) <= h.w && std::abs(h.y) <= h.w;
}

void require_invertible(const Homography& m) {
  if (!(std::abs(determinant(m)) > kDetEps)) {
    throw Error(ErrorCode::kSingular, "warp matrix is singular (|det| <= 1e-12)");
  }
}

inline void bilinear(const ImageBuffer& src, double x, double y, std::uint8_t out[3]) noexcept {
  const int w = src.width();
  const int h = src.height();
  x = x < 0.0 ? 0.0 : (x > w - 1 ? w - 1 : x);
  y = y < 0.0 ? 0.0 : (y > h - 1 ? h - 1 : y);
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = x0 + 1 < w ? x0 + 1 : x0;
  const int y1 = y0 + 1 < h ? y0 + 1 : y0;
  const double fx = x - x0;
  const double fy = y - y0;
  const std::uint8_t* r0 = src.row(y0);
  const std::uint8_t* r1 = src.row(y1);
  for (int c = 0; c < 3; ++c) {
    const double top = r0[x0 * 3 + c] + fx * (r0[x1 * 3 + c] - r0[x0 * 3 + c]);
    const double bottom = r1[x0 * 3 + c] + fx * (r1[x1 * 3 + c] - r1[x0 * 3 + c]);
    out[c] = clamp_u8(top + fy * (bottom - top));
  }
}

}  // namespace

void sample_bilinear(const ImageBuffer& src, double x, double y, std::uint8_t out[3]) noexcept {
  bilinear(src, x, y, out);
}

WarpResult warp(const ImageBuffer& src, const Homography& m, int out_width, int out_height) {
  return warp_pull(src, invert(m), out_width, out_height);
}

WarpResult warp_pull(const ImageBuffer& src, const Homography& pull, int out_width,
                     int out_height) {
  require_invertible(pull);
  WarpResult out{ImageBuffer(out_width, out_height), Mask(out_width, out_height)};
  const double half_x = 0.5 / out_width;  // a quarter pixel in normalized units
  const double half_y = 0.5 / out_height;
  const int sw = src.width();
  const int sh = src.height();

  for (int j = 0; j < out_height; ++j) {
    std::uint8_t* img_row = out.image.row(j);
    std::uint8_t* mask_row = out.mask.row(j);
    for (int i = 0; i < out_width; ++i) {
      const Point p = pixel_to_normalized(i, j, out_width, out_height);
      const int covered = inside_frame(apply_homogeneous(pull, {p.x - half_x, p.y - half_y})) +
                          inside_frame(apply_homogeneous(pull, {p.x + half_x, p.y - half_y})) +
                          inside_frame(apply_homogeneous(pull, {p.x - half_x, p.y + half_y})) +
                          inside_frame(apply_homogeneous(pull, {p.x + half_x, p.y + half_y}));
      if (covered == 0) continue;  // already black, mask 0
      mask_row[i] = static_cast<std::uint8_t>((covered * 255 + 2) / 4);
      const HomogeneousPoint h = apply_homogeneous(pull, p);
      if (!(h.w > kWEps)) continue;
      const Point s = normalized_to_pixel({h.x / h.w, h.y / h.w}, sw, sh);
      bilinear(src, s.x, s.y, img_row + 3 * i);
    }
  }
  return out;
}

ImageBuffer composite(const ImageBuffer& fg, const Mask& mask, const ImageBuffer& bg) {
  if (fg.width() != mask.width() || fg.height() != mask.height()) {
    throw Error(ErrorCode::kInvalidArgument, "composite: mask size differs from foreground");
  }
  const ImageBuffer* base = &bg;
  ImageBuffer resized;
  if (bg.width() != fg.width() || bg.height() != fg.height()) {
    resized = resample(bg, fg.width(), fg.height());
    base = &resized;
  }
  ImageBuffer out(fg.width(), fg.height());
  const auto f = fg.data();
  const auto b = base->data();
  const auto m = mask.data();
  auto o = out.data();
  for (std::size_t px = 0; px < m.size(); ++px) {
    const int a = m[px];
    for (int c = 0; c < 3; ++c) {
      const std::size_t k = px * 3 + c;
      o[k] = static_cast<std::uint8_t>((a * f[k] + (255 - a) * b[k] + 127) / 255);
    }
  }
  return out;
}

ImageBuffer synthesize_screen(const ImageBuffer& x, const ScreenParams& p) {
  const WarpResult shrunk = warp(x, screen_matrix(p), x.width(), x.height());
  ImageBuffer canvas(x.width(), x.height());
  auto d = canvas.data();
  for (std::size_t k = 0; k < d.size(); k += 3) {
    d[k] = p.color[0];
    d[k + 1] = p.color[1];
    d[k + 2] = p.color[2];
  }
  return composite(shrunk.image, shrunk.mask, canvas);
}

ImageBuffer rectify(const ImageBuffer& photo, const Homography& m, int out_width,
                    int out_height) {
  return warp_pull(photo, m, out_width, out_height).image;
}

ImageBuffer resample(const ImageBuffer& src, int out_width, int out_height) {
  ImageBuffer out(out_width, out_height);
  const double sx = static_cast<double>(src.width()) / out_width;
  const double sy = static_cast<double>(src.height()) / out_height;
  for (int j = 0; j < out_height; ++j) {
    std::uint8_t* row = out.row(j);
    const double y = (j + 0.5) * sy - 0.5;
    for (int i = 0; i < out_width; ++i) {
      bilinear(src, (i + 0.5) * sx - 0.5, y, row + 3 * i);
    }
  }
  return out;
}

ImageBuffer resample_area(const ImageBuffer& src, int out_width, int out_height) {
  ImageBuffer cur = src;
  while (cur.width() >= 2 * out_width && cur.height() >= 2 * out_height) {
    cur = resample(cur, cur.width() / 2, cur.height() / 2);
  }
  if (cur.width() == out_width && cur.height() == out_height) return cur;
  return resample(cur, out_width, out_height);
}

}  // namespace quadsynth

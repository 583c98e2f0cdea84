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

#include "perturb.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "image_io.hpp"

namespace quadsynth {
namespace {

template <typename Fn>
ImageBuffer map_bytes(const ImageBuffer& img, Fn&& fn) {
  ImageBuffer out(img.width(), img.height());
  const auto in = img.data();
  auto o = out.data();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = fn(in[k]);
  return out;
}

// Integer luma used as the degenerate image of color enhancement.
inline int luma(const std::uint8_t* px) noexcept {
  return (px[0] * 19595 + px[1] * 38470 + px[2] * 7471 + 0x8000) >> 16;
}

inline std::uint8_t blend(double degenerate, double value, double factor) noexcept {
  return clamp_u8(degenerate + factor * (value - degenerate));
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) noexcept {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double d = mx - mn;
  v = mx;
  s = mx > 0.0 ? d / mx : 0.0;
  if (d == 0.0) {
    h = 0.0;
  } else if (mx == r) {
    h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) noexcept {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r1 = c; g1 = x; break;
    case 1: r1 = x; g1 = c; break;
    case 2: g1 = c; b1 = x; break;
    case 3: g1 = x; b1 = c; break;
    case 4: r1 = x; b1 = c; break;
    default: r1 = c; b1 = x; break;
  }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

}  // namespace

ImageBuffer add_value(const ImageBuffer& img, int delta) {
  return map_bytes(img, [delta](std::uint8_t v) { return clamp_u8(v + delta); });
}

ImageBuffer multiply_value(const ImageBuffer& img, double factor) {
  std::uint8_t table[256];
  for (int v = 0; v < 256; ++v) table[v] = clamp_u8(v * factor);
  return map_bytes(img, [&table](std::uint8_t v) { return table[v]; });
}

ImageBuffer hsv_shift(const ImageBuffer& img, double hue_degrees, double saturation_delta) {
  ImageBuffer out(img.width(), img.height());
  const auto in = img.data();
  auto o = out.data();
  const double ds = saturation_delta / 255.0;
  for (std::size_t k = 0; k < in.size(); k += 3) {
    double h, s, v;
    rgb_to_hsv(in[k] / 255.0, in[k + 1] / 255.0, in[k + 2] / 255.0, h, s, v);
    h = std::fmod(h + hue_degrees, 360.0);
    if (h < 0.0) h += 360.0;
    s = std::clamp(s + ds, 0.0, 1.0);
    double r, g, b;
    hsv_to_rgb(h, s, v, r, g, b);
    o[k] = clamp_u8(r * 255.0);
    o[k + 1] = clamp_u8(g * 255.0);
    o[k + 2] = clamp_u8(b * 255.0);
  }
  return out;
}

ImageBuffer color_enhance(const ImageBuffer& img, double factor) {
  ImageBuffer out(img.width(), img.height());
  const auto in = img.data();
  auto o = out.data();
  for (std::size_t k = 0; k < in.size(); k += 3) {
    const double l = luma(&in[k]);
    for (int c = 0; c < 3; ++c) o[k + c] = blend(l, in[k + c], factor);
  }
  return out;
}

ImageBuffer brightness_enhance(const ImageBuffer& img, double factor) {
  std::uint8_t table[256];
  for (int v = 0; v < 256; ++v) table[v] = blend(0.0, v, factor);
  return map_bytes(img, [&table](std::uint8_t v) { return table[v]; });
}

ImageBuffer sharpness_enhance(const ImageBuffer& img, double factor) {
  // Degenerate image: 3x3 smoothing kernel [1 1 1; 1 5 1; 1 1 1] / 13 on the
  // interior, original pixels on the one-pixel border.
  const int w = img.width();
  const int h = img.height();
  ImageBuffer out = img;
  for (int y = 1; y + 1 < h; ++y) {
    const std::uint8_t* up = img.row(y - 1);
    const std::uint8_t* mid = img.row(y);
    const std::uint8_t* down = img.row(y + 1);
    std::uint8_t* o = out.row(y);
    for (int x = 1; x + 1 < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        const int l = (x - 1) * 3 + c, m = x * 3 + c, r = (x + 1) * 3 + c;
        const int sum = up[l] + up[m] + up[r] + mid[l] + 5 * mid[m] + mid[r] + down[l] +
                        down[m] + down[r];
        const double smooth = (sum + 6) / 13;
        o[m] = blend(smooth, mid[m], factor);
      }
    }
  }
  return out;
}

ImageBuffer average_blur(const ImageBuffer& img, int kernel) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "blur kernel must be odd and >= 1");
  }
  if (kernel == 1) return img;
  const int w = img.width();
  const int h = img.height();
  const int r = kernel / 2;
  const int area = kernel * kernel;
  // Separable box sum with clamp-to-edge: row sums first, then columns.
  std::vector<int> rows(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = img.row(y);
    int* dst = &rows[static_cast<std::size_t>(y) * w * 3];
    for (int x = 0; x < w; ++x) {
      int sum[3] = {0, 0, 0};
      for (int d = -r; d <= r; ++d) {
        const int off = std::clamp(x + d, 0, w - 1) * 3;
        sum[0] += src[off];
        sum[1] += src[off + 1];
        sum[2] += src[off + 2];
      }
      for (int c = 0; c < 3; ++c) dst[x * 3 + c] = sum[c];
    }
  }
  ImageBuffer out(w, h);
  const std::size_t stride = static_cast<std::size_t>(w) * 3;
  std::vector<int> acc(stride);
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0);
    for (int d = -r; d <= r; ++d) {
      const int* src = &rows[static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * stride];
      for (std::size_t k = 0; k < stride; ++k) acc[k] += src[k];
    }
    std::uint8_t* o = out.row(y);
    for (std::size_t k = 0; k < stride; ++k) o[k] = static_cast<std::uint8_t>((acc[k] + area / 2) / area);
  }
  return out;
}

ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma, Rng& rng) {
  ImageBuffer out(img.width(), img.height());
  const auto in = img.data();
  auto o = out.data();
  for (std::size_t k = 0; k < in.size(); ++k) o[k] = clamp_u8(in[k] + rng.normal(0.0, sigma));
  return out;
}

JpegRoundTrip jpeg_round_trip(const ImageBuffer& img, int quality) {
  JpegRoundTrip rt;
  rt.encoded = encode_jpeg(img, quality);
  rt.image = decode_image(rt.encoded);
  return rt;
}

PerturbResult apply_perturbations(const ImageBuffer& img, Rng& rng, const PerturbConfig& cfg) {
  PerturbResult res{img, {}, {}};
  if (!cfg.enabled) return res;
  PerturbTrace& t = res.trace;
  ImageBuffer& cur = res.image;

  auto fires = [&rng](bool enabled, double p) { return enabled && rng.bernoulli(p); };

  if (fires(cfg.add.enabled, cfg.add.probability)) {
    t.add = true;
    t.add_delta = static_cast<int>(
        rng.uniform_int(std::lround(cfg.add.range.lo), std::lround(cfg.add.range.hi)));
    cur = add_value(cur, t.add_delta);
  }
  if (fires(cfg.multiply.enabled, cfg.multiply.probability)) {
    t.multiply = true;
    t.multiply_factor = rng.uniform(cfg.multiply.range.lo, cfg.multiply.range.hi);
    cur = multiply_value(cur, t.multiply_factor);
  }
  if (fires(cfg.hsv.enabled, cfg.hsv.probability)) {
    t.hsv = true;
    t.hue_degrees = rng.uniform(cfg.hsv.hue_degrees.lo, cfg.hsv.hue_degrees.hi);
    t.saturation_delta = rng.uniform(cfg.hsv.saturation.lo, cfg.hsv.saturation.hi);
    cur = hsv_shift(cur, t.hue_degrees, t.saturation_delta);
  }
  if (fires(cfg.color_enhance.enabled, cfg.color_enhance.probability)) {
    t.color = true;
    t.color_factor = rng.uniform(cfg.color_enhance.range.lo, cfg.color_enhance.range.hi);
    cur = color_enhance(cur, t.color_factor);
  }
  if (fires(cfg.brightness_enhance.enabled, cfg.brightness_enhance.probability)) {
    t.brightness = true;
    t.brightness_factor =
        rng.uniform(cfg.brightness_enhance.range.lo, cfg.brightness_enhance.range.hi);
    cur = brightness_enhance(cur, t.brightness_factor);
  }
  if (fires(cfg.sharpness_enhance.enabled, cfg.sharpness_enhance.probability)) {
    t.sharpness = true;
    t.sharpness_factor =
        rng.uniform(cfg.sharpness_enhance.range.lo, cfg.sharpness_enhance.range.hi);
    cur = sharpness_enhance(cur, t.sharpness_factor);
  }
  if (fires(cfg.average_blur.enabled, cfg.average_blur.probability)) {
    t.blur = true;
    const auto& sizes = cfg.average_blur.kernel_sizes;
    t.blur_kernel = sizes[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(sizes.size()) - 1))];
    cur = average_blur(cur, t.blur_kernel);
  }
  if (fires(cfg.gaussian_noise.enabled, cfg.gaussian_noise.probability)) {
    t.noise = true;
    t.noise_sigma = rng.uniform(cfg.gaussian_noise.range.lo, cfg.gaussian_noise.range.hi);
    // Pixel noise comes from a child stream so the parent advances by a
    // fixed amount regardless of image size.
    Rng noise_rng = rng.split(0);
    cur = gaussian_noise(cur, t.noise_sigma, noise_rng);
  }
  if (fires(cfg.jpeg.enabled, cfg.jpeg.probability)) {
    t.jpeg = true;
    t.jpeg_quality = static_cast<int>(rng.uniform_int(cfg.jpeg.quality_min, cfg.jpeg.quality_max));
    JpegRoundTrip rt = jpeg_round_trip(cur, t.jpeg_quality);
    cur = std::move(rt.image);
    res.jpeg_bytes = std::move(rt.encoded);
  }
  return res;
}

}  // namespace quadsynth

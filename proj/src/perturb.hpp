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

#include <cstdint>
#include <vector>

#include "config.hpp"
#include "image.hpp"
#include "rng.hpp"

namespace quadsynth {

// Single augmentations. All clamp channel math to [0, 255] and keep the
// image dimensions.

ImageBuffer add_value(const ImageBuffer& img, int delta);
ImageBuffer multiply_value(const ImageBuffer& img, double factor);

/// Hue rotation in degrees and saturation offset on the 0..255 scale.
ImageBuffer hsv_shift(const ImageBuffer& img, double hue_degrees, double saturation_delta);

// Enhancement factors follow the usual convention: 1.0 is the identity and
// 0.0 is the degenerate image (grayscale, black, smoothed respectively).
ImageBuffer color_enhance(const ImageBuffer& img, double factor);
ImageBuffer brightness_enhance(const ImageBuffer& img, double factor);
ImageBuffer sharpness_enhance(const ImageBuffer& img, double factor);

/// k x k box mean with clamp-to-edge borders; k must be odd and >= 1.
ImageBuffer average_blur(const ImageBuffer& img, int kernel);

ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma, Rng& rng);

struct JpegRoundTrip {
  ImageBuffer image;
  std::vector<std::uint8_t> encoded;
};

JpegRoundTrip jpeg_round_trip(const ImageBuffer& img, int quality);

/// Which steps fired, with the drawn parameter of each.
struct PerturbTrace {
  bool add = false;
  int add_delta = 0;
  bool multiply = false;
  double multiply_factor = 1.0;
  bool hsv = false;
  double hue_degrees = 0.0, saturation_delta = 0.0;
  bool color = false, brightness = false, sharpness = false;
  double color_factor = 1.0, brightness_factor = 1.0, sharpness_factor = 1.0;
  bool blur = false;
  int blur_kernel = 1;
  bool noise = false;
  double noise_sigma = 0.0;
  bool jpeg = false;
  int jpeg_quality = 0;
};

struct PerturbResult {
  ImageBuffer image;
  /// Encoded bytes of the JPEG step when it fired; decoding them gives `image`.
  std::vector<std::uint8_t> jpeg_bytes;
  PerturbTrace trace;
};

/// Runs the chain add, multiply, hsv, color, brightness, sharpness, blur,
/// noise, jpeg. Each enabled step fires independently with its probability.
PerturbResult apply_perturbations(const ImageBuffer& img, Rng& rng, const PerturbConfig& cfg);

}  // namespace quadsynth

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
#include <numbers>
#include <string>
#include <vector>

namespace quadsynth {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

/// Distributions of the five elementary actions composed into M.
struct TransformConfig {
  Range scale{0.2, 0.8};
  double max_scale_difference = 0.2;
  Range shear{-0.1, 0.1};
  Range rotation{-std::numbers::pi, std::numbers::pi};
  double perspective_sigma = 0.1;
  double translation_sigma = 0.25;
};

struct ScreenConfig {
  double probability = 0.3;
  Range padding{0.0, 0.6};
  int color_min = 0;
  int color_max = 19;
};

struct Augmentation {
  bool enabled = true;
  double probability = 0.5;
  Range range;
};

struct HsvAugmentation {
  bool enabled = true;
  double probability = 0.5;
  Range hue_degrees{-10.0, 10.0};
  Range saturation{-20.0, 20.0};  // on the 0..255 scale
};

struct BlurAugmentation {
  bool enabled = true;
  double probability = 0.5;
  std::vector<int> kernel_sizes{1, 3, 5};
};

struct JpegAugmentation {
  bool enabled = true;
  double probability = 0.5;
  int quality_min = 40;
  int quality_max = 95;
};

/// Natural-perturbation chain, listed in application order.
struct PerturbConfig {
  bool enabled = true;
  Augmentation add{true, 0.5, {-30.0, 30.0}};
  Augmentation multiply{true, 0.5, {0.7, 1.3}};
  HsvAugmentation hsv;
  Augmentation color_enhance{true, 0.5, {0.6, 1.4}};
  Augmentation brightness_enhance{true, 0.5, {0.6, 1.4}};
  Augmentation sharpness_enhance{true, 0.5, {0.6, 1.4}};
  BlurAugmentation average_blur;
  Augmentation gaussian_noise{true, 0.5, {0.0, 15.0}};
  JpegAugmentation jpeg;

  /// Same chain with every augmentation switched off.
  static PerturbConfig disabled();
};

struct GenConfig {
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  int canvas_width = 224;
  int canvas_height = 224;
  int max_resample_attempts = 100;
  int output_jpeg_quality = 95;
  TransformConfig transform;
  ScreenConfig screen;
  PerturbConfig perturb;
};

/// Throws Error(kInvalidArgument) naming the first offending field.
void validate(const GenConfig& cfg);
void validate(const PerturbConfig& cfg);

/// Missing keys keep their defaults; unknown keys are rejected.
GenConfig config_from_json_text(const std::string& text);
GenConfig load_config(const std::string& path);
std::string config_to_json_text(const GenConfig& cfg, int indent = 2);

/// Sets one field addressed by a JSON pointer ("/screen/probability").
/// `value` is parsed as JSON; bare words fall back to a JSON string.
void apply_override(GenConfig& cfg, const std::string& pointer, const std::string& value);

}  // namespace quadsynth

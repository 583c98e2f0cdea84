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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace quadsynth {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + what);
}

void check_probability(double p, const std::string& name) {
  if (!(p >= 0.0 && p <= 1.0)) invalid(name + " must lie in [0, 1]");
}

void check_range(const Range& r, const std::string& name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    invalid(name + " must be a finite [lo, hi] with lo <= hi");
  }
}

void check_augmentation(const Augmentation& a, const std::string& name) {
  check_probability(a.probability, name + ".probability");
  check_range(a.range, name + ".range");
}

// Reads `key` from `obj` into `out` when present and tracks which keys were used.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    seen_.push_back(key);
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kParse, "config: bad value for " + path_ + "/" + key);
    }
  }

  void range(const char* key, Range& out) {
    std::vector<double> v{out.lo, out.hi};
    get(key, v);
    if (v.size() != 2) fail(std::string(key) + " must be [lo, hi]");
    out = {v[0], v[1]};
  }

  template <typename Fn>
  void object(const char* key, Fn&& fn) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    seen_.push_back(key);
    Reader sub(*it, path_ + "/" + key);
    fn(sub);
    sub.finish();
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      bool known = false;
      for (const auto& k : seen_) known = known || k == it.key();
      if (!known) fail("unknown key '" + it.key() + "'");
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kParse, "config: " + (path_.empty() ? "/" : path_) + ": " + what);
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string> seen_;
};

void read_augmentation(Reader& r, Augmentation& a) {
  r.get("enabled", a.enabled);
  r.get("probability", a.probability);
  r.range("range", a.range);
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

json augmentation_json(const Augmentation& a) {
  return {{"enabled", a.enabled}, {"probability", a.probability}, {"range", range_json(a.range)}};
}

json to_json_value(const GenConfig& c) {
  const TransformConfig& t = c.transform;
  const ScreenConfig& s = c.screen;
  const PerturbConfig& p = c.perturb;
  return {
      {"seed", c.seed},
      {"workers", c.workers},
      {"canvas_width", c.canvas_width},
      {"canvas_height", c.canvas_height},
      {"max_resample_attempts", c.max_resample_attempts},
      {"output_jpeg_quality", c.output_jpeg_quality},
      {"transform",
       {{"scale", range_json(t.scale)},
        {"max_scale_difference", t.max_scale_difference},
        {"shear", range_json(t.shear)},
        {"rotation", range_json(t.rotation)},
        {"perspective_sigma", t.perspective_sigma},
        {"translation_sigma", t.translation_sigma}}},
      {"screen",
       {{"probability", s.probability},
        {"padding", range_json(s.padding)},
        {"color_min", s.color_min},
        {"color_max", s.color_max}}},
      {"perturb",
       {{"enabled", p.enabled},
        {"add", augmentation_json(p.add)},
        {"multiply", augmentation_json(p.multiply)},
        {"hsv",
         {{"enabled", p.hsv.enabled},
          {"probability", p.hsv.probability},
          {"hue_degrees", range_json(p.hsv.hue_degrees)},
          {"saturation", range_json(p.hsv.saturation)}}},
        {"color_enhance", augmentation_json(p.color_enhance)},
        {"brightness_enhance", augmentation_json(p.brightness_enhance)},
        {"sharpness_enhance", augmentation_json(p.sharpness_enhance)},
        {"average_blur",
         {{"enabled", p.average_blur.enabled},
          {"probability", p.average_blur.probability},
          {"kernel_sizes", p.average_blur.kernel_sizes}}},
        {"gaussian_noise", augmentation_json(p.gaussian_noise)},
        {"jpeg",
         {{"enabled", p.jpeg.enabled},
          {"probability", p.jpeg.probability},
          {"quality_min", p.jpeg.quality_min},
          {"quality_max", p.jpeg.quality_max}}}}},
  };
}

GenConfig from_json_value(const json& root) {
  GenConfig c;
  Reader r(root, "");
  r.get("seed", c.seed);
  r.get("workers", c.workers);
  r.get("canvas_width", c.canvas_width);
  r.get("canvas_height", c.canvas_height);
  r.get("max_resample_attempts", c.max_resample_attempts);
  r.get("output_jpeg_quality", c.output_jpeg_quality);
  r.object("transform", [&](Reader& t) {
    t.range("scale", c.transform.scale);
    t.get("max_scale_difference", c.transform.max_scale_difference);
    t.range("shear", c.transform.shear);
    t.range("rotation", c.transform.rotation);
    t.get("perspective_sigma", c.transform.perspective_sigma);
    t.get("translation_sigma", c.transform.translation_sigma);
  });
  r.object("screen", [&](Reader& s) {
    s.get("probability", c.screen.probability);
    s.range("padding", c.screen.padding);
    s.get("color_min", c.screen.color_min);
    s.get("color_max", c.screen.color_max);
  });
  r.object("perturb", [&](Reader& p) {
    PerturbConfig& pc = c.perturb;
    p.get("enabled", pc.enabled);
    p.object("add", [&](Reader& a) { read_augmentation(a, pc.add); });
    p.object("multiply", [&](Reader& a) { read_augmentation(a, pc.multiply); });
    p.object("hsv", [&](Reader& a) {
      a.get("enabled", pc.hsv.enabled);
      a.get("probability", pc.hsv.probability);
      a.range("hue_degrees", pc.hsv.hue_degrees);
      a.range("saturation", pc.hsv.saturation);
    });
    p.object("color_enhance", [&](Reader& a) { read_augmentation(a, pc.color_enhance); });
    p.object("brightness_enhance", [&](Reader& a) { read_augmentation(a, pc.brightness_enhance); });
    p.object("sharpness_enhance", [&](Reader& a) { read_augmentation(a, pc.sharpness_enhance); });
    p.object("average_blur", [&](Reader& a) {
      a.get("enabled", pc.average_blur.enabled);
      a.get("probability", pc.average_blur.probability);
      a.get("kernel_sizes", pc.average_blur.kernel_sizes);
    });
    p.object("gaussian_noise", [&](Reader& a) { read_augmentation(a, pc.gaussian_noise); });
    p.object("jpeg", [&](Reader& a) {
      a.get("enabled", pc.jpeg.enabled);
      a.get("probability", pc.jpeg.probability);
      a.get("quality_min", pc.jpeg.quality_min);
      a.get("quality_max", pc.jpeg.quality_max);
    });
  });
  r.finish();
  validate(c);
  return c;
}

}  // namespace

PerturbConfig PerturbConfig::disabled() {
  PerturbConfig p;
  p.enabled = false;
  p.add.enabled = p.multiply.enabled = p.hsv.enabled = false;
  p.color_enhance.enabled = p.brightness_enhance.enabled = p.sharpness_enhance.enabled = false;
  p.average_blur.enabled = p.gaussian_noise.enabled = p.jpeg.enabled = false;
  return p;
}

void validate(const PerturbConfig& p) {
  check_augmentation(p.add, "perturb.add");
  check_augmentation(p.multiply, "perturb.multiply");
  if (p.multiply.range.lo < 0.0) invalid("perturb.multiply.range must be non-negative");
  check_probability(p.hsv.probability, "perturb.hsv.probability");
  check_range(p.hsv.hue_degrees, "perturb.hsv.hue_degrees");
  check_range(p.hsv.saturation, "perturb.hsv.saturation");
  check_augmentation(p.color_enhance, "perturb.color_enhance");
  check_augmentation(p.brightness_enhance, "perturb.brightness_enhance");
  check_augmentation(p.sharpness_enhance, "perturb.sharpness_enhance");
  check_probability(p.average_blur.probability, "perturb.average_blur.probability");
  if (p.average_blur.kernel_sizes.empty()) invalid("perturb.average_blur.kernel_sizes is empty");
  for (int k : p.average_blur.kernel_sizes) {
    if (k < 1 || k % 2 == 0) invalid("perturb.average_blur kernel sizes must be odd and >= 1");
  }
  check_augmentation(p.gaussian_noise, "perturb.gaussian_noise");
  if (p.gaussian_noise.range.lo < 0.0) invalid("perturb.gaussian_noise sigma must be >= 0");
  check_probability(p.jpeg.probability, "perturb.jpeg.probability");
  if (p.jpeg.quality_min < 1 || p.jpeg.quality_max > 100 || p.jpeg.quality_min > p.jpeg.quality_max) {
    invalid("perturb.jpeg quality must satisfy 1 <= min <= max <= 100");
  }
}

void validate(const GenConfig& c) {
  if (c.workers < 0) invalid("workers must be >= 0");
  if (c.canvas_width < 1 || c.canvas_height < 1) invalid("canvas dimensions must be >= 1");
  if (c.max_resample_attempts < 1) invalid("max_resample_attempts must be >= 1");
  if (c.output_jpeg_quality < 1 || c.output_jpeg_quality > 100) {
    invalid("output_jpeg_quality must lie in [1, 100]");
  }
  const TransformConfig& t = c.transform;
  check_range(t.scale, "transform.scale");
  if (t.scale.lo <= 0.0) invalid("transform.scale must be positive");
  if (!(t.max_scale_difference >= 0.0)) invalid("transform.max_scale_difference must be >= 0");
  check_range(t.shear, "transform.shear");
  check_range(t.rotation, "transform.rotation");
  if (!(t.perspective_sigma >= 0.0) || !std::isfinite(t.perspective_sigma)) {
    invalid("transform.perspective_sigma must be finite and >= 0");
  }
  if (!(t.translation_sigma >= 0.0) || !std::isfinite(t.translation_sigma)) {
    invalid("transform.translation_sigma must be finite and >= 0");
  }
  check_probability(c.screen.probability, "screen.probability");
  check_range(c.screen.padding, "screen.padding");
  if (c.screen.padding.lo < 0.0 || c.screen.padding.hi > 0.6) {
    invalid("screen.padding must lie within [0, 0.6]");
  }
  if (c.screen.color_min < 0 || c.screen.color_max > 255 || c.screen.color_min > c.screen.color_max) {
    invalid("screen color bounds must satisfy 0 <= min <= max <= 255");
  }
  validate(c.perturb);
}

GenConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return from_json_value(root);
}

GenConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const GenConfig& cfg, int indent) {
  return to_json_value(cfg).dump(indent);
}

void apply_override(GenConfig& cfg, const std::string& pointer, const std::string& value) {
  json root = to_json_value(cfg);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  try {
    const json::json_pointer ptr(pointer);
    if (!root.contains(ptr)) {
      throw Error(ErrorCode::kInvalidArgument, "config: unknown key " + pointer);
    }
    root[ptr] = parsed;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "config: bad key " + pointer + ": " + e.what());
  }
  cfg = from_json_value(root);
}

}  // namespace quadsynth

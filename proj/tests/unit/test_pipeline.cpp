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

#include <doctest.h>
#include <png.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "compositor.hpp"
#include "config.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"
#include "support/oracles.hpp"

using namespace quadsynth;
using namespace quadsynth::testing;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "quadsynth_test_pipeline" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GenConfig quiet_config() {
  GenConfig cfg;
  cfg.perturb = PerturbConfig::disabled();
  cfg.workers = 1;
  return cfg;
}

/// Color-coded disks at (+-0.6, +-0.6) on a gray field.
constexpr double kFiducial = 0.6;
const std::array<std::array<std::uint8_t, 3>, 4> kFiducialColors{
    {{255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 0}}};

ImageBuffer fiducial_image(int size) {
  ImageBuffer img(size, size, 60);
  for (int k = 0; k < 4; ++k) {
    const Point c{kCanonicalCorners[k].x * kFiducial, kCanonicalCorners[k].y * kFiducial};
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const Point p = pixel_to_normalized(x, y, size, size);
        if (std::hypot(p.x - c.x, p.y - c.y) < 0.12) {
          for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = kFiducialColors[k][ch];
        }
      }
  }
  return img;
}

/// Color excess of disk k at a pixel; faint tints (dark screen padding)
/// are ignored.
double fiducial_weight(const ImageBuffer& img, int x, int y, int k) {
  const int r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
  int excess = 0;
  switch (k) {
    case 0: excess = r - std::max(g, b); break;
    case 1: excess = g - std::max(r, b); break;
    case 2: excess = b - std::max(r, g); break;
    default: excess = std::min(r, g) - b; break;
  }
  return excess > 40 ? excess : 0;
}

bool write_gray_png(const fs::path& path, int w, int h, std::uint8_t value) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h), value);
  return png_image_write_to_file(&image, path.c_str(), 0, px.data(), 0, nullptr) != 0;
}

}  // namespace

TEST_CASE("identity transform without screen or perturbation reproduces the foreground") {
  GenConfig cfg = quiet_config();
  cfg.screen.probability = 0.0;
  cfg.transform.scale = {1.0, 1.0};
  cfg.transform.shear = {0.0, 0.0};
  cfg.transform.rotation = {0.0, 0.0};
  cfg.transform.perspective_sigma = 0.0;
  cfg.transform.translation_sigma = 0.0;
  cfg.canvas_width = 96;
  cfg.canvas_height = 80;
  const ImageBuffer fg = smooth_pattern(96, 80);
  const ImageBuffer bg = smooth_pattern(96, 80, 2);
  SampleStreams s = SampleStreams::for_index(1, 0);
  const GeneratedSample out = generate_sample(fg, bg, s, cfg);
  CHECK(out.matrix == Homography());
  CHECK(out.photo == fg);
  CHECK_FALSE(out.screen_used);
}

TEST_CASE("zero-padding screen matches the screen-free path byte for byte") {
  GenConfig off = quiet_config();
  off.perturb = PerturbConfig();  // keep perturbations: streams are separate
  off.screen.probability = 0.0;
  GenConfig on = off;
  on.screen.probability = 1.0;
  on.screen.padding = {0.0, 0.0};
  on.screen.color_max = 0;

  const SourceSet src = SourceSet::synthetic(128, 128, 3);
  off.canvas_width = off.canvas_height = on.canvas_width = on.canvas_height = 128;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Sample a = render_sample(src, off, i);
    const Sample b = render_sample(src, on, i);
    REQUIRE(b.content.screen_used);
    REQUIRE(a.content.matrix == b.content.matrix);
    REQUIRE(a.content.photo == b.content.photo);
  }
}

TEST_CASE("fiducials land where the ground-truth matrix puts them") {
  GenConfig cfg = quiet_config();
  cfg.canvas_width = cfg.canvas_height = 448;
  cfg.screen.probability = 1.0;
  const ImageBuffer fg = fiducial_image(448);
  const ImageBuffer bg(448, 448, 0);
  int checked = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    SampleStreams s = SampleStreams::for_index(5, i);
    const GeneratedSample out = generate_sample(fg, bg, s, cfg);
    REQUIRE(out.screen_used);
    for (int k = 0; k < 4; ++k) {
      const Point c{kCanonicalCorners[k].x * kFiducial, kCanonicalCorners[k].y * kFiducial};
      const Point want = normalized_to_pixel(apply_point(out.matrix, c), 448, 448);
      // Skip disks that may be clipped by the canvas border.
      if (want.x < 40 || want.y < 40 || want.x > 407 || want.y > 407) continue;
      double sw = 0, sx = 0, sy = 0;
      for (int y = 0; y < 448; ++y)
        for (int x = 0; x < 448; ++x) {
          const double wgt = fiducial_weight(out.photo, x, y, k);
          sw += wgt;
          sx += wgt * x;
          sy += wgt * y;
        }
      REQUIRE(sw > 0);
      const double off = std::hypot(sx / sw - want.x, sy / sw - want.y);
      worst = std::max(worst, off);
      ++checked;
    }
  }
  MESSAGE("worst fiducial offset " << worst << " px over " << checked);
  CHECK(checked > 60);
  CHECK(worst < 1.0);
}

TEST_CASE("rectifying by the ground truth recovers the foreground") {
  GenConfig cfg = quiet_config();
  const SourceSet src = SourceSet::synthetic(224, 224, 4);
  double worst = 1e9;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Sample s = render_sample(src, cfg, i);
    const ImageBuffer back = rectify(s.content.photo, s.content.matrix, 224, 224);
    worst = std::min(worst, psnr_center_visible(src.foregrounds()[s.fg_index].image, back,
                                                s.content.matrix, 224, 224));
  }
  MESSAGE("worst central PSNR " << worst << " dB");
  CHECK(worst >= 20.0);
}

TEST_CASE("render_sample is a pure function of its inputs") {
  const GenConfig cfg;
  const SourceSet src = SourceSet::synthetic(64, 64, 3);
  GenConfig small = cfg;
  small.canvas_width = small.canvas_height = 64;
  const Sample a = render_sample(src, small, 17);
  const Sample b = render_sample(src, small, 17);
  CHECK(a.content.photo == b.content.photo);
  CHECK(a.content.matrix == b.content.matrix);
  CHECK(encode_for_disk(a.content, small) == encode_for_disk(b.content, small));
  CHECK(validate_quad(quad_from_matrix(a.content.matrix)) == QuadValidity::kValid);
}

TEST_CASE("manifest records") {
  SampleRecord r;
  r.photo_path = photo_relative_path(12);
  r.theta = {1.5, 0.25, -0.125, 0.1, 0.9, 0.3, 1e-3, -2e-17};
  r.source_path = "fg/a b.png";
  r.background_path = "bg/\"q\".jpg";
  r.screen_used = true;
  r.seed_index = 12;
  CHECK(r.photo_path == "photos/00000012.jpg");
  const SampleRecord back = record_from_json_line(record_to_json_line(r));
  CHECK(back.photo_path == r.photo_path);
  CHECK(back.theta == r.theta);
  CHECK(back.source_path == r.source_path);
  CHECK(back.background_path == r.background_path);
  CHECK(back.screen_used);
  CHECK(back.seed_index == 12);
  CHECK_THROWS_AS(record_from_json_line("{\"photo_path\": 1}"), Error);
  CHECK_THROWS_AS(record_from_json_line("not json"), Error);
}

TEST_CASE("dataset generation") {
  GenConfig cfg;
  cfg.canvas_width = cfg.canvas_height = 96;
  cfg.seed = 2024;
  const SourceSet src = SourceSet::synthetic(96, 96, 3);

  SUBCASE("single sample") {
    const fs::path a = fresh_dir("one_a"), b = fresh_dir("one_b");
    const DatasetSummary s = generate_dataset(src, 1, a.string(), cfg);
    CHECK(s.written == 1);
    CHECK(fs::exists(a / "photos" / "00000000.jpg"));
    const std::string manifest = slurp(a / kManifestName);
    CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 1);
    generate_dataset(src, 1, b.string(), cfg);
    CHECK(slurp(b / kManifestName) == manifest);
    CHECK(slurp(b / "photos" / "00000000.jpg") == slurp(a / "photos" / "00000000.jpg"));
  }

  SUBCASE("output does not depend on the worker count") {
    const fs::path one = fresh_dir("w1"), eight = fresh_dir("w8");
    GenConfig c1 = cfg, c8 = cfg;
    c1.workers = 1;
    c8.workers = 8;
    generate_dataset(src, 40, one.string(), c1);
    generate_dataset(src, 40, eight.string(), c8);
    CHECK(slurp(one / kManifestName) == slurp(eight / kManifestName));
    for (std::uint64_t i = 0; i < 40; ++i) {
      const std::string rel = photo_relative_path(i);
      REQUIRE(slurp(one / rel) == slurp(eight / rel));
    }
    std::vector<std::string> problems;
    const auto records = check_manifest((one / kManifestName).string(), &problems);
    CHECK(records.size() == 40);
    CHECK(problems.empty());
    for (std::size_t i = 0; i < records.size(); ++i) REQUIRE(records[i].seed_index == i);
  }

  SUBCASE("stream equals disk") {
    const fs::path dir = fresh_dir("stream");
    generate_dataset(src, 12, dir.string(), cfg);
    const auto records = check_manifest((dir / kManifestName).string(), nullptr);
    SampleStream stream(std::make_shared<SourceSet>(src), cfg);
    for (std::uint64_t i = 0; i < 12; ++i) {
      const Sample s = stream.next();
      REQUIRE(s.content.matrix.theta() == records[i].theta);
      const std::string disk = slurp(dir / records[i].photo_path);
      const auto bytes = encode_for_disk(s.content, cfg);
      REQUIRE(disk == std::string(bytes.begin(), bytes.end()));
    }
    CHECK(stream.position() == 12);
  }

  SUBCASE("distinct seeds give distinct streams") {
    GenConfig other = cfg;
    other.seed = 2025;
    SampleStream a(std::make_shared<SourceSet>(src), cfg);
    SampleStream b(std::make_shared<SourceSet>(src), other);
    int differing = 0;
    for (int i = 0; i < 10; ++i) differing += a.next().content.photo != b.next().content.photo;
    CHECK(differing == 10);
  }

  SUBCASE("manifest check reports missing photos") {
    const fs::path dir = fresh_dir("broken");
    generate_dataset(src, 3, dir.string(), cfg);
    fs::remove(dir / photo_relative_path(1));
    std::vector<std::string> problems;
    check_manifest((dir / kManifestName).string(), &problems);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("00000001.jpg") != std::string::npos);
  }

  SUBCASE("unwritable output is fatal") {
    const fs::path dir = fresh_dir("blocked");
    std::ofstream(dir / "file") << "x";
    CHECK_THROWS_AS(generate_dataset(src, 1, (dir / "file" / "sub").string(), cfg), Error);
  }
}

TEST_CASE("source directories") {
  const fs::path fg = fresh_dir("src_fg"), bg = fresh_dir("src_bg");
  save_image(smooth_pattern(300, 200), (fg / "b.png").string());
  save_image(smooth_pattern(50, 50, 1), (fg / "a.jpg").string());
  REQUIRE(write_gray_png(fg / "c.png", 40, 30, 90));
  std::ofstream(fg / "d.jpg") << "not an image";
  std::ofstream(fg / "notes.txt") << "ignored";
  save_image(smooth_pattern(64, 64, 2), (bg / "bg.jpeg").string());

  std::ostringstream log;
  const SourceSet s = SourceSet::load(fg.string(), bg.string(), 64, 48, &log);
  REQUIRE(s.foregrounds().size() == 3);
  CHECK(s.foregrounds()[0].name == "a.jpg");
  CHECK(s.foregrounds()[1].name == "b.png");
  CHECK(s.foregrounds()[2].name == "c.png");
  CHECK(s.backgrounds().size() == 1);
  CHECK(s.skipped() == 1);
  CHECK(log.str().find("d.jpg") != std::string::npos);
  for (const auto& img : s.foregrounds()) {
    CHECK(img.image.width() == 64);
    CHECK(img.image.height() == 48);
  }
  // Grayscale input is replicated to three equal channels.
  CHECK(s.foregrounds()[2].image == ImageBuffer(64, 48, 90));

  CHECK_THROWS_AS(SourceSet::load((fg / "nope").string(), bg.string(), 64, 48), Error);
  const fs::path empty = fresh_dir("src_empty");
  CHECK_THROWS_AS(SourceSet::load(empty.string(), bg.string(), 64, 48), Error);
}

TEST_CASE("bench runs in memory") {
  GenConfig cfg;
  cfg.canvas_width = cfg.canvas_height = 64;
  cfg.workers = 2;
  const SourceSet src = SourceSet::synthetic(64, 64, 2);
  const BenchResult r = run_bench(src, 20, cfg);
  CHECK(r.samples == 20);
  CHECK(r.workers == 2);
  CHECK(r.samples_per_second > 0.0);
  CHECK(r.timings.total() > 0.0);
}

TEST_CASE("two workers scale throughput") {
  if (std::thread::hardware_concurrency() < 2) {
    MESSAGE("skipped: scaling needs at least two hardware threads");
    return;
  }
  GenConfig cfg;
  const SourceSet src = SourceSet::synthetic(224, 224, 4);
  cfg.workers = 1;
  const double one = run_bench(src, 400, cfg).samples_per_second;
  cfg.workers = 2;
  const double two = run_bench(src, 400, cfg).samples_per_second;
  CHECK(two >= 1.3 * one);
}

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
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "perturb.hpp"
#include "rng.hpp"

namespace quadsynth {

struct SourceImage {
  std::string name;  // file name relative to its source directory
  ImageBuffer image;
};

/// Decoded foreground and background pools, normalized to the canvas size
/// on load so that per-sample work depends only on the output resolution.
class SourceSet {
 public:
  SourceSet(std::vector<SourceImage> foregrounds, std::vector<SourceImage> backgrounds,
            std::size_t skipped = 0);

  /// Lists *.png / *.jpg / *.jpeg in each directory (lexicographic order).
  /// Unreadable files are skipped and reported on `log`. Throws kIo when a
  /// directory is missing or ends up with no usable image.
  static SourceSet load(const std::string& fg_dir, const std::string& bg_dir, int canvas_width,
                        int canvas_height, std::ostream* log = nullptr);

  /// Deterministic procedural stand-ins: smooth radiograph-like foregrounds
  /// and textured backgrounds.
  static SourceSet synthetic(int canvas_width, int canvas_height, int count,
                             std::uint64_t seed = 7);

  const std::vector<SourceImage>& foregrounds() const noexcept { return fg_; }
  const std::vector<SourceImage>& backgrounds() const noexcept { return bg_; }
  std::size_t skipped() const noexcept { return skipped_; }

 private:
  std::vector<SourceImage> fg_;
  std::vector<SourceImage> bg_;
  std::size_t skipped_ = 0;
};

/// Independent streams for one sample, all derived from (seed, index).
struct SampleStreams {
  Rng pick;
  Rng screen;
  Rng transform;
  Rng perturb;

  static SampleStreams for_index(std::uint64_t seed, std::uint64_t index) noexcept;
};

/// Accumulated wall time per synthesis step, in seconds.
struct StepTimings {
  double screen = 0.0;
  double transform = 0.0;
  double composite = 0.0;
  double perturb = 0.0;
  double encode = 0.0;

  StepTimings& operator+=(const StepTimings& o) noexcept;
  double total() const noexcept { return screen + transform + composite + perturb + encode; }
};

struct GeneratedSample {
  ImageBuffer photo;
  Homography matrix;  // maps the original foreground frame onto the photo
  bool screen_used = false;
  std::vector<std::uint8_t> jpeg_bytes;  // set when the JPEG perturbation fired
  PerturbTrace perturbations;
};

/// The four synthesis steps: optional screen, projective transform,
/// background composite, natural perturbations.
GeneratedSample generate_sample(const ImageBuffer& fg, const ImageBuffer& bg,
                                SampleStreams& rng, const GenConfig& cfg,
                                StepTimings* timings = nullptr);

struct Sample {
  std::uint64_t index = 0;
  std::size_t fg_index = 0;
  std::size_t bg_index = 0;
  GeneratedSample content;
};

/// Sample `index` of the dataset defined by (sources, cfg). Pure function of
/// its arguments.
Sample render_sample(const SourceSet& sources, const GenConfig& cfg, std::uint64_t index,
                     StepTimings* timings = nullptr);

/// Bytes written to disk for a sample: the perturbation JPEG when it fired,
/// otherwise a fresh encode at cfg.output_jpeg_quality.
std::vector<std::uint8_t> encode_for_disk(const GeneratedSample& s, const GenConfig& cfg);

struct SampleRecord {
  std::string photo_path;
  Theta theta{};
  std::string source_path;
  std::string background_path;
  bool screen_used = false;
  std::uint64_t seed_index = 0;
};

std::string record_to_json_line(const SampleRecord& r);
SampleRecord record_from_json_line(const std::string& line);

inline constexpr const char* kManifestName = "manifest.jsonl";
inline constexpr const char* kPhotoDir = "photos";

std::string photo_relative_path(std::uint64_t index);

struct DatasetSummary {
  std::uint64_t written = 0;
  std::uint64_t skipped_sources = 0;
  double seconds = 0.0;
  double samples_per_second = 0.0;
  std::string manifest_path;
  StepTimings timings;
};

/// Writes n photos plus the manifest under out_dir. Output bytes are
/// independent of cfg.workers. Throws kIo when out_dir is not writable.
DatasetSummary generate_dataset(const SourceSet& sources, std::uint64_t n,
                                const std::string& out_dir, const GenConfig& cfg);

/// Infinite pull-based stream equal, item by item, to the dataset that
/// generate_dataset would write for the same sources and cfg.
class SampleStream {
 public:
  SampleStream(std::shared_ptr<const SourceSet> sources, GenConfig cfg,
               std::uint64_t first_index = 0);

  Sample next();
  std::uint64_t position() const noexcept { return next_index_; }
  const GenConfig& config() const noexcept { return cfg_; }

 private:
  std::shared_ptr<const SourceSet> sources_;
  GenConfig cfg_;
  std::uint64_t next_index_;
};

struct BenchResult {
  std::uint64_t samples = 0;
  int workers = 1;
  double seconds = 0.0;
  double samples_per_second = 0.0;
  StepTimings timings;  // summed across workers
};

/// In-memory generation including the final encode, no disk writes.
BenchResult run_bench(const SourceSet& sources, std::uint64_t n, const GenConfig& cfg);

/// Reads a manifest and checks that every photo exists and every theta
/// gives a valid quad. Returns the records; problems are appended to
/// `problems`.
std::vector<SampleRecord> check_manifest(const std::string& manifest_path,
                                         std::vector<std::string>* problems);

int resolve_workers(int requested) noexcept;

}  // namespace quadsynth

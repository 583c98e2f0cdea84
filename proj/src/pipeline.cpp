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

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "compositor.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "sampling.hpp"

namespace quadsynth {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<SourceImage> load_directory(const std::string& dir, int w, int h,
                                        std::size_t& skipped, std::ostream* log) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  std::vector<SourceImage> out;
  for (const auto& path : files) {
    try {
      out.push_back({path.filename().string(), resample_area(load_image(path.string()), w, h)});
    } catch (const Error& e) {
      ++skipped;
      if (log) *log << "skipping source " << path.string() << ": " << e.what() << '\n';
    }
  }
  if (out.empty()) throw Error(ErrorCode::kIo, "no usable images in " + dir);
  return out;
}

// Runs fn(index, timings) for every index in [0, n) on `workers` threads.
// The first exception stops the pool and is rethrown.
template <typename Fn>
StepTimings run_indexed(std::uint64_t n, int workers, Fn&& fn) {
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  StepTimings total;

  auto body = [&] {
    StepTimings local;
    try {
      for (std::uint64_t i = next++; i < n && !failed; i = next++) fn(i, local);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
      failed = true;
    }
    std::lock_guard lock(mu);
    total += local;
  };

  const int count = static_cast<int>(std::min<std::uint64_t>(std::max(1, workers), std::max<std::uint64_t>(n, 1)));
  if (count == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(body);
  }
  if (error) std::rethrow_exception(error);
  return total;
}

// Manifest lines arrive in any order and are written strictly by index.
class OrderedSink {
 public:
  explicit OrderedSink(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path);
  }

  void push(std::uint64_t index, std::string line) {
    std::lock_guard lock(mu_);
    pending_.emplace(index, std::move(line));
    for (auto it = pending_.begin(); it != pending_.end() && it->first == next_;
         it = pending_.erase(it)) {
      out_ << it->second << '\n';
      ++next_;
    }
    if (!out_) throw Error(ErrorCode::kIo, "manifest write failed");
  }

  void close() {
    std::lock_guard lock(mu_);
    out_.flush();
    if (!out_) throw Error(ErrorCode::kIo, "manifest write failed");
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::map<std::uint64_t, std::string> pending_;
  std::uint64_t next_ = 0;
};

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

ImageBuffer synthetic_foreground(int w, int h, Rng& rng) {
  const double tilt = rng.uniform(-0.2, 0.2);
  const double lung_dx = rng.uniform(0.35, 0.5);
  const double lung_rx = rng.uniform(0.22, 0.3);
  const double lung_ry = rng.uniform(0.45, 0.6);
  const double spine = rng.uniform(0.08, 0.14);
  const double level = rng.uniform(0.8, 1.0);
  ImageBuffer img(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double x = -1.0 + (2.0 * i + 1.0) / w;
      const double y = -1.0 + (2.0 * j + 1.0) / h + tilt * x;
      const double body = 1.0 - smoothstep(0.6, 1.0, std::hypot(x / 0.95, y / 1.1));
      double lungs = 0.0;
      for (double side : {-1.0, 1.0}) {
        const double r = std::hypot((x - side * lung_dx) / lung_rx, (y + 0.05) / lung_ry);
        lungs = std::max(lungs, 1.0 - smoothstep(0.7, 1.0, r));
      }
      const double bone = std::exp(-(x * x) / (2.0 * spine * spine)) * 0.5;
      const double ribs = 0.08 * std::sin(9.0 * y + 1.5 * x * x) * lungs;
      const double v = level * (40.0 + 170.0 * body - 110.0 * lungs + 80.0 * bone + 60.0 * ribs);
      const std::uint8_t g = clamp_u8(v);
      img.at(i, j, 0) = img.at(i, j, 1) = img.at(i, j, 2) = g;
    }
  }
  return img;
}

ImageBuffer synthetic_background(int w, int h, Rng& rng) {
  double base[3], grad_x[3], grad_y[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(40, 215);
    grad_x[c] = rng.uniform(-60, 60);
    grad_y[c] = rng.uniform(-60, 60);
  }
  const double fx = rng.uniform(2.0, 9.0);
  const double fy = rng.uniform(2.0, 9.0);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double amp = rng.uniform(10.0, 40.0);
  ImageBuffer img(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double x = -1.0 + (2.0 * i + 1.0) / w;
      const double y = -1.0 + (2.0 * j + 1.0) / h;
      const double wave = amp * std::sin(fx * x + phase) * std::cos(fy * y);
      for (int c = 0; c < 3; ++c) {
        img.at(i, j, c) = clamp_u8(base[c] + grad_x[c] * x + grad_y[c] * y + wave * (c + 1) / 3.0);
      }
    }
  }
  return img;
}

}  // namespace

SourceSet::SourceSet(std::vector<SourceImage> foregrounds, std::vector<SourceImage> backgrounds,
                     std::size_t skipped)
    : fg_(std::move(foregrounds)), bg_(std::move(backgrounds)), skipped_(skipped) {
  if (fg_.empty() || bg_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "source set needs at least one foreground and background");
  }
}

SourceSet SourceSet::load(const std::string& fg_dir, const std::string& bg_dir,
                          int canvas_width, int canvas_height, std::ostream* log) {
  std::size_t skipped = 0;
  auto fg = load_directory(fg_dir, canvas_width, canvas_height, skipped, log);
  auto bg = load_directory(bg_dir, canvas_width, canvas_height, skipped, log);
  return SourceSet(std::move(fg), std::move(bg), skipped);
}

SourceSet SourceSet::synthetic(int canvas_width, int canvas_height, int count, std::uint64_t seed) {
  std::vector<SourceImage> fg, bg;
  for (int k = 0; k < std::max(1, count); ++k) {
    Rng rng(seed, static_cast<std::uint64_t>(k));
    char name[32];
    std::snprintf(name, sizeof(name), "synthetic_fg_%03d", k);
    fg.push_back({name, synthetic_foreground(canvas_width, canvas_height, rng)});
    std::snprintf(name, sizeof(name), "synthetic_bg_%03d", k);
    bg.push_back({name, synthetic_background(canvas_width, canvas_height, rng)});
  }
  return SourceSet(std::move(fg), std::move(bg));
}

SampleStreams SampleStreams::for_index(std::uint64_t seed, std::uint64_t index) noexcept {
  const Rng root(seed, index);
  return {root.split(1), root.split(2), root.split(3), root.split(4)};
}

StepTimings& StepTimings::operator+=(const StepTimings& o) noexcept {
  screen += o.screen;
  transform += o.transform;
  composite += o.composite;
  perturb += o.perturb;
  encode += o.encode;
  return *this;
}

GeneratedSample generate_sample(const ImageBuffer& fg, const ImageBuffer& bg,
                                SampleStreams& rng, const GenConfig& cfg, StepTimings* timings) {
  StepTimings local;
  GeneratedSample out;

  auto t0 = Clock::now();
  const std::optional<ScreenParams> screen = sample_screen(rng.screen, cfg);
  ImageBuffer screened;
  const ImageBuffer* x = &fg;
  Homography screen_m;
  if (screen) {
    screened = synthesize_screen(fg, *screen);
    x = &screened;
    screen_m = screen_matrix(*screen);
    out.screen_used = true;
  }
  local.screen = seconds_since(t0);

  t0 = Clock::now();
  out.matrix = sample_transform(rng.transform, cfg).matrix;
  // The screen already moved the content by screen_m; undo it so that
  // matrix describes the original foreground frame.
  const Homography placement = screen ? compose(out.matrix, invert(screen_m)) : out.matrix;
  WarpResult warped = warp(*x, placement, cfg.canvas_width, cfg.canvas_height);
  local.transform = seconds_since(t0);

  t0 = Clock::now();
  ImageBuffer photo = composite(warped.image, warped.mask, bg);
  local.composite = seconds_since(t0);

  t0 = Clock::now();
  PerturbResult perturbed = apply_perturbations(photo, rng.perturb, cfg.perturb);
  out.photo = std::move(perturbed.image);
  out.jpeg_bytes = std::move(perturbed.jpeg_bytes);
  out.perturbations = perturbed.trace;
  local.perturb = seconds_since(t0);

  if (timings) *timings += local;
  return out;
}

Sample render_sample(const SourceSet& sources, const GenConfig& cfg, std::uint64_t index,
                     StepTimings* timings) {
  SampleStreams rng = SampleStreams::for_index(cfg.seed, index);
  Sample s;
  s.index = index;
  s.fg_index = static_cast<std::size_t>(
      rng.pick.uniform_int(0, static_cast<std::int64_t>(sources.foregrounds().size()) - 1));
  s.bg_index = static_cast<std::size_t>(
      rng.pick.uniform_int(0, static_cast<std::int64_t>(sources.backgrounds().size()) - 1));
  s.content = generate_sample(sources.foregrounds()[s.fg_index].image,
                              sources.backgrounds()[s.bg_index].image, rng, cfg, timings);
  return s;
}

std::vector<std::uint8_t> encode_for_disk(const GeneratedSample& s, const GenConfig& cfg) {
  if (!s.jpeg_bytes.empty()) return s.jpeg_bytes;
  return encode_jpeg(s.photo, cfg.output_jpeg_quality);
}

std::string record_to_json_line(const SampleRecord& r) {
  nlohmann::json j{{"photo_path", r.photo_path},
                   {"theta", r.theta},
                   {"source_path", r.source_path},
                   {"background_path", r.background_path},
                   {"screen_used", r.screen_used},
                   {"seed_index", r.seed_index}};
  return j.dump();
}

SampleRecord record_from_json_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    SampleRecord r;
    r.photo_path = j.at("photo_path").get<std::string>();
    const auto theta = j.at("theta").get<std::vector<double>>();
    if (theta.size() != 8) throw Error(ErrorCode::kParse, "theta must have 8 values");
    std::copy(theta.begin(), theta.end(), r.theta.begin());
    r.source_path = j.at("source_path").get<std::string>();
    r.background_path = j.value("background_path", std::string());
    r.screen_used = j.at("screen_used").get<bool>();
    r.seed_index = j.at("seed_index").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad manifest record: ") + e.what());
  }
}

std::string photo_relative_path(std::uint64_t index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s/%08llu.jpg", kPhotoDir,
                static_cast<unsigned long long>(index));
  return buf;
}

int resolve_workers(int requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

DatasetSummary generate_dataset(const SourceSet& sources, std::uint64_t n,
                                const std::string& out_dir, const GenConfig& cfg) {
  validate(cfg);
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / kPhotoDir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + (root / kPhotoDir).string() + ": " + ec.message());

  DatasetSummary summary;
  summary.manifest_path = (root / kManifestName).string();
  summary.skipped_sources = sources.skipped();
  OrderedSink sink(summary.manifest_path);

  const auto t0 = Clock::now();
  summary.timings = run_indexed(n, resolve_workers(cfg.workers), [&](std::uint64_t i, StepTimings& t) {
    const Sample s = render_sample(sources, cfg, i, &t);
    const auto te = Clock::now();
    const std::string rel = photo_relative_path(i);
    write_file((root / rel).string(), encode_for_disk(s.content, cfg));
    t.encode += seconds_since(te);

    SampleRecord r;
    r.photo_path = rel;
    r.theta = s.content.matrix.theta();
    r.source_path = sources.foregrounds()[s.fg_index].name;
    r.background_path = sources.backgrounds()[s.bg_index].name;
    r.screen_used = s.content.screen_used;
    r.seed_index = i;
    sink.push(i, record_to_json_line(r));
  });
  sink.close();
  summary.seconds = seconds_since(t0);
  summary.written = n;
  summary.samples_per_second = summary.seconds > 0 ? n / summary.seconds : 0.0;
  return summary;
}

SampleStream::SampleStream(std::shared_ptr<const SourceSet> sources, GenConfig cfg,
                           std::uint64_t first_index)
    : sources_(std::move(sources)), cfg_(std::move(cfg)), next_index_(first_index) {
  if (!sources_) throw Error(ErrorCode::kInvalidArgument, "sample stream needs sources");
  validate(cfg_);
}

Sample SampleStream::next() {
  return render_sample(*sources_, cfg_, next_index_++);
}

BenchResult run_bench(const SourceSet& sources, std::uint64_t n, const GenConfig& cfg) {
  validate(cfg);
  BenchResult r;
  r.samples = n;
  r.workers = resolve_workers(cfg.workers);
  std::atomic<std::uint64_t> bytes{0};
  const auto t0 = Clock::now();
  r.timings = run_indexed(n, r.workers, [&](std::uint64_t i, StepTimings& t) {
    const Sample s = render_sample(sources, cfg, i, &t);
    const auto te = Clock::now();
    bytes += encode_for_disk(s.content, cfg).size();
    t.encode += seconds_since(te);
  });
  r.seconds = seconds_since(t0);
  r.samples_per_second = r.seconds > 0 ? n / r.seconds : 0.0;
  return r;
}

std::vector<SampleRecord> check_manifest(const std::string& manifest_path,
                                         std::vector<std::string>* problems) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + manifest_path);
  const fs::path root = fs::path(manifest_path).parent_path();
  std::vector<SampleRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SampleRecord r = record_from_json_line(line);
    if (problems) {
      const std::string tag = "record " + std::to_string(r.seed_index) + ": ";
      if (!fs::exists(root / r.photo_path)) problems->push_back(tag + "missing " + r.photo_path);
      try {
        const Homography m(r.theta);
        if (validate_quad(quad_from_matrix(m)) != QuadValidity::kValid) {
          problems->push_back(tag + "theta gives an invalid quad");
        }
      } catch (const Error& e) {
        problems->push_back(tag + e.what());
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace quadsynth

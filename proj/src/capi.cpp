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

// extern "C" surface over the C++ core. Exceptions never cross this
// boundary: every entry point maps them to a qs_status and records the
// message for qs_last_error().

#include "quadsynth/quadsynth.h"

#include <cstring>
#include <exception>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "compositor.hpp"
#include "config.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "geometry.hpp"
#include "image_io.hpp"
#include "pipeline.hpp"

#ifndef QUADSYNTH_VERSION
#define QUADSYNTH_VERSION "0.0.0"
#endif

struct qs_config {
  quadsynth::GenConfig cfg;
};

struct qs_image {
  quadsynth::ImageBuffer img;
};

struct qs_sources {
  std::shared_ptr<const quadsynth::SourceSet> set;
};

struct qs_stream {
  explicit qs_stream(quadsynth::SampleStream s) : stream(std::move(s)) {}
  quadsynth::SampleStream stream;
};

struct qs_eval_report {
  quadsynth::EvalReport report;
  std::string summary;
};

using namespace quadsynth;

namespace {

thread_local std::string g_last_error;

qs_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return QS_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDegenerate: return QS_ERR_DEGENERATE;
    case ErrorCode::kSingular: return QS_ERR_SINGULAR;
    case ErrorCode::kSamplingFailure: return QS_ERR_SAMPLING_FAILURE;
    case ErrorCode::kIo: return QS_ERR_IO;
    case ErrorCode::kParse: return QS_ERR_PARSE;
    case ErrorCode::kMismatch: return QS_ERR_MISMATCH;
  }
  return QS_ERR_INTERNAL;
}

template <typename Fn>
qs_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return QS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return QS_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Theta load_theta(const double* t) {
  require(t != nullptr, "null theta");
  Theta out;
  std::memcpy(out.data(), t, sizeof(double) * 8);
  return out;
}

void store_theta(const Homography& m, double* out) {
  std::memcpy(out, m.theta().data(), sizeof(double) * 8);
}

Quad load_quad(const double* q) {
  require(q != nullptr, "null quad");
  return {{{q[0], q[1]}, {q[2], q[3]}, {q[4], q[5]}, {q[6], q[7]}}};
}

void fill_summary(qs_summary* out, std::uint64_t written, std::uint64_t skipped, double seconds,
                  double sps, const StepTimings& t) {
  if (!out) return;
  out->written = written;
  out->skipped_sources = skipped;
  out->seconds = seconds;
  out->samples_per_second = sps;
  out->timings = {t.screen, t.transform, t.composite, t.perturb, t.encode};
}

}  // namespace

extern "C" {

const char* qs_version(void) { return QUADSYNTH_VERSION; }

const char* qs_status_string(qs_status status) {
  switch (status) {
    case QS_OK: return "ok";
    case QS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QS_ERR_DEGENERATE: return "degenerate input";
    case QS_ERR_SINGULAR: return "singular matrix";
    case QS_ERR_SAMPLING_FAILURE: return "sampling failure";
    case QS_ERR_IO: return "i/o error";
    case QS_ERR_PARSE: return "parse error";
    case QS_ERR_MISMATCH: return "id mismatch";
    case QS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qs_last_error(void) { return g_last_error.c_str(); }

qs_status qs_config_create(qs_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new qs_config{};
  });
}

qs_status qs_config_load(const char* path, qs_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto c = std::make_unique<qs_config>();
    c->cfg = load_config(path);
    *out = c.release();
  });
}

qs_status qs_config_set(qs_config* cfg, const char* pointer, const char* json_value) {
  return guarded([&] {
    require(cfg && pointer && json_value, "null argument");
    apply_override(cfg->cfg, pointer, json_value);
  });
}

qs_status qs_config_to_json(const qs_config* cfg, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(cfg != nullptr, "null config");
    const std::string text = config_to_json_text(cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (buf && capacity >= text.size() + 1) std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

void qs_config_destroy(qs_config* cfg) { delete cfg; }

qs_status qs_compose(const double a[8], const double b[8], double out[8]) {
  return guarded([&] {
    require(out != nullptr, "null output");
    store_theta(compose(Homography(load_theta(a)), Homography(load_theta(b))), out);
  });
}

qs_status qs_invert(const double theta[8], double out[8]) {
  return guarded([&] {
    require(out != nullptr, "null output");
    store_theta(invert(Homography(load_theta(theta))), out);
  });
}

qs_status qs_quad_from_matrix(const double theta[8], double quad[8]) {
  return guarded([&] {
    require(quad != nullptr, "null output");
    const Quad q = quad_from_matrix(Homography(load_theta(theta)));
    for (int i = 0; i < 4; ++i) {
      quad[2 * i] = q[i].x;
      quad[2 * i + 1] = q[i].y;
    }
  });
}

qs_status qs_matrix_from_quad(const double quad[8], double theta[8]) {
  return guarded([&] {
    require(theta != nullptr, "null output");
    store_theta(matrix_from_quad(load_quad(quad)), theta);
  });
}

qs_status qs_validate_quad(const double quad[8], qs_quad_validity* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    switch (validate_quad(load_quad(quad))) {
      case QuadValidity::kValid: *out = QS_QUAD_VALID; break;
      case QuadValidity::kNonconvex: *out = QS_QUAD_NONCONVEX; break;
      case QuadValidity::kDegenerate: *out = QS_QUAD_DEGENERATE; break;
    }
  });
}

qs_status qs_quad_iou(const double a[8], const double b[8], double* iou) {
  return guarded([&] {
    require(iou != nullptr, "null output");
    *iou = quad_iou(load_quad(a), load_quad(b));
  });
}

qs_status qs_image_create(int width, int height, const uint8_t* rgb, qs_image** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(width >= 1 && height >= 1, "image dimensions must be >= 1");
    auto img = std::make_unique<qs_image>();
    img->img = ImageBuffer(width, height);
    if (rgb) std::memcpy(img->img.data().data(), rgb, img->img.data().size());
    *out = img.release();
  });
}

qs_status qs_image_load(const char* path, qs_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto img = std::make_unique<qs_image>();
    img->img = load_image(path);
    *out = img.release();
  });
}

qs_status qs_image_save(const qs_image* img, const char* path, int jpeg_quality) {
  return guarded([&] {
    require(img && path, "null argument");
    save_image(img->img, path, jpeg_quality);
  });
}

int qs_image_width(const qs_image* img) { return img ? img->img.width() : 0; }
int qs_image_height(const qs_image* img) { return img ? img->img.height() : 0; }
const uint8_t* qs_image_data(const qs_image* img) { return img ? img->img.data().data() : nullptr; }
void qs_image_destroy(qs_image* img) { delete img; }

qs_status qs_rectify(const qs_image* photo, const double theta[8], int out_width, int out_height,
                     qs_image** out) {
  return guarded([&] {
    require(photo && out, "null argument");
    require(out_width >= 1 && out_height >= 1, "output dimensions must be >= 1");
    auto img = std::make_unique<qs_image>();
    img->img = rectify(photo->img, Homography(load_theta(theta)), out_width, out_height);
    *out = img.release();
  });
}

qs_status qs_rectify_buffer(const uint8_t* rgb, int width, int height, const double theta[8],
                            int out_width, int out_height, uint8_t* out_rgb) {
  return guarded([&] {
    require(rgb && out_rgb, "null buffer");
    require(width >= 1 && height >= 1 && out_width >= 1 && out_height >= 1,
            "dimensions must be >= 1");
    const std::size_t n = static_cast<std::size_t>(width) * height * 3;
    const ImageBuffer src(width, height, std::vector<std::uint8_t>(rgb, rgb + n));
    const ImageBuffer r = rectify(src, Homography(load_theta(theta)), out_width, out_height);
    std::memcpy(out_rgb, r.data().data(), r.data().size());
  });
}

qs_status qs_sources_load(const qs_config* cfg, const char* fg_dir, const char* bg_dir,
                          qs_sources** out) {
  return guarded([&] {
    require(cfg && fg_dir && bg_dir && out, "null argument");
    auto s = std::make_unique<qs_sources>();
    s->set = std::make_shared<const SourceSet>(SourceSet::load(
        fg_dir, bg_dir, cfg->cfg.canvas_width, cfg->cfg.canvas_height, &std::cerr));
    *out = s.release();
  });
}

qs_status qs_sources_synthetic(const qs_config* cfg, int count, qs_sources** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    require(count >= 1, "count must be >= 1");
    auto s = std::make_unique<qs_sources>();
    s->set = std::make_shared<const SourceSet>(
        SourceSet::synthetic(cfg->cfg.canvas_width, cfg->cfg.canvas_height, count));
    *out = s.release();
  });
}

size_t qs_sources_skipped(const qs_sources* sources) {
  return sources ? sources->set->skipped() : 0;
}

void qs_sources_destroy(qs_sources* sources) { delete sources; }

qs_status qs_generate_dataset(const qs_config* cfg, const qs_sources* sources, uint64_t n,
                              const char* out_dir, qs_summary* out) {
  return guarded([&] {
    require(cfg && sources && out_dir, "null argument");
    const DatasetSummary s = generate_dataset(*sources->set, n, out_dir, cfg->cfg);
    fill_summary(out, s.written, s.skipped_sources, s.seconds, s.samples_per_second, s.timings);
  });
}

qs_status qs_bench(const qs_config* cfg, const qs_sources* sources, uint64_t n, qs_summary* out) {
  return guarded([&] {
    require(cfg && sources, "null argument");
    require(n >= 1, "sample count must be >= 1");
    const BenchResult r = run_bench(*sources->set, n, cfg->cfg);
    fill_summary(out, r.samples, sources->set->skipped(), r.seconds, r.samples_per_second,
                 r.timings);
  });
}

qs_status qs_stream_open(const qs_config* cfg, const qs_sources* sources, qs_stream** out) {
  return guarded([&] {
    require(cfg && sources && out, "null argument");
    *out = new qs_stream(SampleStream(sources->set, cfg->cfg));
  });
}

void qs_stream_canvas(const qs_stream* stream, int* width, int* height) {
  if (!stream) return;
  if (width) *width = stream->stream.config().canvas_width;
  if (height) *height = stream->stream.config().canvas_height;
}

qs_status qs_stream_next_batch(qs_stream* stream, size_t batch, uint8_t* images, double* thetas) {
  return guarded([&] {
    require(stream && images && thetas, "null argument");
    const GenConfig& cfg = stream->stream.config();
    const std::size_t image_bytes = static_cast<std::size_t>(cfg.canvas_width) * cfg.canvas_height * 3;
    for (std::size_t b = 0; b < batch; ++b) {
      const Sample s = stream->stream.next();
      std::memcpy(images + b * image_bytes, s.content.photo.data().data(), image_bytes);
      store_theta(s.content.matrix, thetas + b * 8);
    }
  });
}

void qs_stream_destroy(qs_stream* stream) { delete stream; }

qs_status qs_manifest_check(const char* manifest_path, uint64_t* records, uint64_t* problems) {
  return guarded([&] {
    require(manifest_path != nullptr, "null path");
    std::vector<std::string> issues;
    const auto recs = check_manifest(manifest_path, &issues);
    for (const auto& msg : issues) std::cerr << msg << '\n';
    if (records) *records = recs.size();
    if (problems) *problems = issues.size();
  });
}

qs_status qs_evaluate_files(const char* predictions_path, const char* truth_path, uint64_t seed,
                            qs_eval_report** out) {
  return guarded([&] {
    require(predictions_path && truth_path && out, "null argument");
    BootstrapOptions opts;
    opts.seed = seed;
    auto r = std::make_unique<qs_eval_report>();
    r->report = evaluate(read_predictions(predictions_path), read_annotations(truth_path), opts);
    r->summary = format_report(r->report);
    *out = r.release();
  });
}

size_t qs_eval_report_size(const qs_eval_report* r) { return r ? r->report.n : 0; }
double qs_eval_report_mean(const qs_eval_report* r) { return r ? r->report.mean_iou : 0.0; }

void qs_eval_report_ci(const qs_eval_report* r, double* low, double* high) {
  if (!r) return;
  if (low) *low = r->report.ci_low;
  if (high) *high = r->report.ci_high;
}

double qs_eval_report_iou(const qs_eval_report* r, size_t i) {
  return r && i < r->report.ious.size() ? r->report.ious[i] : 0.0;
}

const char* qs_eval_report_id(const qs_eval_report* r, size_t i) {
  return r && i < r->report.ids.size() ? r->report.ids[i].c_str() : nullptr;
}

const char* qs_eval_report_summary(const qs_eval_report* r) {
  return r ? r->summary.c_str() : "";
}

qs_status qs_eval_report_write_json(const qs_eval_report* r, const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    const std::string text = report_to_json(r->report) + "\n";
    write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  });
}

void qs_eval_report_destroy(qs_eval_report* r) { delete r; }

}  // extern "C"

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

/*
 * quadsynth C API.
 *
 * Synthesizes projectively transformed "photo" samples with ground-truth
 * 3x3 transforms, rectifies photos by inverse warp and scores quadrilateral
 * IoU. Every handle is opaque and owned by the caller until passed to its
 * matching *_destroy function. Functions return a qs_status; on failure the
 * calling thread's qs_last_error() holds a human-readable message.
 *
 * Matrices are passed as theta[8], the row-major entries of
 *   [[t0 t1 t2] [t3 t4 t5] [t6 t7 1]].
 * Quads are passed as quad[8] = x0 y0 x1 y1 x2 y2 x3 y3, vertex i matching
 * the canonical corner i of (-1,-1) (1,-1) (1,1) (-1,1) in the normalized
 * frame (+x right, +y down).
 */
#ifndef QUADSYNTH_QUADSYNTH_H_
#define QUADSYNTH_QUADSYNTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QUADSYNTH_BUILDING)
#    define QS_API __declspec(dllexport)
#  else
#    define QS_API __declspec(dllimport)
#  endif
#else
#  define QS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_INVALID_ARGUMENT = 1,
  QS_ERR_DEGENERATE = 2,
  QS_ERR_SINGULAR = 3,
  QS_ERR_SAMPLING_FAILURE = 4,
  QS_ERR_IO = 5,
  QS_ERR_PARSE = 6,
  QS_ERR_MISMATCH = 7,
  QS_ERR_INTERNAL = 8
} qs_status;

typedef enum qs_quad_validity {
  QS_QUAD_VALID = 0,
  QS_QUAD_NONCONVEX = 1,
  QS_QUAD_DEGENERATE = 2
} qs_quad_validity;

typedef struct qs_config qs_config;
typedef struct qs_image qs_image;
typedef struct qs_sources qs_sources;
typedef struct qs_stream qs_stream;
typedef struct qs_eval_report qs_eval_report;

QS_API const char* qs_version(void);
QS_API const char* qs_status_string(qs_status status);
/* Message of the last failed call on this thread; empty if none. */
QS_API const char* qs_last_error(void);

/* ---- configuration ---------------------------------------------------- */

QS_API qs_status qs_config_create(qs_config** out);
QS_API qs_status qs_config_load(const char* path, qs_config** out);
/* Set one field by JSON pointer, e.g. ("/screen/probability", "0.5"). */
QS_API qs_status qs_config_set(qs_config* cfg, const char* pointer, const char* json_value);
/* Copies the JSON form into buf (NUL-terminated) when it fits; *needed gets
 * the full length including the terminator. */
QS_API qs_status qs_config_to_json(const qs_config* cfg, char* buf, size_t capacity,
                                   size_t* needed);
QS_API void qs_config_destroy(qs_config* cfg);

/* ---- geometry --------------------------------------------------------- */

QS_API qs_status qs_compose(const double a[8], const double b[8], double out[8]);
QS_API qs_status qs_invert(const double theta[8], double out[8]);
QS_API qs_status qs_quad_from_matrix(const double theta[8], double quad[8]);
QS_API qs_status qs_matrix_from_quad(const double quad[8], double theta[8]);
QS_API qs_status qs_validate_quad(const double quad[8], qs_quad_validity* out);
QS_API qs_status qs_quad_iou(const double a[8], const double b[8], double* iou);

/* ---- images ----------------------------------------------------------- */

QS_API qs_status qs_image_create(int width, int height, const uint8_t* rgb, qs_image** out);
QS_API qs_status qs_image_load(const char* path, qs_image** out);
/* PNG when path ends in .png, JPEG otherwise. */
QS_API qs_status qs_image_save(const qs_image* img, const char* path, int jpeg_quality);
QS_API int qs_image_width(const qs_image* img);
QS_API int qs_image_height(const qs_image* img);
/* Row-major RGB, width*height*3 bytes, valid until the image is destroyed. */
QS_API const uint8_t* qs_image_data(const qs_image* img);
QS_API void qs_image_destroy(qs_image* img);

/* Inverse projective warp of a photo by its transform (theta maps the
 * original frame onto the photo). */
QS_API qs_status qs_rectify(const qs_image* photo, const double theta[8], int out_width,
                            int out_height, qs_image** out);
/* Buffer form: out_rgb must hold out_width*out_height*3 bytes. */
QS_API qs_status qs_rectify_buffer(const uint8_t* rgb, int width, int height,
                                   const double theta[8], int out_width, int out_height,
                                   uint8_t* out_rgb);

/* ---- generation ------------------------------------------------------- */

typedef struct qs_step_timings {
  double screen;
  double transform;
  double composite;
  double perturb;
  double encode;
} qs_step_timings;

typedef struct qs_summary {
  uint64_t written;
  uint64_t skipped_sources;
  double seconds;
  double samples_per_second;
  qs_step_timings timings;
} qs_summary;

/* Loads foreground/background directories, normalized to the canvas size of
 * cfg. Skipped (unreadable) files are reported on stderr and counted. */
QS_API qs_status qs_sources_load(const qs_config* cfg, const char* fg_dir, const char* bg_dir,
                                 qs_sources** out);
/* Procedural stand-in sources, `count` of each kind. */
QS_API qs_status qs_sources_synthetic(const qs_config* cfg, int count, qs_sources** out);
QS_API size_t qs_sources_skipped(const qs_sources* sources);
QS_API void qs_sources_destroy(qs_sources* sources);

/* Writes n photos under out_dir/photos plus out_dir/manifest.jsonl. */
QS_API qs_status qs_generate_dataset(const qs_config* cfg, const qs_sources* sources,
                                     uint64_t n, const char* out_dir, qs_summary* out);

/* In-memory generation benchmark (includes the final encode). */
QS_API qs_status qs_bench(const qs_config* cfg, const qs_sources* sources, uint64_t n,
                          qs_summary* out);

/* Pull-based stream identical to the dataset generate would write. The
 * stream keeps its own copy of cfg and a reference to sources. */
QS_API qs_status qs_stream_open(const qs_config* cfg, const qs_sources* sources,
                                qs_stream** out);
QS_API void qs_stream_canvas(const qs_stream* stream, int* width, int* height);
/* Fills `batch` samples: images (batch, H, W, 3) uint8 and thetas (batch, 8). */
QS_API qs_status qs_stream_next_batch(qs_stream* stream, size_t batch, uint8_t* images,
                                      double* thetas);
QS_API void qs_stream_destroy(qs_stream* stream);

/* Verifies a manifest: every photo exists and every theta is a valid quad. */
QS_API qs_status qs_manifest_check(const char* manifest_path, uint64_t* records,
                                   uint64_t* problems);

/* ---- evaluation ------------------------------------------------------- */

QS_API qs_status qs_evaluate_files(const char* predictions_path, const char* truth_path,
                                   uint64_t seed, qs_eval_report** out);
QS_API size_t qs_eval_report_size(const qs_eval_report* r);
QS_API double qs_eval_report_mean(const qs_eval_report* r);
QS_API void qs_eval_report_ci(const qs_eval_report* r, double* low, double* high);
QS_API double qs_eval_report_iou(const qs_eval_report* r, size_t i);
QS_API const char* qs_eval_report_id(const qs_eval_report* r, size_t i);
/* "mIoU m (lo, hi) n=N" */
QS_API const char* qs_eval_report_summary(const qs_eval_report* r);
QS_API qs_status qs_eval_report_write_json(const qs_eval_report* r, const char* path);
QS_API void qs_eval_report_destroy(qs_eval_report* r);

#ifdef __cplusplus
}
#endif

#endif /* QUADSYNTH_QUADSYNTH_H_ */

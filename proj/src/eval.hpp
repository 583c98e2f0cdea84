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
#include <string>
#include <vector>

#include "geometry.hpp"

namespace quadsynth {

/// Intersection of two convex polygons by successive half-plane clipping of
/// `subject` against each edge of `clip`. Both must be convex; either winding.
std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip);

/// Exact area(a ∩ b) / area(a ∪ b) of two valid quads. Throws kDegenerate
/// when either quad fails validate_quad.
double quad_iou(const Quad& a, const Quad& b);

struct Annotation {
  std::string photo_id;
  Quad vertices;
};

struct Prediction {
  std::string photo_id;
  Homography matrix;
};

struct EvalReport {
  std::vector<std::string> ids;
  std::vector<double> ious;
  double mean_iou = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.95;
  std::size_t n = 0;
};

struct BootstrapOptions {
  int resamples = 10000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

/// Percentile bootstrap interval of the mean, widened if needed so that it
/// always contains the sample mean.
void bootstrap_mean_ci(std::span<const double> values, const BootstrapOptions& opts,
                       double& low, double& high);

/// Matches predictions to annotations by photo_id (annotation order kept).
/// A prediction whose quad is not valid scores 0. Throws kMismatch listing
/// unmatched or duplicate ids, and kInvalidArgument for an empty set.
EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<Annotation>& annotations,
                    const BootstrapOptions& opts = {});

/// Text record readers: one record per line, whitespace separated, blank
/// lines and lines starting with '#' ignored.
///   predictions: <photo_id> t1 t2 t3 t4 t5 t6 t7 t8
///   annotations: <photo_id> x1 y1 x2 y2 x3 y3 x4 y4   (normalized frame)
std::vector<Prediction> read_predictions(const std::string& path);
std::vector<Annotation> read_annotations(const std::string& path);

/// One-line summary in the "mIoU m (lo, hi)" shape.
std::string format_report(const EvalReport& r);
std::string report_to_json(const EvalReport& r);

}  // namespace quadsynth

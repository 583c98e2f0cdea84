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

#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace quadsynth {
namespace {

inline double cross(Point a, Point b, Point p) noexcept {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

std::vector<Point> counter_clockwise(std::span<const Point> poly) {
  std::vector<Point> out(poly.begin(), poly.end());
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> read_records(const std::string& path,
                                                   std::size_t fields) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::vector<std::string>> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens.size() != fields) {
      throw Error(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(fields) + " fields, got " +
                                         std::to_string(tokens.size()));
    }
    records.push_back(std::move(tokens));
  }
  return records;
}

double parse_number(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, where + ": not a finite number: '" + tok + "'");
  }
  return v;
}

}  // namespace

std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip) {
  std::vector<Point> out = counter_clockwise(subject);
  const std::vector<Point> edges = counter_clockwise(clip);
  std::vector<Point> next;
  for (std::size_t e = 0; e < edges.size() && !out.empty(); ++e) {
    const Point a = edges[e];
    const Point b = edges[(e + 1) % edges.size()];
    next.clear();
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Point p = out[i];
      const Point q = out[(i + 1) % out.size()];
      const double cp = cross(a, b, p);
      const double cq = cross(a, b, q);
      if (cp >= 0.0) next.push_back(p);
      if ((cp >= 0.0) != (cq >= 0.0)) {
        const double t = cp / (cp - cq);
        next.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    out.swap(next);
  }
  if (out.size() < 3) out.clear();
  return out;
}

double quad_iou(const Quad& a, const Quad& b) {
  for (const Quad* q : {&a, &b}) {
    const QuadValidity v = validate_quad(*q);
    if (v != QuadValidity::kValid) {
      throw Error(ErrorCode::kDegenerate, std::string("quad_iou: quad is ") + to_string(v));
    }
  }
  const double area_a = std::abs(signed_area(a));
  const double area_b = std::abs(signed_area(b));
  const std::vector<Point> inter = clip_convex(a, b);
  const double area_i = std::abs(signed_area(inter));
  const double uni = area_a + area_b - area_i;
  return std::clamp(area_i / uni, 0.0, 1.0);
}

void bootstrap_mean_ci(std::span<const double> values, const BootstrapOptions& opts,
                       double& low, double& high) {
  const std::size_t n = values.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "bootstrap of an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  const int resamples = std::max(1, opts.resamples);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  Rng rng(opts.seed, 0xB007);
  for (double& m : means) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += values[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))];
    }
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&means](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const std::size_t j = std::min(i + 1, means.size() - 1);
    return means[i] + (pos - static_cast<double>(i)) * (means[j] - means[i]);
  };
  const double alpha = 1.0 - opts.confidence;
  low = std::min(quantile(alpha / 2.0), mean);
  high = std::max(quantile(1.0 - alpha / 2.0), mean);
}

EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<Annotation>& annotations, const BootstrapOptions& opts) {
  if (annotations.empty() && predictions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no samples");
  }
  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> problems;
  for (const Prediction& p : predictions) {
    if (!by_id.emplace(p.photo_id, &p).second) problems.push_back("duplicate prediction " + p.photo_id);
  }
  std::set<std::string> seen;
  for (const Annotation& a : annotations) {
    if (!seen.insert(a.photo_id).second) problems.push_back("duplicate annotation " + a.photo_id);
    if (!by_id.count(a.photo_id)) problems.push_back("no prediction for " + a.photo_id);
  }
  for (const auto& [id, p] : by_id) {
    if (!seen.count(id)) problems.push_back("no annotation for " + id);
  }
  if (!problems.empty()) {
    std::string msg = "prediction/annotation ids do not match:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorCode::kMismatch, msg);
  }

  EvalReport r;
  r.n = annotations.size();
  for (const Annotation& a : annotations) {
    const Homography& m = by_id.at(a.photo_id)->matrix;
    double iou = 0.0;
    if (validate_quad(a.vertices) != QuadValidity::kValid) {
      throw Error(ErrorCode::kDegenerate, "annotation " + a.photo_id + " is not a valid quad");
    }
    try {
      const Quad predicted = quad_from_matrix(m);
      if (validate_quad(predicted) == QuadValidity::kValid) iou = quad_iou(predicted, a.vertices);
    } catch (const Error&) {
      iou = 0.0;  // prediction sends a corner to infinity
    }
    r.ids.push_back(a.photo_id);
    r.ious.push_back(iou);
  }
  double sum = 0.0;
  for (double v : r.ious) sum += v;
  r.mean_iou = sum / static_cast<double>(r.n);
  r.confidence = opts.confidence;
  bootstrap_mean_ci(r.ious, opts, r.ci_low, r.ci_high);
  return r;
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::vector<Prediction> out;
  for (const auto& rec : read_records(path, 9)) {
    Theta t;
    for (int i = 0; i < 8; ++i) t[i] = parse_number(rec[i + 1], path);
    out.push_back({rec[0], Homography(t)});
  }
  return out;
}

std::vector<Annotation> read_annotations(const std::string& path) {
  std::vector<Annotation> out;
  for (const auto& rec : read_records(path, 9)) {
    Annotation a{rec[0], {}};
    for (int i = 0; i < 4; ++i) {
      a.vertices[i] = {parse_number(rec[1 + 2 * i], path), parse_number(rec[2 + 2 * i], path)};
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_report(const EvalReport& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mIoU %.3f (%.3f, %.3f) n=%zu", r.mean_iou, r.ci_low,
                r.ci_high, r.n);
  return buf;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < r.ids.size(); ++i) {
    samples.push_back({{"photo_id", r.ids[i]}, {"iou", r.ious[i]}});
  }
  nlohmann::json j{{"n", r.n},
                   {"mean_iou", r.mean_iou},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high},
                   {"confidence", r.confidence},
                   {"samples", samples}};
  return j.dump(2);
}

}  // namespace quadsynth

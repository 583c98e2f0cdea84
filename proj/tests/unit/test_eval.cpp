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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "error.hpp"
#include "eval.hpp"
#include "geometry.hpp"
#include "support/oracles.hpp"

using namespace quadsynth;
using namespace quadsynth::testing;

namespace {

Quad square(double x0, double y0, double side) {
  return {{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}};
}

Quad rigid(const Quad& q, double angle, double tx, double ty) {
  Quad out;
  const double c = std::cos(angle), s = std::sin(angle);
  for (int i = 0; i < 4; ++i) {
    out[i] = {c * q[i].x - s * q[i].y + tx, s * q[i].x + c * q[i].y + ty};
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "quadsynth_test_eval";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("quad iou basics") {
  const Quad unit = square(0, 0, 1);
  CHECK(quad_iou(unit, unit) == 1.0);
  CHECK(quad_iou(unit, square(5, 5, 1)) == 0.0);
  CHECK(quad_iou(unit, square(0.5, 0, 1)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(quad_iou(unit, square(0.5, 0, 1)) - 1.0 / 3.0) < 1e-15);
  // Touching along an edge has zero overlap.
  CHECK(quad_iou(unit, square(1, 0, 1)) == 0.0);
  // Reverse winding of one operand does not matter.
  const Quad rev{{unit[3], unit[2], unit[1], unit[0]}};
  CHECK(std::abs(quad_iou(rev, square(0.5, 0, 1)) - 1.0 / 3.0) < 1e-15);

  const Quad dart{{{-1, -1}, {1, -1}, {0, 0}, {-1, 1}}};
  CHECK_THROWS_AS(quad_iou(dart, unit), Error);
}

TEST_CASE("quad iou agrees with a raster count") {
  std::mt19937_64 gen(2);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Quad a = random_convex_quad(gen, 0.3);
    const Quad b = random_convex_quad(gen, 0.3);
    worst = std::max(worst, std::abs(quad_iou(a, b) - raster_iou(a, b)));
  }
  MESSAGE("worst raster disagreement " << worst);
  CHECK(worst < 2e-3);
}

TEST_CASE("quad iou properties") {
  std::mt19937_64 gen(4);
  for (int k = 0; k < 1000; ++k) {
    const Quad a = random_convex_quad(gen, 0.3);
    const Quad b = random_convex_quad(gen, 0.3);
    const double ab = quad_iou(a, b);
    REQUIRE(ab >= 0.0);
    REQUIRE(ab <= 1.0);
    REQUIRE(std::abs(ab - quad_iou(b, a)) < 1e-12);

    const double angle = std::uniform_real_distribution<double>(-3, 3)(gen);
    const double moved = quad_iou(rigid(a, angle, 0.7, -0.4), rigid(b, angle, 0.7, -0.4));
    REQUIRE(std::abs(ab - moved) < 1e-10);

    // Shrink a toward its centroid: contained, and IoU equals the area ratio.
    Point c{0, 0};
    for (const Point& p : a) c = {c.x + p.x / 4, c.y + p.y / 4};
    Quad inner;
    for (int i = 0; i < 4; ++i) inner[i] = {c.x + 0.5 * (a[i].x - c.x), c.y + 0.5 * (a[i].y - c.y)};
    const double ratio = std::abs(signed_area(inner)) / std::abs(signed_area(a));
    REQUIRE(std::abs(quad_iou(a, inner) - ratio) < 1e-12);
  }
}

TEST_CASE("quad iou decreases as one quad shrinks inside the other") {
  const Quad a = square(-1, -1, 2);
  double prev = 1.0;
  for (double s = 0.95; s > 0.05; s -= 0.05) {
    const double iou = quad_iou(a, square(-s, -s, 2 * s));
    REQUIRE(iou < prev);
    prev = iou;
  }
}

TEST_CASE("clip_convex") {
  const Quad a = square(0, 0, 2);
  const Quad b = square(1, 1, 2);
  const std::vector<Point> inter = clip_convex(a, b);
  double area = 0;
  for (std::size_t i = 0; i < inter.size(); ++i) {
    const Point p = inter[i], q = inter[(i + 1) % inter.size()];
    area += p.x * q.y - q.x * p.y;
  }
  CHECK(std::abs(std::abs(area) / 2 - 1.0) < 1e-15);
}

TEST_CASE("bootstrap interval") {
  double lo = 0, hi = 0;
  const std::vector<double> single{0.42};
  bootstrap_mean_ci(single, {}, lo, hi);
  CHECK(lo == 0.42);
  CHECK(hi == 0.42);

  const std::vector<double> same(50, 1.0);
  bootstrap_mean_ci(same, {}, lo, hi);
  CHECK(lo == 1.0);
  CHECK(hi == 1.0);

  std::mt19937_64 gen(1);
  std::vector<double> v(400);
  for (double& x : v) x = std::uniform_real_distribution<double>(0.5, 1.0)(gen);
  double mean = 0;
  for (double x : v) mean += x / v.size();
  bootstrap_mean_ci(v, {}, lo, hi);
  CHECK(lo <= mean);
  CHECK(mean <= hi);
  // Normal approximation: half width ~ 1.96 * sd / sqrt(n), sd = 0.5 / sqrt(12).
  const double half = 1.96 * 0.5 / std::sqrt(12.0) / 20.0;
  CHECK(std::abs((hi - lo) / 2 - half) < 0.25 * half);

  double lo2 = 0, hi2 = 0;
  bootstrap_mean_ci(v, {}, lo2, hi2);
  CHECK(lo == lo2);
  CHECK(hi == hi2);
}

TEST_CASE("evaluate") {
  std::mt19937_64 gen(8);
  std::vector<Prediction> preds;
  std::vector<Annotation> truth;
  for (int k = 0; k < 30; ++k) {
    const Homography m(random_theta(gen));
    const std::string id = "p" + std::to_string(k);
    truth.push_back({id, quad_from_matrix(m)});
    preds.push_back({id, m});
  }

  SUBCASE("exact predictions") {
    const EvalReport r = evaluate(preds, truth);
    CHECK(r.n == 30);
    CHECK(std::abs(r.mean_iou - 1.0) < 1e-9);
    CHECK(std::abs(r.ci_low - 1.0) < 1e-9);
    CHECK(std::abs(r.ci_high - 1.0) < 1e-9);
    CHECK(r.ci_high <= 1.0);
    CHECK(format_report(r).rfind("mIoU 1.000 (1.000, 1.000)", 0) == 0);
  }

  SUBCASE("order of predictions does not matter") {
    std::vector<Prediction> shuffled(preds.rbegin(), preds.rend());
    const EvalReport r = evaluate(shuffled, truth);
    CHECK(r.ids.front() == "p0");
  }

  SUBCASE("invalid predicted quad scores zero") {
    preds[0].matrix = Homography({1, 0, 0, 0, 1, 0, 1, 0});  // corner at infinity
    const EvalReport r = evaluate(preds, truth);
    CHECK(r.ious[0] == 0.0);
    CHECK(r.ci_low <= r.mean_iou);
  }

  SUBCASE("mismatched ids") {
    preds.back().photo_id = "other";
    try {
      evaluate(preds, truth);
      FAIL("expected a mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMismatch);
      CHECK(std::string(e.what()).find("p29") != std::string::npos);
    }
  }

  SUBCASE("duplicate ids") {
    preds.push_back(preds.front());
    CHECK_THROWS_AS(evaluate(preds, truth), Error);
  }

  CHECK_THROWS_AS(evaluate({}, {}), Error);
}

TEST_CASE("record files") {
  const auto pred = scratch("pred.txt");
  const auto truth = scratch("truth.txt");
  write_text(pred,
             "# id theta\n"
             "a 1 0 0 0 1 0 0 0\n"
             "\n"
             "b 0.5 0 0 0 0.5 0 0 0\n");
  write_text(truth,
             "a -1 -1 1 -1 1 1 -1 1\n"
             "b -1 -1 1 -1 1 1 -1 1\n");
  const EvalReport r = evaluate(read_predictions(pred.string()), read_annotations(truth.string()));
  CHECK(r.n == 2);
  CHECK(r.ious[0] == 1.0);
  CHECK(std::abs(r.ious[1] - 0.25) < 1e-15);
  CHECK(report_to_json(r).find("\"mean_iou\"") != std::string::npos);

  write_text(pred, "a 1 0 0\n");
  CHECK_THROWS_AS(read_predictions(pred.string()), Error);
  CHECK_THROWS_AS(read_predictions(scratch("missing.txt").string()), Error);
}

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
#include <numbers>
#include <random>

#include "error.hpp"
#include "geometry.hpp"
#include "sampling.hpp"
#include "support/oracles.hpp"

using namespace quadsynth;
using namespace quadsynth::testing;

namespace {

void check_point(Point p, double x, double y, double tol = 1e-15) {
  CHECK(std::abs(p.x - x) <= tol);
  CHECK(std::abs(p.y - y) <= tol);
}

bool is_identity(const Homography& m, double tol) {
  return max_abs_diff(m.theta(), Homography().theta()) <= tol;
}

}  // namespace

TEST_CASE("factor matrices") {
  CHECK(make_scale(1, 1) == Homography());
  check_point(apply_point(make_scale(0.5, 0.5), {1, 1}), 0.5, 0.5);

  const Quad q = quad_from_matrix(make_scale(2, 1));
  for (const Point& p : q) {
    CHECK(std::abs(p.x) == 2.0);
    CHECK(std::abs(p.y) == 1.0);
  }

  // Printed rotation has +sin in row 1 and -sin in row 2.
  check_point(apply_point(make_rotate(std::numbers::pi / 2), {1, 0}), 0.0, -1.0, 1e-15);
  // (1,1) -> homogeneous (1, 1, 1.5)
  const HomogeneousPoint h = apply_homogeneous(make_perspective(0.5, 0), {1, 1});
  CHECK(h.w == 1.5);
  check_point(apply_point(make_perspective(0.5, 0), {1, 1}), 2.0 / 3.0, 2.0 / 3.0, 1e-15);
  check_point(apply_point(make_translate(0.25, -0.5), {0, 0}), 0.25, -0.5);

  const Homography shear = make_shear(0.1, -0.2);
  CHECK(shear(0, 1) == 0.1);
  CHECK(shear(1, 0) == -0.2);
}

TEST_CASE("degenerate factor inputs are rejected") {
  CHECK_THROWS_AS(make_scale(0, 1), Error);
  CHECK_THROWS_AS(make_scale(1, 0), Error);
  CHECK_THROWS_AS(make_shear(2.0, 0.5), Error);  // sx*sy == 1
  CHECK_THROWS_AS(make_rotate(NAN), Error);
  CHECK_THROWS_AS(Homography({1, 0, 0, 0, 1, 0, INFINITY, 0}), Error);
  try {
    make_scale(0, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerate);
  }
}

TEST_CASE("compose") {
  const Homography m({1.1, 0.2, 0.3, -0.1, 0.9, 0.05, 0.02, -0.03});
  CHECK(compose(Homography(), m) == m);
  CHECK(compose(m, Homography()) == m);
  CHECK(compose(make_translate(1, 0), make_translate(-1, 0)) == Homography());

  SUBCASE("five-factor chain matches a dense product") {
    const double cx = 0.6, cy = 0.5, sx = 0.05, sy = -0.08, alpha = 0.7, px = 0.12,
                 py = -0.07, tx = 0.2, ty = -0.3;
    TransformParams p{cx, cy, sx, sy, alpha, px, py, tx, ty};
    const Homography chained = compose_transform(p);
    // Oracle: entries typed in from the factor definitions, multiplied densely.
    const double c = std::cos(alpha), s = std::sin(alpha);
    const Dense3 mt{{{1, 0, tx}, {0, 1, ty}, {0, 0, 1}}};
    const Dense3 mp{{{1, 0, 0}, {0, 1, 0}, {px, py, 1}}};
    const Dense3 mr{{{c, s, 0}, {-s, c, 0}, {0, 0, 1}}};
    const Dense3 ms{{{1, sx, 0}, {sy, 1, 0}, {0, 0, 1}}};
    const Dense3 mc{{{cx, 0, 0}, {0, cy, 0}, {0, 0, 1}}};
    const Dense3 product = multiply(mt, multiply(mp, multiply(mr, multiply(ms, mc))));
    CHECK(max_abs_diff(dense(chained.theta()), scaled(product, 1.0 / product[2][2])) < 1e-14);
  }

  SUBCASE("near-degenerate product is an error") {
    // Bottom row (1, 0, 1) x column (0, 0, -1)^T style: corner becomes ~0.
    const Homography a({1, 0, 0, 0, 1, 0, 1, 0});
    const Homography b({1, 0, -1, 0, 1, 0, 0, 0});
    CHECK_THROWS_AS(compose(a, b), Error);
  }
}

TEST_CASE("compose is associative and agrees with pointwise application") {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 1000; ++k) {
    const Homography a(random_theta(gen)), b(random_theta(gen)), c(random_theta(gen));
    const Homography left = compose(compose(a, b), c);
    const Homography right = compose(a, compose(b, c));
    REQUIRE(max_abs_diff(left.theta(), right.theta()) < 1e-12);

    const Point p{0.3, -0.7};
    const Point direct = apply_point(compose(a, b), p);
    const Point nested = apply_point(a, apply_point(b, p));
    REQUIRE(std::abs(direct.x - nested.x) < 1e-10);
    REQUIRE(std::abs(direct.y - nested.y) < 1e-10);
  }
}

TEST_CASE("invert") {
  CHECK(invert(Homography()) == Homography());
  CHECK(invert(make_scale(2, 2)) == make_scale(0.5, 0.5));
  CHECK_THROWS_AS(invert(Homography({1, 2, 0, 2, 4, 0, 0, 0})), Error);

  std::mt19937_64 gen(5);
  for (int k = 0; k < 1000; ++k) {
    const Homography m(random_theta(gen));
    const Homography inv = invert(m);
    REQUIRE(is_identity(compose(m, inv), 1e-12));
    REQUIRE(max_abs_diff(invert(inv).theta(), m.theta()) < 1e-10);
    // Independent route: Gauss-Jordan on the dense matrix.
    const Dense3 gj = gauss_jordan_inverse(dense(m.theta()));
    REQUIRE(max_abs_diff(dense(inv.theta()), scaled(gj, 1.0 / gj[2][2])) < 1e-12);
  }
}

TEST_CASE("apply_point at infinity") {
  // w = 1 + 1 * (-1) = 0 at x = -1.
  CHECK_THROWS_AS(apply_point(make_perspective(1, 0), {-1, 0}), Error);
  CHECK_THROWS_AS(quad_from_matrix(make_perspective(1, 0)), Error);
}

TEST_CASE("quad <-> matrix") {
  CHECK(quad_from_matrix(Homography()) == kCanonicalCorners);
  const Quad half = quad_from_matrix(make_scale(0.5, 0.5));
  CHECK(half == Quad{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}});

  CHECK(max_abs_diff(matrix_from_quad(kCanonicalCorners).theta(), Homography().theta()) < 1e-15);
  CHECK(max_abs_diff(matrix_from_quad(half).theta(), make_scale(0.5, 0.5).theta()) < 1e-15);

  SUBCASE("degenerate and nonconvex quads are rejected") {
    const Quad line{{{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
    CHECK_THROWS_AS(matrix_from_quad(line), Error);
    const Quad dart{{{-1, -1}, {1, -1}, {0, 0}, {-1, 1}}};
    CHECK_THROWS_AS(matrix_from_quad(dart), Error);
  }

  SUBCASE("round trip over random valid quads") {
    std::mt19937_64 gen(3);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Quad q = random_convex_quad(gen);
      const Quad back = quad_from_matrix(matrix_from_quad(q));
      for (int i = 0; i < 4; ++i) {
        worst = std::max({worst, std::abs(back[i].x - q[i].x), std::abs(back[i].y - q[i].y)});
      }
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("rectifying a quad by the inverse returns the canonical corners") {
    std::mt19937_64 gen(9);
    for (int k = 0; k < 1000; ++k) {
      const Homography m(random_theta(gen));
      const Quad q = quad_from_matrix(m);
      const Homography inv = invert(m);
      for (int i = 0; i < 4; ++i) {
        const Point p = apply_point(inv, q[i]);
        REQUIRE(std::abs(p.x - kCanonicalCorners[i].x) < 1e-9);
        REQUIRE(std::abs(p.y - kCanonicalCorners[i].y) < 1e-9);
      }
    }
  }
}

TEST_CASE("validate_quad") {
  CHECK(validate_quad(kCanonicalCorners) == QuadValidity::kValid);
  // Reversed winding is still valid.
  CHECK(validate_quad({{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}}) == QuadValidity::kValid);
  CHECK(validate_quad({{{-1, -1}, {1, -1}, {0, 0}, {-1, 1}}}) == QuadValidity::kNonconvex);
  CHECK(validate_quad({{{-1, -1}, {1, -1}, {-0.2, -0.1}, {-1, 1}}}) == QuadValidity::kNonconvex);
  CHECK(validate_quad({{{0, 0}, {1, 1}, {2, 2}, {3, 3}}}) == QuadValidity::kDegenerate);
  // Bow-tie: crossing edges.
  CHECK(validate_quad({{{-1, -1}, {1, 1}, {1, -1}, {-1, 1}}}) != QuadValidity::kValid);
  // Convex but smaller than the area floor.
  CHECK(validate_quad({{{0, 0}, {0.005, 0}, {0.005, 0.005}, {0, 0.005}}}) ==
        QuadValidity::kDegenerate);
  CHECK(validate_quad({{{0, 0}, {NAN, 0}, {1, 1}, {0, 1}}}) == QuadValidity::kDegenerate);
}

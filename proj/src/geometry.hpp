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

// Exact projective-plane algebra in the normalized image frame.
//
// Coordinates live in [-1,1]^2 with +x to the right and +y downward, so that
// row order of a raster matches increasing y. All math is double precision.

#include <array>
#include <span>

namespace quadsynth {

inline constexpr double kWEps = 1e-8;     // smallest usable |w| when dehomogenizing
inline constexpr double kDetEps = 1e-12;  // smallest usable |det| when inverting
inline constexpr double kAreaMin = 1e-4;  // smallest quad area, normalized units^2

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct HomogeneousPoint {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
};

using Mat3 = std::array<std::array<double, 3>, 3>;
using Theta = std::array<double, 8>;

/// A 3x3 projective matrix normalized so that its bottom-right entry is 1.
/// Only the eight free parameters are stored, in row-major order.
class Homography {
 public:
  Homography() = default;  // identity

  /// Throws kInvalidArgument if any parameter is non-finite.
  explicit Homography(const Theta& theta);

  /// Renormalizes `m` by its bottom-right entry. Throws kDegenerate when that
  /// entry is smaller than kWEps in magnitude.
  static Homography from_matrix(const Mat3& m);

  const Theta& theta() const noexcept { return theta_; }
  Mat3 matrix() const noexcept;

  double operator()(int row, int col) const noexcept {
    return row == 2 && col == 2 ? 1.0 : theta_[row * 3 + col];
  }

  friend bool operator==(const Homography&, const Homography&) = default;

 private:
  Theta theta_{1, 0, 0, 0, 1, 0, 0, 0};
};

// Factor matrices for the five elementary actions.
Homography make_scale(double cx, double cy);
Homography make_shear(double sx, double sy);
Homography make_rotate(double alpha);
Homography make_perspective(double px, double py);
Homography make_translate(double tx, double ty);

/// Matrix product a*b (b applied first), renormalized.
Homography compose(const Homography& a, const Homography& b);

double determinant(const Homography& m) noexcept;

/// Adjugate-based inverse. Throws kSingular when |det| <= kDetEps and
/// kDegenerate when the inverse cannot be normalized.
Homography invert(const Homography& m);

inline HomogeneousPoint apply_homogeneous(const Homography& m, Point p) noexcept {
  const Theta& t = m.theta();
  return {t[0] * p.x + t[1] * p.y + t[2], t[3] * p.x + t[4] * p.y + t[5],
          t[6] * p.x + t[7] * p.y + 1.0};
}

/// Throws kDegenerate when the image point lies at infinity.
Point apply_point(const Homography& m, Point p);

/// Quadrilateral vertices, positionally matched to kCanonicalCorners.
using Quad = std::array<Point, 4>;

inline constexpr Quad kCanonicalCorners{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};

/// Vertex i is apply_point(m, kCanonicalCorners[i]).
Quad quad_from_matrix(const Homography& m);

/// Homogeneous w of each canonical corner under m.
std::array<double, 4> corner_weights(const Homography& m) noexcept;

/// Unique homography taking kCanonicalCorners onto q, via the 8x8 linear
/// system of the four correspondences. Throws kDegenerate for quads that do
/// not validate and kSingular when the system cannot be solved.
Homography matrix_from_quad(const Quad& q);

enum class QuadValidity { kValid, kNonconvex, kDegenerate };

const char* to_string(QuadValidity v) noexcept;

/// Valid iff all four turn cross products share one strict sign and the
/// enclosed area exceeds kAreaMin.
QuadValidity validate_quad(const Quad& q) noexcept;

/// Shoelace signed area; positive for counter-clockwise order in a y-up frame.
double signed_area(std::span<const Point> polygon) noexcept;

}  // namespace quadsynth

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

#include "geometry.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "error.hpp"

namespace quadsynth {
namespace {

bool all_finite(const Theta& t) {
  for (double v : t) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string describe(Point p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

Homography::Homography(const Theta& theta) : theta_(theta) {
  if (!all_finite(theta_)) {
    throw Error(ErrorCode::kInvalidArgument, "homography has non-finite entries");
  }
}

Homography Homography::from_matrix(const Mat3& m) {
  const double w = m[2][2];
  if (!(std::abs(w) >= kWEps)) {
    throw Error(ErrorCode::kDegenerate,
                "matrix cannot be normalized: bottom-right entry is ~0");
  }
  Theta t;
  for (int i = 0; i < 8; ++i) t[i] = m[i / 3][i % 3] / w;
  return Homography(t);
}

Mat3 Homography::matrix() const noexcept {
  const Theta& t = theta_;
  return Mat3{{{t[0], t[1], t[2]}, {t[3], t[4], t[5]}, {t[6], t[7], 1.0}}};
}

Homography make_scale(double cx, double cy) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || cx == 0.0 || cy == 0.0) {
    throw Error(ErrorCode::kDegenerate, "scale factors must be finite and nonzero");
  }
  return Homography({cx, 0, 0, 0, cy, 0, 0, 0});
}

Homography make_shear(double sx, double sy) {
  if (!std::isfinite(sx) || !std::isfinite(sy)) {
    throw Error(ErrorCode::kInvalidArgument, "shear must be finite");
  }
  if (std::abs(1.0 - sx * sy) < kDetEps) {
    throw Error(ErrorCode::kDegenerate, "shear with sx*sy == 1 is singular");
  }
  return Homography({1, sx, 0, sy, 1, 0, 0, 0});
}

Homography make_rotate(double alpha) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "rotation angle must be finite");
  }
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return Homography({c, s, 0, -s, c, 0, 0, 0});
}

Homography make_perspective(double px, double py) {
  return Homography({1, 0, 0, 0, 1, 0, px, py});
}

Homography make_translate(double tx, double ty) {
  return Homography({1, 0, tx, 0, 1, ty, 0, 0});
}

Homography compose(const Homography& a, const Homography& b) {
  const Mat3 ma = a.matrix();
  const Mat3 mb = b.matrix();
  Mat3 out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out[r][c] = ma[r][0] * mb[0][c] + ma[r][1] * mb[1][c] + ma[r][2] * mb[2][c];
    }
  }
  return Homography::from_matrix(out);
}

double determinant(const Homography& m) noexcept {
  const Mat3 a = m.matrix();
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Homography invert(const Homography& m) {
  const double det = determinant(m);
  if (!(std::abs(det) > kDetEps)) {
    throw Error(ErrorCode::kSingular, "matrix is singular (|det| <= 1e-12)");
  }
  const Mat3 a = m.matrix();
  Mat3 adj{};
  adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  adj[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
  adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
  adj[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  adj[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
  adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  adj[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
  adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  // The inverse is adj/det; normalizing by its corner cancels det, but the
  // corner itself must be usable relative to det.
  if (!(std::abs(adj[2][2] / det) >= kWEps)) {
    throw Error(ErrorCode::kDegenerate, "inverse maps the origin to infinity");
  }
  return Homography::from_matrix(adj);
}

Point apply_point(const Homography& m, Point p) {
  const HomogeneousPoint h = apply_homogeneous(m, p);
  if (!(std::abs(h.w) > kWEps)) {
    throw Error(ErrorCode::kDegenerate, "point " + describe(p) + " maps to infinity");
  }
  return {h.x / h.w, h.y / h.w};
}

Quad quad_from_matrix(const Homography& m) {
  Quad q;
  for (int i = 0; i < 4; ++i) q[i] = apply_point(m, kCanonicalCorners[i]);
  return q;
}

std::array<double, 4> corner_weights(const Homography& m) noexcept {
  std::array<double, 4> w;
  for (int i = 0; i < 4; ++i) w[i] = apply_homogeneous(m, kCanonicalCorners[i]).w;
  return w;
}

Homography matrix_from_quad(const Quad& q) {
  const QuadValidity validity = validate_quad(q);
  if (validity != QuadValidity::kValid) {
    throw Error(ErrorCode::kDegenerate,
                std::string("cannot solve for a ") + to_string(validity) + " quad");
  }

  // Unknowns theta1..theta8. Each correspondence (u,v) -> (x,y) gives
  //   t1 u + t2 v + t3 - t7 u x - t8 v x = x
  //   t4 u + t5 v + t6 - t7 u y - t8 v y = y
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double u = kCanonicalCorners[i].x;
    const double v = kCanonicalCorners[i].y;
    const double x = q[i].x;
    const double y = q[i].y;
    double* rx = a[2 * i];
    double* ry = a[2 * i + 1];
    rx[0] = u; rx[1] = v; rx[2] = 1; rx[6] = -u * x; rx[7] = -v * x; rx[8] = x;
    ry[3] = u; ry[4] = v; ry[5] = 1; ry[6] = -u * y; ry[7] = -v * y; ry[8] = y;
  }

  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (!(std::abs(a[pivot][col]) > kDetEps)) {
      throw Error(ErrorCode::kSingular, "quad correspondence system is singular");
    }
    if (pivot != col) {
      for (int c = 0; c < 9; ++c) std::swap(a[pivot][c], a[col][c]);
    }
    for (int r = col + 1; r < 8; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Theta t;
  for (int r = 7; r >= 0; --r) {
    double s = a[r][8];
    for (int c = r + 1; c < 8; ++c) s -= a[r][c] * t[c];
    t[r] = s / a[r][r];
  }
  return Homography(t);
}

const char* to_string(QuadValidity v) noexcept {
  switch (v) {
    case QuadValidity::kValid:
      return "valid";
    case QuadValidity::kNonconvex:
      return "nonconvex";
    case QuadValidity::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

double signed_area(std::span<const Point> polygon) noexcept {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

QuadValidity validate_quad(const Quad& q) noexcept {
  for (const Point& p : q) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return QuadValidity::kDegenerate;
  }
  if (!(std::abs(signed_area(q)) > kAreaMin)) return QuadValidity::kDegenerate;

  int positive = 0;
  int negative = 0;
  for (int i = 0; i < 4; ++i) {
    const Point& a = q[i];
    const Point& b = q[(i + 1) % 4];
    const Point& c = q[(i + 2) % 4];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross > 0.0) {
      ++positive;
    } else if (cross < 0.0) {
      ++negative;
    }
  }
  return positive == 4 || negative == 4 ? QuadValidity::kValid : QuadValidity::kNonconvex;
}

}  // namespace quadsynth

#include "stereokit/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "stereokit/errors.hpp"

namespace stereo {

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
          m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

Mat3 Mat3::scaled(double s) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 Mat3::inverse() const {
  const double d = det();
  if (std::abs(d) < 1e-300)
    throw InvariantViolation("matrix is singular, cannot invert");
  const double inv = 1.0 / d;
  Mat3 r;
  r.m[0] = (m[4] * m[8] - m[5] * m[7]) * inv;
  r.m[1] = (m[2] * m[7] - m[1] * m[8]) * inv;
  r.m[2] = (m[1] * m[5] - m[2] * m[4]) * inv;
  r.m[3] = (m[5] * m[6] - m[3] * m[8]) * inv;
  r.m[4] = (m[0] * m[8] - m[2] * m[6]) * inv;
  r.m[5] = (m[2] * m[3] - m[0] * m[5]) * inv;
  r.m[6] = (m[3] * m[7] - m[4] * m[6]) * inv;
  r.m[7] = (m[1] * m[6] - m[0] * m[7]) * inv;
  r.m[8] = (m[0] * m[4] - m[1] * m[3]) * inv;
  return r;
}

double Mat3::max_abs() const {
  double r = 0.0;
  for (double v : m) r = std::max(r, std::abs(v));
  return r;
}

double Mat3::frobenius_norm() const {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

Mat3 skew(const Vec3& a) {
  Mat3 r;
  r.m = {0.0, -a.z, a.y, a.z, 0.0, -a.x, -a.y, a.x, 0.0};
  return r;
}

Vec3 cross_via_skew(const Vec3& a, const Vec3& b) { return skew(a) * b; }

bool is_rotation(const Mat3& r, double tol) {
  for (double v : r.m)
    if (!std::isfinite(v)) return false;
  const Mat3 gram = r.transposed() * r;
  const Mat3 residual = gram - Mat3::identity();
  if (residual.max_abs() > tol) return false;
  return std::abs(r.det() - 1.0) <= tol;  // det -1 is a reflection
}

PoseSE3::PoseSE3(const Mat3& r, const Vec3& t, double tol)
    : rotation(r), translation(t) {
  if (!is_rotation(r, tol))
    throw InvariantViolation("pose rotation is not orthonormal within " +
                             std::to_string(tol));
  if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.z))
    throw InvariantViolation("pose translation is not finite");
}

Vec3 transform_point(const PoseSE3& pose, const Vec3& p) {
  return pose.rotation * p + pose.translation;
}

PoseSE3 pose_inverse(const PoseSE3& pose) {
  const Mat3 rt = pose.rotation.transposed();
  return PoseSE3(rt, (rt * pose.translation) * -1.0);
}

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b) {
  return PoseSE3(a.rotation * b.rotation,
                 a.rotation * b.translation + a.translation);
}

}  // namespace stereo

#pragma once

#include <array>
#include <cmath>

namespace stereo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// 3x3 matrix, row-major storage.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
  }

  double& operator()(int row, int col) { return m[3 * row + col]; }
  double operator()(int row, int col) const { return m[3 * row + col]; }

  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 scaled(double s) const;
  Mat3 transposed() const;
  double det() const;

  /// Inverse via adjugate. Throws InvariantViolation when |det| < 1e-300.
  Mat3 inverse() const;

  double max_abs() const;
  double frobenius_norm() const;
};

/// Tolerance for rotation-matrix validation (max |R^T R - I| entry and
/// |det R - 1|, so reflections fail).
inline constexpr double kRotationTolerance = 1e-9;

Mat3 skew(const Vec3& a);
Vec3 cross_via_skew(const Vec3& a, const Vec3& b);
bool is_rotation(const Mat3& r, double tol = kRotationTolerance);

/// Rigid transform camera <- world. Construction validates the rotation part.
struct PoseSE3 {
  Mat3 rotation = Mat3::identity();
  Vec3 translation;

  PoseSE3() = default;
  PoseSE3(const Mat3& r, const Vec3& t, double tol = kRotationTolerance);
};

Vec3 transform_point(const PoseSE3& pose, const Vec3& p);
PoseSE3 pose_inverse(const PoseSE3& pose);

/// compose(a, b) applies b first, then a.
PoseSE3 compose(const PoseSE3& a, const PoseSE3& b);

}  // namespace stereo

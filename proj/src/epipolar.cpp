#include "stereokit/epipolar.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "stereokit/errors.hpp"

namespace stereo {

namespace {

Mat3 from_eigen(const Eigen::Matrix3d& e) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = e(i, j);
  return m;
}

/// Isotropic normalization: centroid to the origin, mean distance sqrt(2).
Mat3 normalizing_transform(std::span<const Correspondence> points,
                           bool right_side) {
  const std::size_t n = points.size();
  double cx = 0.0, cy = 0.0;
  for (const auto& c : points) {
    const Pixel& p = right_side ? c.right : c.left;
    cx += p.u;
    cy += p.v;
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);

  double mean_dist = 0.0;
  for (const auto& c : points) {
    const Pixel& p = right_side ? c.right : c.left;
    mean_dist += std::hypot(p.u - cx, p.v - cy);
  }
  mean_dist /= static_cast<double>(n);
  if (mean_dist < 1e-12)
    throw DegenerateConfiguration("points are coincident");

  const double s = std::sqrt(2.0) / mean_dist;
  Mat3 t;
  t.m = {s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0};
  return t;
}

Pixel apply_normalization(const Mat3& t, const Pixel& p) {
  return {t.m[0] * p.u + t.m[2], t.m[4] * p.v + t.m[5]};
}

}  // namespace

Mat3 essential_from_pose(const Mat3& r, const Vec3& t) {
  if (t.norm() < 1e-12)
    throw DegenerateTranslation("baseline has zero length");
  return skew(t) * r;
}

Mat3 normalize_matrix_scale(const Mat3& m) {
  int pivot = 0;
  for (int i = 1; i < 9; ++i)
    if (std::abs(m.m[i]) > std::abs(m.m[pivot])) pivot = i;
  const double p = m.m[pivot];
  if (p == 0.0) throw InvariantViolation("cannot rescale the zero matrix");
  return m.scaled(1.0 / p);
}

Mat3 fundamental_from_essential(const Mat3& e, const IntrinsicMatrix& kl,
                                const IntrinsicMatrix& kr) {
  const Mat3 f =
      kr.inverse_matrix().transposed() * e * kl.inverse_matrix();
  return normalize_matrix_scale(f);
}

double epipolar_residual(const Mat3& f, const Correspondence& c) {
  const Vec3 fl = f * Vec3{c.left.u, c.left.v, 1.0};
  return c.right.u * fl.x + c.right.v * fl.y + fl.z;
}

double max_epipolar_residual(const Mat3& f,
                             std::span<const Correspondence> points) {
  double worst = 0.0;
  for (const auto& c : points)
    worst = std::max(worst, std::abs(epipolar_residual(f, c)));
  return worst;
}

Mat3 estimate_fundamental_8pt(std::span<const Correspondence> points) {
  const std::size_t n = points.size();
  if (n < 8)
    throw InsufficientPoints("eight-point estimation needs >= 8 points, got " +
                             std::to_string(n));

  const Mat3 tl = normalizing_transform(points, false);
  const Mat3 tr = normalizing_transform(points, true);

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Pixel l = apply_normalization(tl, points[i].left);
    const Pixel r = apply_normalization(tr, points[i].right);
    a.row(static_cast<Eigen::Index>(i)) << r.u * l.u, r.u * l.v, r.u,
        r.v * l.u, r.v * l.v, r.v, l.u, l.v, 1.0;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  // A unique null direction needs rank 8. Planar or otherwise degenerate
  // configurations drop the rank and leave the solution underdetermined.
  if (sigma(7) <= 1e-8 * sigma(0))
    throw DegenerateConfiguration(
        "correspondences do not constrain a unique fundamental matrix");

  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d fn;
  fn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  // Project to the closest rank-2 matrix before undoing the normalization.
  Eigen::JacobiSVD<Eigen::Matrix3d> fsvd(
      fn, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d s = fsvd.singularValues();
  s(2) = 0.0;
  fn = fsvd.matrixU() * s.asDiagonal() * fsvd.matrixV().transpose();

  const Mat3 f = tr.transposed() * from_eigen(fn) * tl;
  return normalize_matrix_scale(f);
}

Mat3 homography_from_plane(const Mat3& r, const Vec3& t, const Vec3& n,
                           double b, const IntrinsicMatrix& kl,
                           const IntrinsicMatrix& kr, double depth_ratio) {
  if (b == 0.0)
    throw ZeroPlaneOffset("plane must not pass through the left camera center");
  Mat3 inner = r;
  const double inv_b = 1.0 / b;
  for (int i = 0; i < 3; ++i) {
    const double ti = (i == 0 ? t.x : i == 1 ? t.y : t.z);
    inner(i, 0) -= inv_b * ti * n.x;
    inner(i, 1) -= inv_b * ti * n.y;
    inner(i, 2) -= inv_b * ti * n.z;
  }
  return (kr.matrix() * inner * kl.inverse_matrix()).scaled(depth_ratio);
}

Mat3 estimate_homography_4pt(std::span<const Correspondence> points) {
  const std::size_t n = points.size();
  if (n < 4)
    throw InsufficientPoints("homography estimation needs >= 4 points, got " +
                             std::to_string(n));

  const Mat3 tl = normalizing_transform(points, false);
  const Mat3 tr = normalizing_transform(points, true);

  Eigen::MatrixXd a(static_cast<Eigen::Index>(2 * n), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Pixel l = apply_normalization(tl, points[i].left);
    const Pixel r = apply_normalization(tr, points[i].right);
    a.row(static_cast<Eigen::Index>(2 * i)) << 0.0, 0.0, 0.0, -l.u, -l.v,
        -1.0, r.v * l.u, r.v * l.v, r.v;
    a.row(static_cast<Eigen::Index>(2 * i + 1)) << l.u, l.v, 1.0, 0.0, 0.0,
        0.0, -r.u * l.u, -r.u * l.v, -r.u;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma(7) <= 1e-8 * sigma(0))
    throw DegenerateConfiguration(
        "correspondences do not constrain a unique homography");

  const Eigen::VectorXd h = svd.matrixV().col(8);
  Mat3 hn;
  hn.m = {h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8)};

  const Mat3 res = tr.inverse() * hn * tl;
  return normalize_matrix_scale(res);
}

Pixel apply_homography(const Mat3& h, const Pixel& p) {
  const Vec3 q = h * Vec3{p.u, p.v, 1.0};
  if (std::abs(q.z) < 1e-12)
    throw PointAtInfinity("homography maps pixel to the line at infinity");
  return {q.x / q.z, q.y / q.z};
}

}  // namespace stereo

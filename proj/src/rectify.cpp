#include "stereokit/rectify.hpp"

#include <cmath>
#include <string>

#include "stereokit/errors.hpp"

namespace stereo {

namespace {

bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

StereoRig StereoRig::create(const IntrinsicMatrix& kl,
                            const IntrinsicMatrix& kr, const PoseSE3& pose,
                            double tc, bool rectified) {
  if (!(tc > 0.0) || !std::isfinite(tc))
    throw InvariantViolation("baseline length Tc must be positive");
  if (rectified) {
    const Mat3 dr = pose.rotation - Mat3::identity();
    if (dr.max_abs() > 1e-9)
      throw InvariantViolation(
          "rectified rig must have identity relative rotation");
    if (std::abs(pose.translation.x + tc) > 1e-9 ||
        std::abs(pose.translation.y) > 1e-9 ||
        std::abs(pose.translation.z) > 1e-9)
      throw InvariantViolation(
          "rectified rig must have translation (-Tc, 0, 0)");
    if (!near(kl.fx, kr.fx, 1e-9) || !near(kl.fy, kr.fy, 1e-9) ||
        !near(kl.u0, kr.u0, 1e-9) || !near(kl.v0, kr.v0, 1e-9))
      throw InvariantViolation("rectified rig must share intrinsics");
  }
  StereoRig rig;
  rig.kl = kl;
  rig.kr = kr;
  rig.pose = pose;
  rig.tc = tc;
  rig.rectified = rectified;
  return rig;
}

Mat3 compute_rectifying_rotation(const Vec3& t) {
  const double len = t.norm();
  if (len < 1e-12) throw DegenerateBaseline("baseline has zero length");
  const Vec3 e1 = t * (1.0 / len);

  // e2 = z x e1 vanishes when the baseline points down the optical axis;
  // no row-aligning rotation exists there.
  const Vec3 zxt = cross_via_skew(Vec3{0.0, 0.0, 1.0}, e1);
  const double zlen = zxt.norm();
  if (zlen < 1e-9)
    throw DegenerateBaseline(
        "baseline is parallel to the optical axis");
  const Vec3 e2 = zxt * (1.0 / zlen);
  const Vec3 e3 = cross_via_skew(e1, e2);

  Mat3 r;
  r.m = {e1.x, e1.y, e1.z, e2.x, e2.y, e2.z, e3.x, e3.y, e3.z};
  return r;
}

RectificationResult rectify_rig(const StereoRig& rig, int out_width,
                                int out_height, const ParallelFor& pf) {
  // Right camera center in the left frame; its length is the baseline.
  const Mat3 r_inv = rig.pose.rotation.transposed();
  const Vec3 center_r = (r_inv * rig.pose.translation) * -1.0;
  const double baseline = center_r.norm();
  if (std::abs(baseline - rig.tc) > 1e-6)
    throw InvariantViolation(
        "pose baseline length disagrees with Tc by more than 1e-6");

  const Mat3 r_rect = compute_rectifying_rotation(center_r);
  const Mat3 r_right = r_rect * r_inv;

  RectificationResult res;
  res.r_rect = r_rect;
  res.r_right = r_right;
  res.k_new = rig.kl;

  const PoseSE3 new_pose(Mat3::identity(), Vec3{-rig.tc, 0.0, 0.0});
  res.rig = StereoRig::create(res.k_new, res.k_new, new_pose, rig.tc, true);

  res.left_map = RemapField::create(out_width, out_height);
  res.right_map = RemapField::create(out_width, out_height);

  const Mat3 k_new_inv = res.k_new.inverse_matrix();
  const Mat3 back_left = r_rect.transposed();
  const Mat3 back_right = r_right.transposed();

  auto fill = [&](RemapField& map, const Mat3& back, const IntrinsicMatrix& k) {
    pf(static_cast<std::size_t>(out_height), [&](std::size_t row) {
      const int v = static_cast<int>(row);
      for (int u = 0; u < out_width; ++u) {
        const Vec3 ray = back * (k_new_inv * Vec3{static_cast<double>(u),
                                                  static_cast<double>(v), 1.0});
        const std::size_t i = map.index(u, v);
        if (!(ray.z > 0.0)) continue;  // behind the original camera
        map.src_u[i] = k.fx * ray.x / ray.z + k.u0;
        map.src_v[i] = k.fy * ray.y / ray.z + k.v0;
        map.valid[i] = 1;
      }
    });
  };
  fill(res.left_map, back_left, rig.kl);
  fill(res.right_map, back_right, rig.kr);
  return res;
}

std::pair<Pixel, Pixel> project_to_stereo(const StereoRig& rig, const Vec3& p) {
  if (!rig.rectified)
    throw InvariantViolation("stereo projection requires a rectified rig");
  const double half = rig.tc / 2.0;
  const Pixel left = project(rig.kl, Vec3{p.x + half, p.y, p.z});
  const Pixel right = project(rig.kr, Vec3{p.x - half, p.y, p.z});
  return {left, right};
}

double depth_from_disparity(const StereoRig& rig, double d) {
  if (!rig.rectified)
    throw InvariantViolation("depth from disparity requires a rectified rig");
  if (!(d > 0.0))
    throw NonPositiveDisparity("disparity must be positive, got " +
                               std::to_string(d));
  return rig.kl.fx * rig.tc / d;
}

}  // namespace stereo

#pragma once

#include <utility>

#include "stereokit/camera.hpp"
#include "stereokit/geometry.hpp"
#include "stereokit/parallel.hpp"

namespace stereo {

/// Calibrated stereo pair. pose maps left-camera coordinates to right-camera
/// coordinates; tc is the baseline length in world units.
struct StereoRig {
  IntrinsicMatrix kl;
  IntrinsicMatrix kr;
  PoseSE3 pose;
  double tc = 0.0;
  bool rectified = false;

  /// Validates tc > 0 and, for rectified rigs, that the pose is a pure
  /// x-translation of -tc with identical intrinsics on both cameras.
  static StereoRig create(const IntrinsicMatrix& kl, const IntrinsicMatrix& kr,
                          const PoseSE3& pose, double tc, bool rectified);
};

struct RectificationResult {
  Mat3 r_rect;          // applied to the left camera frame
  Mat3 r_right;         // applied to the right camera frame
  IntrinsicMatrix k_new;  // shared intrinsics of the rectified pair
  RemapField left_map;
  RemapField right_map;
  StereoRig rig;  // the rectified rig the maps produce
};

/// Rotation aligning the camera x-axis with the baseline direction t.
/// Row 1 is t normalized, row 2 is orthogonal to t and the old optical axis,
/// row 3 completes the right-handed frame. Throws DegenerateBaseline when the
/// baseline is (nearly) parallel to the optical axis or has zero length.
Mat3 compute_rectifying_rotation(const Vec3& t);

/// Plans row-aligned resampling of both views: shared intrinsics (the left
/// camera's), both image planes rotated so epipolar lines become horizontal
/// scanlines. The returned maps give, per rectified pixel, the source pixel
/// in the original images.
RectificationResult rectify_rig(const StereoRig& rig, int out_width,
                                int out_height,
                                const ParallelFor& pf = serial_for());

/// Projects a world point (origin mid-baseline, axes aligned with the
/// cameras) through both views of a rectified rig.
/// Throws NonPositiveDepth when p.z <= 0.
std::pair<Pixel, Pixel> project_to_stereo(const StereoRig& rig, const Vec3& p);

/// z = f * Tc / d. Throws NonPositiveDisparity when d <= 0.
double depth_from_disparity(const StereoRig& rig, double d);

}  // namespace stereo

#pragma once

#include <string>
#include <vector>

#include "stereokit/camera.hpp"
#include "stereokit/epipolar.hpp"
#include "stereokit/rectify.hpp"

namespace stereo {

struct Calibration {
  StereoRig rig;
  DistortionCoefficients left_distortion;
  DistortionCoefficients right_distortion;
};

/// Plain-text key = value calibration. Keys:
///   left.fx left.fy left.u0 left.v0   (required; same for right.*)
///   left.k1 left.k2 left.k3 left.p1 left.p2   (optional, default 0)
///   R  (9 row-major entries)  t  (3 entries)  Tc   (required)
///   rectified  (optional bool, default false)
/// '#' starts a comment. Unknown or duplicate keys raise ParseError with the
/// line number; value constraints (fx > 0, R orthonormal, Tc > 0, rectified
/// pose shape) raise InvariantViolation.
Calibration read_calibration(const std::string& path);

/// Round-trip-exact writer (17 significant digits).
void write_calibration(const std::string& path, const Calibration& calib);

/// Correspondence list: one "uL vL uR vR" line per point, '#' comments and
/// blank lines ignored. Throws ParseError with the offending line number.
std::vector<Correspondence> read_correspondences(const std::string& path);

void write_correspondences(const std::string& path,
                           const std::vector<Correspondence>& points);

}  // namespace stereo

#pragma once

#include <span>

#include "stereokit/camera.hpp"
#include "stereokit/geometry.hpp"

namespace stereo {

struct Correspondence {
  Pixel left;
  Pixel right;
};

/// E = [t]x R for the relative pose right <- left.
/// Throws DegenerateTranslation when |t| < 1e-12.
Mat3 essential_from_pose(const Mat3& r, const Vec3& t);

/// F = K_R^-T E K_L^-1, rescaled so the largest-magnitude entry is 1.
Mat3 fundamental_from_essential(const Mat3& e, const IntrinsicMatrix& kl,
                                const IntrinsicMatrix& kr);

/// Divides by the signed entry of largest magnitude (first in row-major
/// order on ties), so that entry becomes exactly 1.
Mat3 normalize_matrix_scale(const Mat3& m);

/// Algebraic residual p_R^T F p_L in homogeneous pixel coordinates.
double epipolar_residual(const Mat3& f, const Correspondence& c);

double max_epipolar_residual(const Mat3& f,
                             std::span<const Correspondence> points);

/// Eight-point estimate with isotropic pixel normalization on both sides.
/// Throws InsufficientPoints (< 8) and DegenerateConfiguration when the
/// design matrix does not determine a unique solution (e.g. all points on
/// one plane).
Mat3 estimate_fundamental_8pt(std::span<const Correspondence> points);

/// Plane-induced homography H = (zL/zR) K_R (R - t n^T / b) K_L^-1 for the
/// plane n^T x + b = 0 in the left camera frame (fronto-parallel z = z0 is
/// n = (0,0,1), b = -z0). Throws ZeroPlaneOffset when b = 0. depth_ratio is
/// the zL/zR factor of the anchor point (pass 1.0 to keep the matrix up to
/// scale only).
Mat3 homography_from_plane(const Mat3& r, const Vec3& t, const Vec3& n,
                           double b, const IntrinsicMatrix& kl,
                           const IntrinsicMatrix& kr,
                           double depth_ratio = 1.0);

/// Direct linear transform from >= 4 correspondences, normalized like the
/// eight-point estimator. Throws InsufficientPoints and
/// DegenerateConfiguration (collinear inputs).
Mat3 estimate_homography_4pt(std::span<const Correspondence> points);

/// Applies H in homogeneous coordinates. Throws PointAtInfinity when the
/// result's w component has magnitude < 1e-12.
Pixel apply_homography(const Mat3& h, const Pixel& p);

}  // namespace stereo

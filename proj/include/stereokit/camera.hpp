#pragma once

#include <cstdint>
#include <vector>

#include "stereokit/geometry.hpp"
#include "stereokit/parallel.hpp"

namespace stereo {

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Pinhole intrinsics. Zero skew; construction validates fx, fy > 0.
struct IntrinsicMatrix {
  double fx = 1.0;
  double fy = 1.0;
  double u0 = 0.0;
  double v0 = 0.0;

  IntrinsicMatrix() = default;
  IntrinsicMatrix(double fx, double fy, double u0, double v0);

  Mat3 matrix() const;
  /// Closed-form inverse: diag(1/fx, 1/fy, 1) with shifted principal point.
  Mat3 inverse_matrix() const;
};

/// Radial (k1, k2, k3) and tangential (p1, p2) coefficients of the
/// undistortion model: applied to distorted normalized coordinates they
/// yield corrected ones.
struct DistortionCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  bool is_zero() const {
    return k1 == 0.0 && k2 == 0.0 && k3 == 0.0 && p1 == 0.0 && p2 == 0.0;
  }
};

/// 8-bit single-channel image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  static GrayImage create(int width, int height, std::uint8_t fill = 0);

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + u;
  }
  std::uint8_t at(int u, int v) const { return samples[index(u, v)]; }
  std::uint8_t& at(int u, int v) { return samples[index(u, v)]; }
  bool contains(int u, int v) const {
    return u >= 0 && u < width && v >= 0 && v < height;
  }
};

/// Dense lookup table: for every destination pixel the source coordinates to
/// sample, plus a validity flag for pixels whose mapping did not converge or
/// falls outside the source frame.
struct RemapField {
  int width = 0;
  int height = 0;
  std::vector<double> src_u;
  std::vector<double> src_v;
  std::vector<std::uint8_t> valid;

  static RemapField create(int width, int height);

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + u;
  }
};

enum class Interpolation { Bilinear, Nearest };

/// Projects a camera-frame point to pixel coordinates.
/// Throws NonPositiveDepth when p.z <= 0.
Pixel project(const IntrinsicMatrix& k, const Vec3& p);

/// Pixel -> normalized image coordinates (z = 1 plane).
Vec3 normalize_pixel(const IntrinsicMatrix& k, const Pixel& p);

/// Radial correction of distorted normalized coordinates.
Vec2 correct_radial(const DistortionCoefficients& d, const Vec2& p);

/// Tangential correction, applied after the radial step.
Vec2 correct_tangential(const DistortionCoefficients& d, const Vec2& p);

/// Full model: radial then tangential.
Vec2 undistort_normalized(const DistortionCoefficients& d, const Vec2& p);

/// Inverts undistort_normalized by fixed-point iteration: finds distorted
/// coordinates whose correction lands on `corrected`. Returns false when the
/// iteration fails the 1e-6 forward re-check.
bool distort_normalized(const DistortionCoefficients& d, const Vec2& corrected,
                        Vec2* distorted);

/// For every pixel of an undistorted target image, the distorted source
/// location under (k, d). Inverts the correction per pixel by fixed-point
/// iteration; pixels that fail the forward re-check within 1e-6 normalized
/// units are flagged invalid.
RemapField build_undistort_map(const IntrinsicMatrix& k,
                               const DistortionCoefficients& d, int width,
                               int height,
                               const ParallelFor& pf = serial_for());

/// Samples src through the field. Invalid or out-of-bounds mappings produce 0.
GrayImage remap(const GrayImage& src, const RemapField& field,
                Interpolation interp = Interpolation::Bilinear,
                const ParallelFor& pf = serial_for());

}  // namespace stereo

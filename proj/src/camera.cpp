#include "stereokit/camera.hpp"

#include <algorithm>
#include <cmath>

#include "stereokit/errors.hpp"

namespace stereo {

IntrinsicMatrix::IntrinsicMatrix(double fx, double fy, double u0, double v0)
    : fx(fx), fy(fy), u0(u0), v0(v0) {
  if (!(std::isfinite(fx) && std::isfinite(fy) && std::isfinite(u0) &&
        std::isfinite(v0)))
    throw InvariantViolation("intrinsics must be finite");
  if (fx <= 0.0 || fy <= 0.0)
    throw InvariantViolation("focal lengths must be positive");
}

Mat3 IntrinsicMatrix::matrix() const {
  Mat3 k;
  k.m = {fx, 0.0, u0, 0.0, fy, v0, 0.0, 0.0, 1.0};
  return k;
}

Mat3 IntrinsicMatrix::inverse_matrix() const {
  Mat3 k;
  k.m = {1.0 / fx, 0.0, -u0 / fx, 0.0, 1.0 / fy, -v0 / fy, 0.0, 0.0, 1.0};
  return k;
}

GrayImage GrayImage::create(int width, int height, std::uint8_t fill) {
  if (width < 1 || height < 1)
    throw InvariantViolation("image dimensions must be at least 1x1");
  if (static_cast<long long>(width) * height > 1'000'000'000LL)
    throw InvariantViolation("image dimensions are implausibly large");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.samples.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

RemapField RemapField::create(int width, int height) {
  if (width < 1 || height < 1)
    throw InvariantViolation("remap field dimensions must be at least 1x1");
  RemapField f;
  f.width = width;
  f.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  f.src_u.assign(n, 0.0);
  f.src_v.assign(n, 0.0);
  f.valid.assign(n, 0);
  return f;
}

Pixel project(const IntrinsicMatrix& k, const Vec3& p) {
  if (!(p.z > 0.0))
    throw NonPositiveDepth("cannot project point with z = " +
                           std::to_string(p.z));
  return {k.fx * p.x / p.z + k.u0, k.fy * p.y / p.z + k.v0};
}

Vec3 normalize_pixel(const IntrinsicMatrix& k, const Pixel& p) {
  return {(p.u - k.u0) / k.fx, (p.v - k.v0) / k.fy, 1.0};
}

namespace {

double radial_factor(const DistortionCoefficients& d, double x, double y) {
  const double r2 = x * x + y * y;
  return 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
}

Vec2 tangential_delta(const DistortionCoefficients& d, double x, double y) {
  const double r2 = x * x + y * y;
  return {2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
          d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y};
}

}  // namespace

Vec2 correct_radial(const DistortionCoefficients& d, const Vec2& p) {
  const double s = radial_factor(d, p.x, p.y);
  return {p.x * s, p.y * s};
}

Vec2 correct_tangential(const DistortionCoefficients& d, const Vec2& p) {
  const Vec2 delta = tangential_delta(d, p.x, p.y);
  return {p.x + delta.x, p.y + delta.y};
}

Vec2 undistort_normalized(const DistortionCoefficients& d, const Vec2& p) {
  return correct_tangential(d, correct_radial(d, p));
}

bool distort_normalized(const DistortionCoefficients& d, const Vec2& corrected,
                        Vec2* distorted) {
  // Alternating fixed-point updates: subtract the tangential offset, then
  // divide out the radial factor, both evaluated at the current estimate.
  double xd = corrected.x;
  double yd = corrected.y;
  for (int it = 0; it < 50; ++it) {
    const double s = radial_factor(d, xd, yd);
    if (!(s > 1e-9)) return false;
    const Vec2 delta = tangential_delta(d, s * xd, s * yd);
    const double nx = (corrected.x - delta.x) / s;
    const double ny = (corrected.y - delta.y) / s;
    const double step = std::max(std::abs(nx - xd), std::abs(ny - yd));
    xd = nx;
    yd = ny;
    if (step < 1e-8) break;
  }
  const Vec2 check = undistort_normalized(d, Vec2{xd, yd});
  if (std::abs(check.x - corrected.x) > 1e-6 ||
      std::abs(check.y - corrected.y) > 1e-6)
    return false;
  *distorted = {xd, yd};
  return true;
}

RemapField build_undistort_map(const IntrinsicMatrix& k,
                               const DistortionCoefficients& d, int width,
                               int height, const ParallelFor& pf) {
  RemapField field = RemapField::create(width, height);

  if (d.is_zero()) {
    // Identity model: emit exact pixel coordinates instead of running the
    // round trip through normalized space, so the map is bit-exact.
    pf(static_cast<std::size_t>(height), [&](std::size_t row) {
      const int v = static_cast<int>(row);
      for (int u = 0; u < width; ++u) {
        const std::size_t i = field.index(u, v);
        field.src_u[i] = static_cast<double>(u);
        field.src_v[i] = static_cast<double>(v);
        field.valid[i] = 1;
      }
    });
    return field;
  }

  pf(static_cast<std::size_t>(height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < width; ++u) {
      const Vec3 n = normalize_pixel(k, Pixel{static_cast<double>(u),
                                              static_cast<double>(v)});
      Vec2 dist;
      const bool usable = distort_normalized(d, Vec2{n.x, n.y}, &dist);
      const std::size_t i = field.index(u, v);
      if (usable) {
        field.src_u[i] = k.fx * dist.x + k.u0;
        field.src_v[i] = k.fy * dist.y + k.v0;
        field.valid[i] = 1;
      }
    }
  });
  return field;
}

GrayImage remap(const GrayImage& src, const RemapField& field,
                Interpolation interp, const ParallelFor& pf) {
  GrayImage dst = GrayImage::create(field.width, field.height, 0);
  const int sw = src.width;
  const int sh = src.height;

  // Map sources arrive through chains of floating transforms; anything
  // within this slack of the frame border is an edge sample, not
  // out-of-frame.
  constexpr double kEdgeSlack = 1e-9;

  pf(static_cast<std::size_t>(field.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < field.width; ++u) {
      const std::size_t i = field.index(u, v);
      if (!field.valid[i]) continue;
      double x = field.src_u[i];
      double y = field.src_v[i];
      if (x < -kEdgeSlack || y < -kEdgeSlack || x > sw - 1 + kEdgeSlack ||
          y > sh - 1 + kEdgeSlack)
        continue;
      x = std::clamp(x, 0.0, static_cast<double>(sw - 1));
      y = std::clamp(y, 0.0, static_cast<double>(sh - 1));

      if (interp == Interpolation::Nearest) {
        dst.at(u, v) = src.at(static_cast<int>(std::lround(x)),
                              static_cast<int>(std::lround(y)));
        continue;
      }

      int x0 = static_cast<int>(std::floor(x));
      int y0 = static_cast<int>(std::floor(y));
      int x1 = std::min(x0 + 1, sw - 1);
      int y1 = std::min(y0 + 1, sh - 1);
      const double wx = x - x0;
      const double wy = y - y0;
      const double top = (1.0 - wx) * src.at(x0, y0) + wx * src.at(x1, y0);
      const double bot = (1.0 - wx) * src.at(x0, y1) + wx * src.at(x1, y1);
      const long value = std::lround((1.0 - wy) * top + wy * bot);
      dst.at(u, v) =
          static_cast<std::uint8_t>(std::clamp(value, 0L, 255L));
    }
  });
  return dst;
}

}  // namespace stereo

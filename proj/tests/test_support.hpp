#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "stereokit/camera.hpp"
#include "stereokit/epipolar.hpp"
#include "stereokit/geometry.hpp"
#include "stereokit/matching.hpp"

namespace testutil {

inline stereo::Mat3 rotation_about(const stereo::Vec3& axis, double angle) {
  const stereo::Vec3 u = axis * (1.0 / axis.norm());
  const stereo::Mat3 k = stereo::skew(u);
  return stereo::Mat3::identity() + k.scaled(std::sin(angle)) +
         (k * k).scaled(1.0 - std::cos(angle));
}

inline stereo::Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  stereo::Vec3 v{g(rng), g(rng), g(rng)};
  while (v.norm() < 1e-6) v = {g(rng), g(rng), g(rng)};
  return v * (1.0 / v.norm());
}

inline stereo::Mat3 random_rotation(std::mt19937_64& rng,
                                    double max_angle = 3.141592653589793) {
  std::uniform_real_distribution<double> a(-max_angle, max_angle);
  return rotation_about(random_unit(rng), a(rng));
}

inline stereo::GrayImage noise_image(int width, int height,
                                     std::uint64_t seed) {
  stereo::GrayImage img = stereo::GrayImage::create(width, height);
  std::mt19937_64 rng(seed);
  for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

// Two-view setup with a gentle relative rotation so random frustum points
// stay in front of both cameras.
struct TwoViewRig {
  stereo::Mat3 r;
  stereo::Vec3 t;
  stereo::IntrinsicMatrix kl{500.0, 500.0, 320.0, 240.0};
  stereo::IntrinsicMatrix kr{480.0, 490.0, 310.0, 250.0};
};

inline TwoViewRig random_two_view(std::mt19937_64& rng) {
  TwoViewRig rig;
  rig.r = random_rotation(rng, 0.15);
  std::uniform_real_distribution<double> comp(-0.1, 0.1);
  stereo::Vec3 c{0.2 + comp(rng), comp(rng), comp(rng)};  // right center, left frame
  rig.t = -(rig.r * c);
  return rig;
}

struct ViewPair {
  stereo::Vec3 left;   // point in the left camera frame
  stereo::Vec3 right;  // same point in the right camera frame
  stereo::Correspondence pix;
};

inline std::vector<ViewPair> sample_views(const TwoViewRig& rig, int n,
                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> z(2.0, 8.0);
  std::uniform_real_distribution<double> lat(-0.5, 0.5);
  std::vector<ViewPair> out;
  while (static_cast<int>(out.size()) < n) {
    ViewPair s;
    s.left = {lat(rng) * z(rng), lat(rng) * z(rng), z(rng)};
    s.right = rig.r * s.left + rig.t;
    if (s.right.z <= 0.1) continue;
    s.pix.left = stereo::project(rig.kl, s.left);
    s.pix.right = stereo::project(rig.kr, s.right);
    out.push_back(s);
  }
  return out;
}

inline stereo::CostVolume make_volume(int width, int height, int d_max,
                                      const std::vector<float>& costs) {
  stereo::CostVolume vol = stereo::CostVolume::create(
      width, height, d_max, std::numeric_limits<std::size_t>::max());
  vol.costs = costs;
  return vol;
}

}  // namespace testutil

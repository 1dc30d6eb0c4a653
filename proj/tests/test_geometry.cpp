#include <random>

#include "doctest.h"
#include "stereokit/errors.hpp"
#include "stereokit/geometry.hpp"
#include "test_support.hpp"

using stereo::Mat3;
using stereo::PoseSE3;
using stereo::Vec3;

TEST_CASE("skew matrix entries") {
  const Mat3 s = stereo::skew({1.0, 2.0, 3.0});
  const Mat3 expect{{0, -3, 2, 3, 0, -1, -2, 1, 0}};
  CHECK((s - expect).max_abs() == 0.0);

  CHECK(stereo::skew({0, 0, 0}).max_abs() == 0.0);
}

TEST_CASE("skew is antisymmetric and annihilates its own vector") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 a{c(rng), c(rng), c(rng)};
    const Mat3 s = stereo::skew(a);
    CHECK((s + s.transposed()).max_abs() == 0.0);
    CHECK((s * a).norm() == 0.0);
  }
}

TEST_CASE("cross product via skew") {
  const Vec3 z = stereo::cross_via_skew({1, 0, 0}, {0, 1, 0});
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);
  CHECK(z.z == 1.0);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 a{c(rng), c(rng), c(rng)};
    const Vec3 b{c(rng), c(rng), c(rng)};
    CHECK(stereo::cross_via_skew(a, a).norm() == 0.0);
    // skew(a) b = -skew(b) a
    const Vec3 sum = stereo::skew(a) * b + stereo::skew(b) * a;
    CHECK(sum.norm() < 1e-12);
  }
}

TEST_CASE("rotation predicate") {
  CHECK(stereo::is_rotation(Mat3::identity()));
  CHECK(stereo::is_rotation(
      testutil::rotation_about({0, 0, 1}, 30.0 * 3.141592653589793 / 180.0)));

  Mat3 stretched = Mat3::identity();
  stretched(0, 0) = 2.0;
  CHECK_FALSE(stereo::is_rotation(stretched));

  // Orthonormal but left-handed: a reflection is not a rotation.
  Mat3 mirror = Mat3::identity();
  mirror(2, 2) = -1.0;
  CHECK_FALSE(stereo::is_rotation(mirror));
}

TEST_CASE("pose transforms") {
  const PoseSE3 shift(Mat3::identity(), {1, 2, 3});
  const Vec3 moved = stereo::transform_point(shift, {0, 0, 0});
  CHECK(moved.x == 1.0);
  CHECK(moved.y == 2.0);
  CHECK(moved.z == 3.0);

  const PoseSE3 ident;
  const Vec3 p{4, -5, 6};
  CHECK((stereo::transform_point(ident, p) - p).norm() == 0.0);
}

TEST_CASE("pose inverse and composition") {
  const PoseSE3 ident_inv = stereo::pose_inverse(PoseSE3{});
  CHECK((ident_inv.rotation - Mat3::identity()).max_abs() == 0.0);
  CHECK(ident_inv.translation.norm() == 0.0);

  const PoseSE3 back =
      stereo::pose_inverse(PoseSE3(Mat3::identity(), {1, 0, 0}));
  CHECK(back.translation.x == -1.0);
  CHECK(back.translation.y == 0.0);
  CHECK(back.translation.z == 0.0);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> c(-4.0, 4.0);
  for (int i = 0; i < 30; ++i) {
    const PoseSE3 pose(testutil::random_rotation(rng),
                       {c(rng), c(rng), c(rng)});
    const Vec3 x{c(rng), c(rng), c(rng)};

    const PoseSE3 round = stereo::compose(pose, stereo::pose_inverse(pose));
    CHECK((stereo::transform_point(round, x) - x).norm() < 1e-12);

    const PoseSE3 inv2 = stereo::pose_inverse(stereo::pose_inverse(pose));
    CHECK((inv2.rotation - pose.rotation).max_abs() < 1e-12);
    CHECK((inv2.translation - pose.translation).norm() < 1e-12);
  }
}

TEST_CASE("compose applies the second argument first") {
  // b translates by +x, a rotates 90 degrees about z; the combined transform
  // of the origin must be a(b(0)) = a((1,0,0)) = (0,1,0).
  const PoseSE3 b(Mat3::identity(), {1, 0, 0});
  const PoseSE3 a(testutil::rotation_about({0, 0, 1}, 3.141592653589793 / 2),
                  {0, 0, 0});
  const Vec3 p = stereo::transform_point(stereo::compose(a, b), {0, 0, 0});
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pose construction rejects non-rotations") {
  Mat3 bad = Mat3::identity();
  bad(1, 1) = 1.0 + 1e-6;
  CHECK_THROWS_AS(PoseSE3(bad, {0, 0, 0}), stereo::InvariantViolation);
}

TEST_CASE("matrix inverse") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    const Mat3 r = testutil::random_rotation(rng);
    const Mat3 prod = r * r.inverse();
    CHECK((prod - Mat3::identity()).max_abs() < 1e-12);
  }

  Mat3 singular;  // zero matrix
  CHECK_THROWS_AS(singular.inverse(), stereo::InvariantViolation);
}

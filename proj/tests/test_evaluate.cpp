#include <cmath>
#include <random>

#include "doctest.h"
#include "stereokit/errors.hpp"
#include "stereokit/evaluate.hpp"

using stereo::DisparityImage;
using stereo::EvalReport;

namespace {

DisparityImage constant_map(int w, int h, float d) {
  DisparityImage img = DisparityImage::create(w, h);
  std::fill(img.values.begin(), img.values.end(), d);
  return img;
}

}  // namespace

TEST_CASE("rms error") {
  const DisparityImage truth = constant_map(10, 10, 4.0f);

  SUBCASE("perfect estimate") {
    CHECK(stereo::rms_error(truth, truth) == 0.0);
  }

  SUBCASE("uniform offset") {
    const DisparityImage est = constant_map(10, 10, 5.0f);
    CHECK(stereo::rms_error(est, truth) == 1.0);
  }

  SUBCASE("half the pixels off by two") {
    DisparityImage est = constant_map(10, 10, 4.0f);
    for (int v = 0; v < 10; ++v)
      for (int u = 0; u < 5; ++u) est.at(u, v) = 6.0f;
    CHECK(stereo::rms_error(est, truth) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }

  SUBCASE("swapping the arguments changes nothing") {
    DisparityImage est = constant_map(10, 10, 4.0f);
    std::mt19937_64 rng(80);
    std::uniform_real_distribution<float> jitter(-2.0f, 2.0f);
    for (auto& d : est.values) d += jitter(rng);
    CHECK(stereo::rms_error(est, truth) == stereo::rms_error(truth, est));
  }
}

TEST_CASE("percentage of error pixels") {
  const DisparityImage truth = constant_map(10, 10, 4.0f);

  SUBCASE("one bad pixel in a hundred is one percent") {
    DisparityImage est = constant_map(10, 10, 4.0f);
    est.at(3, 7) = 9.0f;
    CHECK(stereo::pep(est, truth, 1.0) == 1.0);
  }

  SUBCASE("clean and saturated ends") {
    CHECK(stereo::pep(truth, truth, 1.0) == 0.0);
    const DisparityImage est = constant_map(10, 10, 20.0f);
    CHECK(stereo::pep(est, truth, 1.0) == 100.0);
  }

  SUBCASE("errors exactly at delta are not counted") {
    const DisparityImage est = constant_map(10, 10, 5.0f);
    CHECK(stereo::pep(est, truth, 1.0) == 0.0);
    CHECK(stereo::pep(est, truth, 0.5) == 100.0);
  }

  SUBCASE("monotone non-increasing in delta") {
    DisparityImage est = constant_map(10, 10, 4.0f);
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<float> jitter(-3.0f, 3.0f);
    for (auto& d : est.values) d += jitter(rng);
    double prev = 100.0;
    for (const double delta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const double p = stereo::pep(est, truth, delta);
      CHECK(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("evaluation sets") {
  DisparityImage truth = constant_map(4, 2, 3.0f);
  DisparityImage est = constant_map(4, 2, 3.0f);
  truth.at(0, 0) = DisparityImage::kInvalid;
  est.at(1, 0) = DisparityImage::kInvalid;
  est.at(2, 0) = 9.0f;

  SUBCASE("default mode intersects validity") {
    const EvalReport ev = stereo::evaluate_disparity(est, truth, 1.0);
    CHECK(ev.n_evaluated == 6);
    CHECK(ev.both_valid == 6);
    CHECK(ev.pep == doctest::Approx(100.0 / 6.0).epsilon(1e-12));
    CHECK(ev.delta_d == 1.0);
  }

  SUBCASE("all-pixels mode charges missing estimates") {
    const EvalReport ev = stereo::evaluate_disparity(est, truth, 1.0, true);
    CHECK(ev.n_evaluated == 7);  // every truth-valid pixel
    CHECK(ev.both_valid == 6);
    CHECK(ev.pep == doctest::Approx(100.0 * 2.0 / 7.0).epsilon(1e-12));
    // rms stays a both-valid statistic
    CHECK(ev.rms == doctest::Approx(std::sqrt(36.0 / 6.0)).epsilon(1e-12));
  }

  SUBCASE("disjoint validity is an error") {
    DisparityImage a = constant_map(2, 1, 1.0f);
    DisparityImage b = constant_map(2, 1, 1.0f);
    a.at(0, 0) = DisparityImage::kInvalid;
    b.at(1, 0) = DisparityImage::kInvalid;
    CHECK_THROWS_AS(stereo::evaluate_disparity(a, b, 1.0),
                    stereo::EmptyEvaluationSet);
  }

  SUBCASE("guards") {
    const DisparityImage narrow = constant_map(3, 2, 3.0f);
    CHECK_THROWS_AS(stereo::evaluate_disparity(narrow, truth, 1.0),
                    stereo::SizeMismatch);
    CHECK_THROWS_AS(stereo::evaluate_disparity(est, truth, -1.0),
                    stereo::InvariantViolation);
  }
}

TEST_CASE("throughput metric") {
  SUBCASE("reference points are exact") {
    CHECK(stereo::mde_per_s(100, 100, 64, 0.64) == 1.0);
    CHECK(stereo::mde_per_s(1280, 960, 128, 1.0) == 157.2864);
  }

  SUBCASE("doubling the time halves the rate bitwise") {
    const double fast = stereo::mde_per_s(640, 480, 96, 0.37);
    const double slow = stereo::mde_per_s(640, 480, 96, 0.74);
    CHECK(fast / 2.0 == slow);
  }

  SUBCASE("non-positive time is rejected") {
    CHECK_THROWS_AS(stereo::mde_per_s(10, 10, 10, 0.0),
                    stereo::NonPositiveTime);
    CHECK_THROWS_AS(stereo::mde_per_s(10, 10, 10, -2.0),
                    stereo::NonPositiveTime);
  }
}

#include <string>

#include "doctest.h"
#include "stereokit/bench.hpp"
#include "stereokit/evaluate.hpp"
#include "test_support.hpp"

TEST_CASE("fnv-1a 64-bit known vectors") {
  CHECK(stereo::fnv1a64("", 0) == 14695981039346656037ull);
  CHECK(stereo::fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
  const std::string ab = "ab";
  CHECK(stereo::fnv1a64(ab.data(), ab.size()) != stereo::fnv1a64("a", 1));
}

TEST_CASE("bench runs are deterministic across worker counts") {
  const stereo::GrayImage left = testutil::noise_image(64, 32, 120);
  const stereo::GrayImage right = testutil::noise_image(64, 32, 121);
  stereo::MatchParams mp;
  mp.d_max = 8;

  const stereo::BenchReport report =
      stereo::bench_matcher(left, right, mp, nullptr, {1, 2});
  REQUIRE(report.runs.size() == 2);
  CHECK(report.identical);
  CHECK(report.runs[0].workers == 1);
  CHECK(report.runs[1].workers == 2);
  CHECK(report.runs[0].checksum == report.runs[1].checksum);
  for (const auto& run : report.runs) {
    CHECK(run.seconds > 0.0);
    CHECK(run.mde == stereo::mde_per_s(64, 32, 8, run.seconds));
  }
  CHECK(report.speedup(2) ==
        report.runs[0].seconds / report.runs[1].seconds);
  CHECK(report.speedup(7) == 0.0);
}

TEST_CASE("smoothed bench runs stay deterministic") {
  const stereo::GrayImage left = testutil::noise_image(48, 24, 122);
  const stereo::GrayImage right = testutil::noise_image(48, 24, 123);
  stereo::MatchParams mp;
  mp.d_max = 6;
  mp.cost = stereo::CostKind::NCC;
  stereo::SgmParams sgm;

  const stereo::BenchReport report =
      stereo::bench_matcher(left, right, mp, &sgm, {2, 1, 2});
  REQUIRE(report.runs.size() == 3);
  CHECK(report.identical);
  CHECK(report.runs[0].checksum == report.runs[2].checksum);
}

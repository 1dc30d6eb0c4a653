#pragma once

#include <cstdint>
#include <vector>

#include "stereokit/matching.hpp"

namespace stereo {

std::uint64_t fnv1a64(const void* data, std::size_t bytes);

struct BenchRun {
  unsigned workers = 1;
  double seconds = 0.0;
  double mde = 0.0;  // million disparity evaluations per second
  std::uint64_t checksum = 0;  // over the aggregated volume and disparities
};

struct BenchReport {
  std::vector<BenchRun> runs;
  bool identical = true;  // every run produced bit-identical outputs

  /// Wall-time ratio of the 1-worker run to the given run's worker count;
  /// 0 when either run is missing.
  double speedup(unsigned workers) const;
};

/// Times the left-reference matching stage (cost volume, optional
/// semi-global smoothing, winner-takes-all) once per worker count and
/// fingerprints the outputs.
BenchReport bench_matcher(const GrayImage& left, const GrayImage& right,
                          const MatchParams& params, const SgmParams* sgm,
                          const std::vector<unsigned>& worker_counts);

}  // namespace stereo

#pragma once

#include <cstddef>

#include "stereokit/matching.hpp"

namespace stereo {

struct EvalReport {
  double rms = 0.0;      // root-mean-square error in pixels, both-valid set
  double pep = 0.0;      // percentage of error pixels, 0..100
  double delta_d = 1.0;  // PEP threshold in pixels
  std::size_t n_evaluated = 0;  // pixels entering the PEP denominator
  std::size_t both_valid = 0;   // pixels entering the RMS sum
  double mde_per_s = 0.0;       // filled by callers that time a matcher run
  double wall_time_s = 0.0;
};

/// RMS error over pixels valid in both maps. Throws SizeMismatch on
/// differing dimensions, EmptyEvaluationSet when no pixel is valid in both.
double rms_error(const DisparityImage& estimate, const DisparityImage& truth);

/// Percentage (0..100) of pixels with |estimate - truth| strictly greater
/// than delta_d, over pixels valid in both maps. Same errors as rms_error.
double pep(const DisparityImage& estimate, const DisparityImage& truth,
           double delta_d);

/// Combined metrics. With all_pixels, every ground-truth-valid pixel enters
/// the PEP denominator and invalid estimates count as errors; RMS remains a
/// both-valid statistic. Throws EmptyEvaluationSet when the selected
/// denominator set is empty. Timing fields are left zero.
EvalReport evaluate_disparity(const DisparityImage& estimate,
                              const DisparityImage& truth, double delta_d,
                              bool all_pixels = false);

/// Throughput in million disparity evaluations per second:
/// width * height * d_max * 1e-6 / seconds.
/// Throws NonPositiveTime when seconds <= 0.
double mde_per_s(int width, int height, int d_max, double seconds);

}  // namespace stereo

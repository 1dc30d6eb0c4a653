#include "stereokit/evaluate.hpp"

#include <cmath>

#include "stereokit/errors.hpp"

namespace stereo {

EvalReport evaluate_disparity(const DisparityImage& estimate,
                              const DisparityImage& truth, double delta_d,
                              bool all_pixels) {
  if (estimate.width != truth.width || estimate.height != truth.height)
    throw SizeMismatch("estimate and ground truth differ in size: " +
                       std::to_string(estimate.width) + "x" +
                       std::to_string(estimate.height) + " vs " +
                       std::to_string(truth.width) + "x" +
                       std::to_string(truth.height));
  if (!(delta_d >= 0.0)) throw InvariantViolation("delta_d must be >= 0");

  EvalReport ev;
  ev.delta_d = delta_d;
  double sq_sum = 0.0;
  std::size_t bad = 0;

  for (int v = 0; v < truth.height; ++v) {
    for (int u = 0; u < truth.width; ++u) {
      const bool tv = truth.is_valid(u, v);
      const bool evalid = estimate.is_valid(u, v);
      if (tv && evalid) {
        const double err = static_cast<double>(estimate.at(u, v)) -
                           static_cast<double>(truth.at(u, v));
        sq_sum += err * err;
        ++ev.both_valid;
        if (std::abs(err) > delta_d) ++bad;
      } else if (tv && all_pixels) {
        ++bad;  // missing estimate counts against coverage
      }
      if (tv && (evalid || all_pixels)) ++ev.n_evaluated;
    }
  }

  if (ev.n_evaluated == 0)
    throw EmptyEvaluationSet("no pixel is valid in both maps");
  ev.pep = 100.0 * static_cast<double>(bad) /
           static_cast<double>(ev.n_evaluated);
  ev.rms = ev.both_valid > 0
               ? std::sqrt(sq_sum / static_cast<double>(ev.both_valid))
               : 0.0;
  return ev;
}

double rms_error(const DisparityImage& estimate, const DisparityImage& truth) {
  return evaluate_disparity(estimate, truth, 0.0).rms;
}

double pep(const DisparityImage& estimate, const DisparityImage& truth,
           double delta_d) {
  return evaluate_disparity(estimate, truth, delta_d).pep;
}

double mde_per_s(int width, int height, int d_max, double seconds) {
  if (!(seconds > 0.0))
    throw NonPositiveTime("elapsed time must be positive, got " +
                          std::to_string(seconds));
  return static_cast<double>(width) * height * d_max * 1e-6 / seconds;
}

}  // namespace stereo

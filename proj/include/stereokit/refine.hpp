#pragma once

#include "stereokit/matching.hpp"
#include "stereokit/parallel.hpp"

namespace stereo {

struct RefineParams {
  bool lr_check = false;
  double lr_threshold = 1.0;  // max |dL - dR| before a pixel is rejected
  bool subpixel = false;
  bool median = false;
  int median_window = 3;

  void validate() const;
};

/// Invalidates left-view pixels whose disparity is not confirmed by the
/// right view: |d_L(u, v) - d_R(u - round(d_L), v)| must be <= threshold,
/// and the looked-up right pixel must exist and be valid.
DisparityImage lr_consistency_check(const DisparityImage& left,
                                    const DisparityImage& right,
                                    double threshold,
                                    const ParallelFor& pf = serial_for());

/// Parabola fit through the winning cost and its two disparity neighbors:
/// offset = (c- - c+) / (2 (c- - 2 c0 + c+)), clamped to [-0.5, 0.5].
/// Pixels at the disparity range ends, with invalid neighbor costs, or with
/// non-positive curvature keep their integer estimate.
DisparityImage subpixel_refine(const DisparityImage& disp,
                               const CostVolume& volume,
                               const ParallelFor& pf = serial_for());

/// Median filter over valid neighbors (window clipped at the borders).
/// Valid pixels are replaced by the median of the valid values around them;
/// invalid pixels are filled only when at least half the full window is
/// valid, otherwise they stay invalid.
DisparityImage median_fill(const DisparityImage& disp, int window,
                           const ParallelFor& pf = serial_for());

/// lr-check, then subpixel, then median, each only if enabled. vol_left may
/// be null when subpixel is off.
DisparityImage refine_disparity(const DisparityImage& left,
                                const DisparityImage& right,
                                const CostVolume* vol_left,
                                const RefineParams& params,
                                const ParallelFor& pf = serial_for());

}  // namespace stereo

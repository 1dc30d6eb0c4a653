#include "stereokit/refine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stereokit/errors.hpp"

namespace stereo {

void RefineParams::validate() const {
  if (!(lr_threshold >= 0.0))
    throw InvariantViolation("lr threshold must be >= 0");
  if (median_window < 1 || median_window % 2 == 0)
    throw InvariantViolation("median window must be odd and >= 1");
}

DisparityImage lr_consistency_check(const DisparityImage& left,
                                    const DisparityImage& right,
                                    double threshold, const ParallelFor& pf) {
  if (left.width != right.width || left.height != right.height)
    throw SizeMismatch("left and right disparity maps differ in size");
  if (!(threshold >= 0.0))
    throw InvariantViolation("lr threshold must be >= 0");

  DisparityImage out = DisparityImage::create(left.width, left.height);
  pf(static_cast<std::size_t>(left.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < left.width; ++u) {
      const float dl = left.at(u, v);
      if (dl == DisparityImage::kInvalid) continue;
      const int ur = u - static_cast<int>(std::lround(dl));
      if (ur < 0 || ur >= right.width) continue;
      const float dr = right.at(ur, v);
      if (dr == DisparityImage::kInvalid) continue;
      if (std::abs(dl - dr) <= threshold) out.at(u, v) = dl;
    }
  });
  return out;
}

DisparityImage subpixel_refine(const DisparityImage& disp,
                               const CostVolume& volume,
                               const ParallelFor& pf) {
  if (disp.width != volume.width || disp.height != volume.height)
    throw SizeMismatch("disparity map and cost volume differ in size");

  DisparityImage out = disp;
  pf(static_cast<std::size_t>(disp.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < disp.width; ++u) {
      const float d = disp.at(u, v);
      if (d == DisparityImage::kInvalid) continue;
      const int di = static_cast<int>(std::lround(d));
      if (di < 1 || di > volume.d_max - 1) continue;
      const float cm = volume.at(u, v, di - 1);
      const float c0 = volume.at(u, v, di);
      const float cp = volume.at(u, v, di + 1);
      if (cm == CostVolume::kInvalidCost || c0 == CostVolume::kInvalidCost ||
          cp == CostVolume::kInvalidCost)
        continue;
      const double curvature = static_cast<double>(cm) - 2.0 * c0 + cp;
      if (!(curvature > 0.0)) continue;
      const double offset =
          std::clamp((static_cast<double>(cm) - cp) / (2.0 * curvature), -0.5,
                     0.5);
      out.at(u, v) = static_cast<float>(di + offset);
    }
  });
  return out;
}

DisparityImage median_fill(const DisparityImage& disp, int window,
                           const ParallelFor& pf) {
  if (window < 1 || window % 2 == 0)
    throw InvariantViolation("median window must be odd and >= 1");
  const int r = window / 2;
  const int full = window * window;

  DisparityImage out = DisparityImage::create(disp.width, disp.height);
  pf(static_cast<std::size_t>(disp.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    std::vector<float> vals;
    vals.reserve(static_cast<std::size_t>(full));
    for (int u = 0; u < disp.width; ++u) {
      vals.clear();
      for (int dv = -r; dv <= r; ++dv) {
        const int q = v + dv;
        if (q < 0 || q >= disp.height) continue;
        for (int du = -r; du <= r; ++du) {
          const int p = u + du;
          if (p < 0 || p >= disp.width) continue;
          const float val = disp.at(p, q);
          if (val != DisparityImage::kInvalid) vals.push_back(val);
        }
      }
      const bool was_valid = disp.is_valid(u, v);
      if (was_valid || 2 * static_cast<int>(vals.size()) >= full) {
        if (!vals.empty()) {
          // Lower middle on even counts keeps the result an observed value.
          const std::size_t mid = (vals.size() - 1) / 2;
          std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
          out.at(u, v) = vals[mid];
        }
      }
    }
  });
  return out;
}

DisparityImage refine_disparity(const DisparityImage& left,
                                const DisparityImage& right,
                                const CostVolume* vol_left,
                                const RefineParams& params,
                                const ParallelFor& pf) {
  params.validate();
  DisparityImage out = left;
  if (params.lr_check)
    out = lr_consistency_check(out, right, params.lr_threshold, pf);
  if (params.subpixel) {
    if (!vol_left)
      throw InvariantViolation(
          "subpixel refinement needs the aggregated cost volume");
    out = subpixel_refine(out, *vol_left, pf);
  }
  if (params.median) out = median_fill(out, params.median_window, pf);
  return out;
}

}  // namespace stereo

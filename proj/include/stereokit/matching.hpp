#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "stereokit/camera.hpp"
#include "stereokit/parallel.hpp"

namespace stereo {

enum class CostKind { AD, SD, SAD, SSD, NCC, FBS };

enum class ReferenceView { Left, Right };

struct MatchParams {
  int d_max = 64;        // largest disparity hypothesis, inclusive
  int block_radius = 2;  // window = (2r+1)^2; ignored by AD and SD
  CostKind cost = CostKind::SAD;
  double fbs_sigma_spatial = 3.0;
  double fbs_sigma_range = 20.0;

  /// Window radius the cost kind actually uses (0 for pixelwise kinds).
  int effective_radius() const {
    return (cost == CostKind::AD || cost == CostKind::SD) ? 0 : block_radius;
  }

  void validate() const;
};

struct SgmParams {
  double lambda1 = 8.0;  // penalty for |d - d'| == 1 between neighbors
  double lambda2 = 32.0; // penalty for |d - d'| > 1
  int paths = 8;         // 4 (axis-aligned) or 8 (plus diagonals)

  void validate() const;
};

/// Dense (u, v, d) cost grid, d in [0, d_max]. Cells outside the matchable
/// region hold kInvalidCost.
struct CostVolume {
  int width = 0;
  int height = 0;
  int d_max = 0;
  std::vector<float> costs;

  static constexpr float kInvalidCost = std::numeric_limits<float>::max();

  static CostVolume create(int width, int height, int d_max,
                           std::size_t byte_cap);

  std::size_t index(int u, int v, int d) const {
    return (static_cast<std::size_t>(v) * width + u) *
               (static_cast<std::size_t>(d_max) + 1) +
           d;
  }
  float at(int u, int v, int d) const { return costs[index(u, v, d)]; }
  float& at(int u, int v, int d) { return costs[index(u, v, d)]; }
};

/// Per-pixel disparity, kInvalid (-1) marking pixels without an estimate.
struct DisparityImage {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  static constexpr float kInvalid = -1.0f;

  static DisparityImage create(int width, int height);

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * width + u;
  }
  float at(int u, int v) const { return values[index(u, v)]; }
  float& at(int u, int v) { return values[index(u, v)]; }
  bool is_valid(int u, int v) const { return at(u, v) != kInvalid; }
};

/// Default cap on cost volume allocations (bytes).
inline constexpr std::size_t kDefaultVolumeCap = 2ull << 30;

/// Computes matching costs for every pixel and disparity hypothesis.
/// Left reference compares left(u, v) against right(u - d, v); right
/// reference compares right(u, v) against left(u + d, v). Hypotheses whose
/// window leaves either image are kInvalidCost.
/// Throws ImageSizeMismatch when the images differ in size or are too narrow
/// for d_max plus the window, VolumeTooLarge when the volume would exceed
/// byte_cap.
CostVolume build_cost_volume(const GrayImage& left, const GrayImage& right,
                             const MatchParams& params,
                             ReferenceView reference = ReferenceView::Left,
                             const ParallelFor& pf = serial_for(),
                             std::size_t byte_cap = kDefaultVolumeCap);

/// Semi-global smoothing: sums, over 4 or 8 scanline directions, path costs
/// L_r(p, d) = c(p, d) + min(L_r(p-r, d),
///                           L_r(p-r, d+-1) + lambda1,
///                           min_k L_r(p-r, k) + lambda2)
///           - min_k L_r(p-r, k).
/// Invalid input cells stay invalid and are skipped as predecessors; a path
/// restarts (L = c) when no finite predecessor exists. With
/// lambda1 = lambda2 = 0 the result equals the input summed over paths.
CostVolume sgm_aggregate(const CostVolume& volume, const SgmParams& params,
                         const ParallelFor& pf = serial_for());

/// Path costs of a single scanline direction; dx, dy in {-1, 0, 1}, not both
/// zero. sgm_aggregate sums this over its 4 or 8 directions (params.paths is
/// ignored here).
CostVolume sgm_path_costs(const CostVolume& volume, const SgmParams& params,
                          int dx, int dy,
                          const ParallelFor& pf = serial_for());

/// Winner-takes-all: per pixel the d of smallest cost, ties resolved to the
/// smallest d. Pixels with no finite hypothesis get DisparityImage::kInvalid.
DisparityImage wta(const CostVolume& volume,
                   const ParallelFor& pf = serial_for());

struct MatchResult {
  DisparityImage left;   // disparities of the left view
  DisparityImage right;  // disparities of the right view
  CostVolume vol_left;   // aggregated volume the left map was read from
  CostVolume vol_right;
};

/// Full matcher: cost volumes for both reference views, optional semi-global
/// smoothing, winner-takes-all extraction.
MatchResult match_stereo(const GrayImage& left, const GrayImage& right,
                         const MatchParams& params,
                         const SgmParams* sgm = nullptr,
                         const ParallelFor& pf = serial_for(),
                         std::size_t byte_cap = kDefaultVolumeCap);

}  // namespace stereo

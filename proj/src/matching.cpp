#include "stereokit/matching.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "stereokit/errors.hpp"

namespace stereo {

void MatchParams::validate() const {
  if (d_max < 0) throw InvariantViolation("d_max must be >= 0");
  if (block_radius < 0) throw InvariantViolation("block radius must be >= 0");
  if (!(fbs_sigma_spatial > 0.0) || !(fbs_sigma_range > 0.0))
    throw InvariantViolation("bilateral sigmas must be positive");
}

void SgmParams::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= lambda1))
    throw InvariantViolation("penalties must satisfy 0 <= lambda1 <= lambda2");
  if (paths != 4 && paths != 8)
    throw InvariantViolation("path count must be 4 or 8");
}

CostVolume CostVolume::create(int width, int height, int d_max,
                              std::size_t byte_cap) {
  if (width < 1 || height < 1)
    throw InvariantViolation("cost volume dimensions must be at least 1x1");
  if (d_max < 0) throw InvariantViolation("d_max must be >= 0");
  const std::size_t cells = static_cast<std::size_t>(width) * height *
                            (static_cast<std::size_t>(d_max) + 1);
  if (cells > byte_cap / sizeof(float))
    throw VolumeTooLarge("cost volume needs " +
                         std::to_string(cells * sizeof(float)) +
                         " bytes, cap is " + std::to_string(byte_cap));
  CostVolume vol;
  vol.width = width;
  vol.height = height;
  vol.d_max = d_max;
  vol.costs.assign(cells, kInvalidCost);
  return vol;
}

DisparityImage DisparityImage::create(int width, int height) {
  if (width < 1 || height < 1)
    throw InvariantViolation("disparity image dimensions must be at least 1x1");
  DisparityImage img;
  img.width = width;
  img.height = height;
  img.values.assign(static_cast<std::size_t>(width) * height, kInvalid);
  return img;
}

namespace {

// ref(u, v) is compared against other(u + sign * d, v): sign = -1 when the
// left image is the reference, +1 when the right image is.
struct MatchFrame {
  const GrayImage& ref;
  const GrayImage& other;
  int sign;
};

MatchFrame make_frame(const GrayImage& left, const GrayImage& right,
                      ReferenceView reference) {
  if (reference == ReferenceView::Left) return {left, right, -1};
  return {right, left, +1};
}

void fill_pixelwise(CostVolume& vol, const MatchFrame& f, bool squared,
                    const ParallelFor& pf) {
  const int w = vol.width;
  pf(static_cast<std::size_t>(vol.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < w; ++u) {
      for (int d = 0; d <= vol.d_max; ++d) {
        const int ou = u + f.sign * d;
        if (ou < 0 || ou >= w) continue;
        const int diff = static_cast<int>(f.ref.at(u, v)) -
                         static_cast<int>(f.other.at(ou, v));
        vol.at(u, v, d) =
            static_cast<float>(squared ? diff * diff : std::abs(diff));
      }
    }
  });
}

void fill_block(CostVolume& vol, const MatchFrame& f, int r, bool squared,
                const ParallelFor& pf) {
  const int w = vol.width;
  const int h = vol.height;
  pf(static_cast<std::size_t>(h), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    if (v < r || v > h - 1 - r) return;
    for (int u = r; u <= w - 1 - r; ++u) {
      for (int d = 0; d <= vol.d_max; ++d) {
        const int ou = u + f.sign * d;
        if (ou < r || ou > w - 1 - r) continue;
        long long sum = 0;
        for (int dv = -r; dv <= r; ++dv) {
          for (int du = -r; du <= r; ++du) {
            const int diff = static_cast<int>(f.ref.at(u + du, v + dv)) -
                             static_cast<int>(f.other.at(ou + du, v + dv));
            sum += squared ? diff * diff : std::abs(diff);
          }
        }
        vol.at(u, v, d) = static_cast<float>(sum);
      }
    }
  });
}

void fill_ncc(CostVolume& vol, const MatchFrame& f, int r,
              const ParallelFor& pf) {
  const int w = vol.width;
  const int h = vol.height;
  const double n = static_cast<double>((2 * r + 1) * (2 * r + 1));
  pf(static_cast<std::size_t>(h), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    if (v < r || v > h - 1 - r) return;
    for (int u = r; u <= w - 1 - r; ++u) {
      for (int d = 0; d <= vol.d_max; ++d) {
        const int ou = u + f.sign * d;
        if (ou < r || ou > w - 1 - r) continue;
        long long sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (int dv = -r; dv <= r; ++dv) {
          for (int du = -r; du <= r; ++du) {
            const long long a = f.ref.at(u + du, v + dv);
            const long long b = f.other.at(ou + du, v + dv);
            sa += a;
            sb += b;
            saa += a * a;
            sbb += b * b;
            sab += a * b;
          }
        }
        // Centered moments from raw integer sums; clamp tiny negative
        // variances produced by cancellation.
        const double var_a =
            std::max(0.0, static_cast<double>(saa) - sa * (sa / n));
        const double var_b =
            std::max(0.0, static_cast<double>(sbb) - sb * (sb / n));
        const double cov = static_cast<double>(sab) - sa * (sb / n);
        const double denom = std::sqrt(var_a * var_b);  // = n * sigma_a * sigma_b
        double ncc = 0.0;  // textureless windows: similarity 0
        if (denom >= 1e-12 * n) ncc = cov / denom;
        vol.at(u, v, d) = static_cast<float>(1.0 - ncc);
      }
    }
  });
}

void fill_bilateral(CostVolume& vol, const MatchFrame& f, int r,
                    double sigma_spatial, double sigma_range,
                    const ParallelFor& pf) {
  const int w = vol.width;
  const int h = vol.height;

  // Pixelwise absolute differences feed the aggregation.
  CostVolume base = CostVolume::create(
      w, h, vol.d_max, std::numeric_limits<std::size_t>::max());
  fill_pixelwise(base, f, false, pf);

  const int side = 2 * r + 1;
  std::vector<double> w_spatial(static_cast<std::size_t>(side) * side);
  for (int dv = -r; dv <= r; ++dv)
    for (int du = -r; du <= r; ++du)
      w_spatial[static_cast<std::size_t>(dv + r) * side + (du + r)] =
          std::exp(-(du * du + dv * dv) / (2.0 * sigma_spatial * sigma_spatial));

  std::array<double, 256> w_range;
  for (int i = 0; i < 256; ++i)
    w_range[i] = std::exp(-(static_cast<double>(i) * i) /
                          (2.0 * sigma_range * sigma_range));

  pf(static_cast<std::size_t>(h), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    if (v < r || v > h - 1 - r) return;
    for (int u = r; u <= w - 1 - r; ++u) {
      const int center = f.ref.at(u, v);
      for (int d = 0; d <= vol.d_max; ++d) {
        const int ou = u + f.sign * d;
        if (ou < r || ou > w - 1 - r) continue;
        double acc = 0.0;
        double wsum = 0.0;
        for (int dv = -r; dv <= r; ++dv) {
          for (int du = -r; du <= r; ++du) {
            const double wd =
                w_spatial[static_cast<std::size_t>(dv + r) * side + (du + r)];
            const double wr =
                w_range[std::abs(static_cast<int>(f.ref.at(u + du, v + dv)) -
                                 center)];
            acc += wd * wr * base.at(u + du, v + dv, d);
            wsum += wd * wr;
          }
        }
        vol.at(u, v, d) = static_cast<float>(acc / wsum);  // wsum >= center weight 1
      }
    }
  });
}

}  // namespace

CostVolume build_cost_volume(const GrayImage& left, const GrayImage& right,
                             const MatchParams& params, ReferenceView reference,
                             const ParallelFor& pf, std::size_t byte_cap) {
  params.validate();
  if (left.width != right.width || left.height != right.height)
    throw ImageSizeMismatch("stereo pair differs in size: " +
                            std::to_string(left.width) + "x" +
                            std::to_string(left.height) + " vs " +
                            std::to_string(right.width) + "x" +
                            std::to_string(right.height));
  const int r = params.effective_radius();
  if (left.width <= params.d_max + 2 * r)
    throw ImageSizeMismatch(
        "image width must exceed d_max + 2 * radius to leave a matchable "
        "column");

  CostVolume vol =
      CostVolume::create(left.width, left.height, params.d_max, byte_cap);
  const MatchFrame frame = make_frame(left, right, reference);

  switch (params.cost) {
    case CostKind::AD:
      fill_pixelwise(vol, frame, false, pf);
      break;
    case CostKind::SD:
      fill_pixelwise(vol, frame, true, pf);
      break;
    case CostKind::SAD:
      fill_block(vol, frame, r, false, pf);
      break;
    case CostKind::SSD:
      fill_block(vol, frame, r, true, pf);
      break;
    case CostKind::NCC:
      fill_ncc(vol, frame, r, pf);
      break;
    case CostKind::FBS:
      fill_bilateral(vol, frame, r, params.fbs_sigma_spatial,
                     params.fbs_sigma_range, pf);
      break;
  }
  return vol;
}

DisparityImage wta(const CostVolume& volume, const ParallelFor& pf) {
  DisparityImage out = DisparityImage::create(volume.width, volume.height);
  pf(static_cast<std::size_t>(volume.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < volume.width; ++u) {
      float best = CostVolume::kInvalidCost;
      int best_d = -1;
      for (int d = 0; d <= volume.d_max; ++d) {
        const float c = volume.at(u, v, d);
        if (c == CostVolume::kInvalidCost) continue;
        if (c < best) {  // strict: ties keep the smallest d
          best = c;
          best_d = d;
        }
      }
      if (best_d >= 0) out.at(u, v) = static_cast<float>(best_d);
    }
  });
  return out;
}

namespace {

constexpr int kDirections[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                   {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

// Adds the (dx, dy) directional path cost of every cell into acc. Scanlines
// of one direction are disjoint pixel sets, so they may run in parallel
// without changing the accumulation order at any cell.
void accumulate_path(const CostVolume& volume, CostVolume& acc_vol, float l1,
                     float l2, int dx, int dy, const ParallelFor& pf) {
  const int w = volume.width;
  const int h = volume.height;
  const int dmax = volume.d_max;
  constexpr float kInvalid = CostVolume::kInvalidCost;

  std::vector<std::pair<int, int>> starts;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (u != 0 && u != w - 1 && v != 0 && v != h - 1) continue;
      const int pu = u - dx;
      const int pv = v - dy;
      if (pu < 0 || pu >= w || pv < 0 || pv >= h) starts.emplace_back(u, v);
    }
  }

  pf(starts.size(), [&](std::size_t si) {
    std::vector<float> prev(static_cast<std::size_t>(dmax) + 1);
    std::vector<float> cur(static_cast<std::size_t>(dmax) + 1);
    bool has_prev = false;
    float prev_min = 0.0f;

    int u = starts[si].first;
    int v = starts[si].second;
    while (u >= 0 && u < w && v >= 0 && v < h) {
      const float* c = &volume.costs[volume.index(u, v, 0)];
      float* acc = &acc_vol.costs[acc_vol.index(u, v, 0)];

      float cur_min = kInvalid;
      for (int d = 0; d <= dmax; ++d) {
        if (c[d] == kInvalid) {
          cur[d] = kInvalid;
          continue;
        }
        float val;
        if (!has_prev) {
          val = c[d];
        } else {
          float best = prev_min + l2;
          if (prev[d] != kInvalid) best = std::min(best, prev[d]);
          if (d > 0 && prev[d - 1] != kInvalid)
            best = std::min(best, prev[d - 1] + l1);
          if (d < dmax && prev[d + 1] != kInvalid)
            best = std::min(best, prev[d + 1] + l1);
          val = c[d] + best - prev_min;
        }
        cur[d] = val;
        acc[d] += val;
        if (cur_min == kInvalid || val < cur_min) cur_min = val;
      }

      has_prev = cur_min != kInvalid;
      prev_min = cur_min;
      std::swap(prev, cur);
      u += dx;
      v += dy;
    }
  });
}

// Invalid hypotheses carry no path cost during accumulation (acc stays 0);
// restore the invalid marker afterwards.
void remark_invalid(const CostVolume& volume, CostVolume& out,
                    const ParallelFor& pf) {
  pf(static_cast<std::size_t>(volume.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < volume.width; ++u)
      for (int d = 0; d <= volume.d_max; ++d)
        if (volume.at(u, v, d) == CostVolume::kInvalidCost)
          out.at(u, v, d) = CostVolume::kInvalidCost;
  });
}

CostVolume zeroed_like(const CostVolume& volume) {
  CostVolume out = CostVolume::create(
      volume.width, volume.height, volume.d_max,
      std::numeric_limits<std::size_t>::max());
  std::fill(out.costs.begin(), out.costs.end(), 0.0f);
  return out;
}

}  // namespace

CostVolume sgm_aggregate(const CostVolume& volume, const SgmParams& params,
                         const ParallelFor& pf) {
  params.validate();
  const float l1 = static_cast<float>(params.lambda1);
  const float l2 = static_cast<float>(params.lambda2);

  CostVolume out = zeroed_like(volume);
  for (int dir = 0; dir < params.paths; ++dir)
    accumulate_path(volume, out, l1, l2, kDirections[dir][0],
                    kDirections[dir][1], pf);
  remark_invalid(volume, out, pf);
  return out;
}

CostVolume sgm_path_costs(const CostVolume& volume, const SgmParams& params,
                          int dx, int dy, const ParallelFor& pf) {
  params.validate();
  if (dx < -1 || dx > 1 || dy < -1 || dy > 1 || (dx == 0 && dy == 0))
    throw InvariantViolation(
        "path direction components must be -1, 0 or 1 and not both zero");

  CostVolume out = zeroed_like(volume);
  accumulate_path(volume, out, static_cast<float>(params.lambda1),
                  static_cast<float>(params.lambda2), dx, dy, pf);
  remark_invalid(volume, out, pf);
  return out;
}

MatchResult match_stereo(const GrayImage& left, const GrayImage& right,
                         const MatchParams& params, const SgmParams* sgm,
                         const ParallelFor& pf, std::size_t byte_cap) {
  MatchResult res;
  res.vol_left =
      build_cost_volume(left, right, params, ReferenceView::Left, pf, byte_cap);
  if (sgm) res.vol_left = sgm_aggregate(res.vol_left, *sgm, pf);
  res.left = wta(res.vol_left, pf);

  res.vol_right = build_cost_volume(left, right, params, ReferenceView::Right,
                                    pf, byte_cap);
  if (sgm) res.vol_right = sgm_aggregate(res.vol_right, *sgm, pf);
  res.right = wta(res.vol_right, pf);
  return res;
}

}  // namespace stereo

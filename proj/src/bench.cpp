#include "stereokit/bench.hpp"

#include <chrono>

#include "stereokit/evaluate.hpp"
#include "stereokit/parallel.hpp"

namespace stereo {

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

double BenchReport::speedup(unsigned workers) const {
  const BenchRun* serial = nullptr;
  const BenchRun* target = nullptr;
  for (const auto& r : runs) {
    if (r.workers == 1) serial = &r;
    if (r.workers == workers) target = &r;
  }
  if (!serial || !target || !(target->seconds > 0.0)) return 0.0;
  return serial->seconds / target->seconds;
}

BenchReport bench_matcher(const GrayImage& left, const GrayImage& right,
                          const MatchParams& params, const SgmParams* sgm,
                          const std::vector<unsigned>& worker_counts) {
  BenchReport report;
  for (unsigned w : worker_counts) {
    WorkerPool pool(w);
    const auto t0 = std::chrono::steady_clock::now();
    CostVolume vol = build_cost_volume(left, right, params,
                                       ReferenceView::Left, pool.executor());
    if (sgm) vol = sgm_aggregate(vol, *sgm, pool.executor());
    const DisparityImage disp = wta(vol, pool.executor());
    const auto t1 = std::chrono::steady_clock::now();

    BenchRun run;
    run.workers = w;
    run.seconds = std::chrono::duration<double>(t1 - t0).count();
    run.mde = mde_per_s(left.width, left.height, params.d_max, run.seconds);
    std::uint64_t h =
        fnv1a64(vol.costs.data(), vol.costs.size() * sizeof(float));
    h ^= fnv1a64(disp.values.data(), disp.values.size() * sizeof(float));
    run.checksum = h;
    report.runs.push_back(run);
  }
  for (const auto& r : report.runs)
    if (r.checksum != report.runs.front().checksum) report.identical = false;
  return report;
}

}  // namespace stereo

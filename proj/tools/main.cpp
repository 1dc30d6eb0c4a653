#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stereokit/bench.hpp"
#include "stereokit/calibration.hpp"
#include "stereokit/errors.hpp"
#include "stereokit/evaluate.hpp"
#include "stereokit/image_io.hpp"
#include "stereokit/matching.hpp"
#include "stereokit/parallel.hpp"
#include "stereokit/rectify.hpp"
#include "stereokit/refine.hpp"
#include "stereokit/synth.hpp"

namespace {

stereo::CostKind parse_cost(const std::string& name) {
  if (name == "ad") return stereo::CostKind::AD;
  if (name == "sd") return stereo::CostKind::SD;
  if (name == "sad") return stereo::CostKind::SAD;
  if (name == "ssd") return stereo::CostKind::SSD;
  if (name == "ncc") return stereo::CostKind::NCC;
  return stereo::CostKind::FBS;
}

/// Rewrites a rectification map (which addresses the undistorted image) so
/// it samples the raw distorted image directly, avoiding a second
/// resampling pass.
void compose_distortion(stereo::RemapField& map, const stereo::IntrinsicMatrix& k,
                        const stereo::DistortionCoefficients& dist,
                        stereo::WorkerPool& pool) {
  if (dist.is_zero()) return;
  pool.parallel_for(static_cast<std::size_t>(map.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < map.width; ++u) {
      const std::size_t i = map.index(u, v);
      if (!map.valid[i]) continue;
      const stereo::Vec3 n = stereo::normalize_pixel(
          k, stereo::Pixel{map.src_u[i], map.src_v[i]});
      stereo::Vec2 d;
      if (stereo::distort_normalized(dist, stereo::Vec2{n.x, n.y}, &d)) {
        map.src_u[i] = k.fx * d.x + k.u0;
        map.src_v[i] = k.fy * d.y + k.v0;
      } else {
        map.valid[i] = 0;
      }
    }
  });
}

struct CommonMatchOpts {
  std::string left;
  std::string right;
  std::string cost = "sad";
  int radius = 2;
  int dmax = 64;
  bool sgm = false;
  double l1 = 8.0;
  double l2 = 32.0;
  int paths = 8;
  double sigma_spatial = 3.0;
  double sigma_range = 20.0;
  unsigned workers = 0;

  stereo::MatchParams match_params() const {
    stereo::MatchParams p;
    p.d_max = dmax;
    p.block_radius = radius;
    p.cost = parse_cost(cost);
    p.fbs_sigma_spatial = sigma_spatial;
    p.fbs_sigma_range = sigma_range;
    return p;
  }
  stereo::SgmParams sgm_params() const {
    stereo::SgmParams p;
    p.lambda1 = l1;
    p.lambda2 = l2;
    p.paths = paths;
    return p;
  }
};

void add_match_options(CLI::App* cmd, CommonMatchOpts& o) {
  cmd->add_option("--left", o.left, "left rectified image (PGM)")->required();
  cmd->add_option("--right", o.right, "right rectified image (PGM)")->required();
  cmd->add_option("--cost", o.cost, "matching cost")
      ->check(CLI::IsMember({"ad", "sd", "sad", "ssd", "ncc", "fbs"}));
  cmd->add_option("--radius", o.radius, "block radius (window 2r+1)");
  cmd->add_option("--dmax", o.dmax, "largest disparity hypothesis");
  cmd->add_flag("--sgm", o.sgm, "semi-global smoothing of the cost volume");
  cmd->add_option("--l1", o.l1, "penalty for 1-step disparity changes");
  cmd->add_option("--l2", o.l2, "penalty for larger disparity changes");
  cmd->add_option("--paths", o.paths, "scanline directions")
      ->check(CLI::IsMember({4, 8}));
  cmd->add_option("--sigma-spatial", o.sigma_spatial,
                  "bilateral spatial sigma (fbs cost)");
  cmd->add_option("--sigma-range", o.sigma_range,
                  "bilateral intensity sigma (fbs cost)");
  cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores");
}

int run_undistort(const std::string& left, const std::string& right,
                  const std::string& calib_path, const std::string& out,
                  bool nearest, unsigned workers) {
  if (left.empty() && right.empty())
    throw stereo::UsageError("undistort needs --left and/or --right");
  const stereo::Calibration calib = stereo::read_calibration(calib_path);
  stereo::WorkerPool pool(workers);
  const auto interp = nearest ? stereo::Interpolation::Nearest
                              : stereo::Interpolation::Bilinear;
  const bool both = !left.empty() && !right.empty();

  auto one = [&](const std::string& in_path, const stereo::IntrinsicMatrix& k,
                 const stereo::DistortionCoefficients& d,
                 const std::string& out_path) {
    const stereo::GrayImage img = stereo::read_pgm8(in_path);
    const stereo::RemapField map = stereo::build_undistort_map(
        k, d, img.width, img.height, pool.executor());
    stereo::write_pgm8(out_path, stereo::remap(img, map, interp, pool.executor()));
  };
  if (!left.empty())
    one(left, calib.rig.kl, calib.left_distortion,
        both ? out + "_left.pgm" : out);
  if (!right.empty())
    one(right, calib.rig.kr, calib.right_distortion,
        both ? out + "_right.pgm" : out);
  return 0;
}

int run_rectify(const std::string& left, const std::string& right,
                const std::string& calib_path, const std::string& out,
                bool nearest, unsigned workers) {
  const stereo::Calibration calib = stereo::read_calibration(calib_path);
  const stereo::GrayImage img_l = stereo::read_pgm8(left);
  const stereo::GrayImage img_r = stereo::read_pgm8(right);
  stereo::WorkerPool pool(workers);

  stereo::RectificationResult res = stereo::rectify_rig(
      calib.rig, img_l.width, img_l.height, pool.executor());
  compose_distortion(res.left_map, calib.rig.kl, calib.left_distortion, pool);
  compose_distortion(res.right_map, calib.rig.kr, calib.right_distortion, pool);

  const auto interp = nearest ? stereo::Interpolation::Nearest
                              : stereo::Interpolation::Bilinear;
  stereo::write_pgm8(out + "_left.pgm",
                     stereo::remap(img_l, res.left_map, interp, pool.executor()));
  stereo::write_pgm8(out + "_right.pgm",
                     stereo::remap(img_r, res.right_map, interp, pool.executor()));
  stereo::write_calibration(out + "_calib.txt",
                            stereo::Calibration{res.rig, {}, {}});
  return 0;
}

int run_match(const CommonMatchOpts& o, const stereo::RefineParams& refine,
              const std::string& out) {
  const stereo::GrayImage img_l = stereo::read_pgm8(o.left);
  const stereo::GrayImage img_r = stereo::read_pgm8(o.right);
  stereo::WorkerPool pool(o.workers);

  const stereo::SgmParams sgm = o.sgm_params();
  const stereo::MatchResult res = stereo::match_stereo(
      img_l, img_r, o.match_params(), o.sgm ? &sgm : nullptr, pool.executor());
  const stereo::DisparityImage refined = stereo::refine_disparity(
      res.left, res.right, &res.vol_left, refine, pool.executor());
  stereo::write_disparity(out, refined);
  return 0;
}

int run_refine(const std::string& left, const std::string& right,
               const stereo::RefineParams& refine, const std::string& out,
               unsigned workers) {
  if (refine.subpixel)
    throw stereo::UsageError(
        "standalone refine has no cost volume; use match --subpixel");
  const stereo::DisparityImage disp_l = stereo::read_disparity(left);
  stereo::DisparityImage disp_r;
  if (refine.lr_check) {
    if (right.empty())
      throw stereo::UsageError("--lr-check needs --right (the right-view map)");
    disp_r = stereo::read_disparity(right);
  } else {
    disp_r = disp_l;  // unused
  }
  stereo::WorkerPool pool(workers);
  stereo::write_disparity(out, stereo::refine_disparity(disp_l, disp_r, nullptr,
                                                        refine, pool.executor()));
  return 0;
}

int run_evaluate(const std::string& est_path, const std::string& gt_path,
                 double delta, bool all_pixels, const std::string& record) {
  const stereo::DisparityImage est = stereo::read_disparity(est_path);
  const stereo::DisparityImage gt = stereo::read_disparity(gt_path);
  const stereo::EvalReport ev =
      stereo::evaluate_disparity(est, gt, delta, all_pixels);

  std::printf("rms = %.6f\n", ev.rms);
  std::printf("pep = %.6f\n", ev.pep);
  std::printf("delta_d = %g\n", ev.delta_d);
  std::printf("n_evaluated = %zu\n", ev.n_evaluated);
  std::printf("both_valid = %zu\n", ev.both_valid);

  if (!record.empty()) {
    FILE* f = std::fopen(record.c_str(), "w");
    if (!f) throw stereo::IoError("cannot write '" + record + "'");
    std::fprintf(f,
                 "{\"rms\": %.17g, \"pep\": %.17g, \"delta_d\": %.17g, "
                 "\"n_evaluated\": %zu, \"both_valid\": %zu}\n",
                 ev.rms, ev.pep, ev.delta_d, ev.n_evaluated, ev.both_valid);
    std::fclose(f);
  }
  return 0;
}

int run_bench(const CommonMatchOpts& o) {
  const stereo::GrayImage img_l = stereo::read_pgm8(o.left);
  const stereo::GrayImage img_r = stereo::read_pgm8(o.right);

  unsigned max_workers = o.workers;
  if (max_workers == 0)
    max_workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<unsigned> counts;
  for (unsigned w = 1; w <= max_workers; ++w) counts.push_back(w);

  const stereo::SgmParams sgm = o.sgm_params();
  const stereo::BenchReport report = stereo::bench_matcher(
      img_l, img_r, o.match_params(), o.sgm ? &sgm : nullptr, counts);

  for (const auto& run : report.runs)
    std::printf("workers=%u seconds=%.6f mde_per_s=%.3f checksum=%016llx\n",
                run.workers, run.seconds, run.mde,
                static_cast<unsigned long long>(run.checksum));
  std::printf("identical=%s speedup=%.3f\n",
              report.identical ? "true" : "false",
              report.speedup(max_workers));
  if (!report.identical)
    throw stereo::InvariantViolation(
        "outputs differ across worker counts");
  return 0;
}

int run_synth(int width, int height, const std::string& field_kind, double d0,
              double d1, int split, std::uint64_t seed,
              const std::string& out) {
  std::vector<float> field;
  if (field_kind == "const") {
    field = stereo::make_constant_field(width, height, static_cast<float>(d0));
  } else if (field_kind == "ramp") {
    field = stereo::make_ramp_field(width, height, static_cast<float>(d0),
                                    static_cast<float>(d1));
  } else {
    field = stereo::make_step_field(width, height, static_cast<float>(d0),
                                    static_cast<float>(d1),
                                    split < 0 ? width / 2 : split);
  }
  const stereo::SynthPair pair =
      stereo::generate_random_dots(width, height, field, seed);
  stereo::write_pgm8(out + "_left.pgm", pair.left);
  stereo::write_pgm8(out + "_right.pgm", pair.right);
  stereo::write_disparity(out + "_gt.pgm", pair.truth);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stereokit: classical two-view stereo toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a config file");

  // undistort
  std::string ud_left, ud_right, ud_calib, ud_out;
  bool ud_nearest = false;
  unsigned ud_workers = 0;
  auto* undistort = app.add_subcommand(
      "undistort", "remove lens distortion from one or both images");
  undistort->add_option("--left", ud_left, "left image (PGM)");
  undistort->add_option("--right", ud_right, "right image (PGM)");
  undistort->add_option("--calib", ud_calib, "calibration file")->required();
  undistort->add_option("--out", ud_out,
                        "output image, or prefix when both sides are given")
      ->required();
  undistort->add_flag("--nearest", ud_nearest, "nearest-neighbor sampling");
  undistort->add_option("--workers", ud_workers, "worker threads, 0 = all cores");

  // rectify
  std::string rc_left, rc_right, rc_calib, rc_out;
  bool rc_nearest = false;
  unsigned rc_workers = 0;
  auto* rectify = app.add_subcommand(
      "rectify", "resample a calibrated pair onto row-aligned image planes");
  rectify->add_option("--left", rc_left, "left image (PGM)")->required();
  rectify->add_option("--right", rc_right, "right image (PGM)")->required();
  rectify->add_option("--calib", rc_calib, "calibration file")->required();
  rectify->add_option("--out", rc_out,
                      "prefix for <out>_left.pgm, <out>_right.pgm, "
                      "<out>_calib.txt")
      ->required();
  rectify->add_flag("--nearest", rc_nearest, "nearest-neighbor sampling");
  rectify->add_option("--workers", rc_workers, "worker threads, 0 = all cores");

  // match
  CommonMatchOpts m;
  std::string m_out;
  bool m_lr_check = false, m_subpixel = false, m_median = false;
  double m_tau = 1.0;
  int m_window = 3;
  auto* match = app.add_subcommand(
      "match", "dense disparity estimation on a rectified pair");
  add_match_options(match, m);
  match->add_option("--out", m_out, "output disparity file")->required();
  match->add_flag("--lr-check", m_lr_check, "left-right consistency check");
  match->add_option("--tau", m_tau, "consistency threshold (pixels)");
  match->add_flag("--subpixel", m_subpixel, "parabola subpixel refinement");
  match->add_flag("--median", m_median, "median filter / hole fill");
  match->add_option("--window", m_window, "median window (odd)");

  // refine
  std::string rf_left, rf_right, rf_out;
  bool rf_lr_check = false, rf_subpixel = false, rf_median = false;
  double rf_tau = 1.0;
  int rf_window = 3;
  unsigned rf_workers = 0;
  auto* refine = app.add_subcommand(
      "refine", "post-process stored disparity maps");
  refine->add_option("--left", rf_left, "disparity map to refine")->required();
  refine->add_option("--right", rf_right,
                     "right-view disparity map (for --lr-check)");
  refine->add_option("--out", rf_out, "output disparity file")->required();
  refine->add_flag("--lr-check", rf_lr_check, "left-right consistency check");
  refine->add_option("--tau", rf_tau, "consistency threshold (pixels)");
  refine->add_flag("--subpixel", rf_subpixel,
                   "rejected here: needs the in-memory cost volume");
  refine->add_flag("--median", rf_median, "median filter / hole fill");
  refine->add_option("--window", rf_window, "median window (odd)");
  refine->add_option("--workers", rf_workers, "worker threads, 0 = all cores");

  // evaluate
  std::string ev_est, ev_gt, ev_record;
  double ev_delta = 1.0;
  bool ev_all = false;
  auto* evaluate = app.add_subcommand(
      "evaluate", "error metrics of an estimate against ground truth");
  evaluate->add_option("estimate", ev_est, "estimated disparity file")
      ->required();
  evaluate->add_option("truth", ev_gt, "ground-truth disparity file")
      ->required();
  evaluate->add_option("--delta", ev_delta, "PEP threshold (pixels)");
  evaluate->add_flag("--all-pixels", ev_all,
                     "count missing estimates as errors");
  evaluate->add_option("--record", ev_record, "write metrics as JSON");

  // bench
  CommonMatchOpts b;
  auto* bench = app.add_subcommand(
      "bench", "time the matcher and verify worker-count determinism");
  add_match_options(bench, b);

  // synth
  int sy_width = 256, sy_height = 256, sy_split = -1;
  double sy_d0 = 8.0, sy_d1 = 16.0;
  std::uint64_t sy_seed = 42;
  std::string sy_field = "const", sy_out;
  auto* synth = app.add_subcommand(
      "synth", "generate a random-dot pair with ground truth");
  synth->add_option("--width", sy_width, "image width");
  synth->add_option("--height", sy_height, "image height");
  synth->add_option("--field", sy_field, "disparity field shape")
      ->check(CLI::IsMember({"const", "ramp", "step"}));
  synth->add_option("--d0", sy_d0, "field value (const), left end (ramp), "
                                   "background (step)");
  synth->add_option("--d1", sy_d1, "right end (ramp), foreground (step)");
  synth->add_option("--split", sy_split, "step column, -1 = center");
  synth->add_option("--seed", sy_seed, "dot pattern seed");
  synth->add_option("--out", sy_out,
                    "prefix for <out>_left.pgm, <out>_right.pgm, <out>_gt.pgm")
      ->required();

  undistort->callback([&] {
    run_undistort(ud_left, ud_right, ud_calib, ud_out, ud_nearest, ud_workers);
  });
  rectify->callback([&] {
    run_rectify(rc_left, rc_right, rc_calib, rc_out, rc_nearest, rc_workers);
  });
  match->callback([&] {
    stereo::RefineParams rp;
    rp.lr_check = m_lr_check;
    rp.lr_threshold = m_tau;
    rp.subpixel = m_subpixel;
    rp.median = m_median;
    rp.median_window = m_window;
    run_match(m, rp, m_out);
  });
  refine->callback([&] {
    stereo::RefineParams rp;
    rp.lr_check = rf_lr_check;
    rp.lr_threshold = rf_tau;
    rp.subpixel = rf_subpixel;
    rp.median = rf_median;
    rp.median_window = rf_window;
    run_refine(rf_left, rf_right, rp, rf_out, rf_workers);
  });
  evaluate->callback(
      [&] { run_evaluate(ev_est, ev_gt, ev_delta, ev_all, ev_record); });
  bench->callback([&] { run_bench(b); });
  synth->callback([&] {
    run_synth(sy_width, sy_height, sy_field, sy_d0, sy_d1, sy_split, sy_seed,
              sy_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::fprintf(stderr, "error: UsageError: %s\n", e.what());
    return 2;
  } catch (const stereo::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: RuntimeError: %s\n", e.what());
    return 5;
  }
  return 0;
}

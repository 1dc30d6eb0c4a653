#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "stereokit/image_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "stereokit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_path =
      scratch_dir() / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err_path =
      scratch_dir() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;

  const std::string cmd = std::string(STEREOKIT_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());

  CmdResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string path_of(const std::string& name) {
  return (scratch_dir() / name).string();
}

}  // namespace

TEST_CASE("synth, match, evaluate pipeline") {
  const std::string prefix = path_of("pair");
  CHECK(run_cli("synth --width 48 --height 16 --field const --d0 5 --seed 7 "
                "--out " + prefix).code == 0);
  CHECK(fs::exists(prefix + "_left.pgm"));
  CHECK(fs::exists(prefix + "_right.pgm"));
  CHECK(fs::exists(prefix + "_gt.pgm"));

  const std::string est = path_of("est.pgm");
  CHECK(run_cli("match --left " + prefix + "_left.pgm --right " + prefix +
                "_right.pgm --dmax 8 --lr-check --out " + est).code == 0);

  const std::string record = path_of("metrics.json");
  const CmdResult ev = run_cli("evaluate " + est + " " + prefix +
                               "_gt.pgm --delta 1 --record " + record);
  CHECK(ev.code == 0);
  CHECK(ev.out.find("pep = 0.000000") != std::string::npos);
  CHECK(ev.out.find("rms = ") != std::string::npos);
  CHECK(ev.out.find("both_valid = ") != std::string::npos);

  const std::string json = slurp(record);
  CHECK(json.find("\"pep\": 0") != std::string::npos);
  CHECK(json.find("\"delta_d\": 1") != std::string::npos);
}

TEST_CASE("bench reports determinism") {
  const std::string prefix = path_of("bench");
  REQUIRE(run_cli("synth --width 32 --height 16 --field const --d0 3 --seed 8 "
                  "--out " + prefix).code == 0);
  const CmdResult r = run_cli("bench --left " + prefix + "_left.pgm --right " +
                              prefix + "_right.pgm --dmax 4 --workers 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("workers=1") != std::string::npos);
  CHECK(r.out.find("workers=2") != std::string::npos);
  CHECK(r.out.find("identical=true") != std::string::npos);
}

TEST_CASE("undistort with zero coefficients is the identity") {
  const std::string calib = path_of("plain.calib");
  {
    std::ofstream out(calib);
    out << "left.fx = 400\nleft.fy = 400\nleft.u0 = 24\nleft.v0 = 12\n"
           "right.fx = 400\nright.fy = 400\nright.u0 = 24\nright.v0 = 12\n"
           "R = 1 0 0 0 1 0 0 0 1\n"
           "t = -0.2 0 0\n"
           "Tc = 0.2\n";
  }
  const std::string prefix = path_of("ud");
  REQUIRE(run_cli("synth --width 48 --height 24 --field const --d0 2 --seed 9 "
                  "--out " + prefix).code == 0);

  const std::string out = path_of("ud_fixed.pgm");
  CHECK(run_cli("undistort --left " + prefix + "_left.pgm --calib " + calib +
                " --out " + out).code == 0);
  const stereo::GrayImage a = stereo::read_pgm8(prefix + "_left.pgm");
  const stereo::GrayImage b = stereo::read_pgm8(out);
  CHECK(a.samples == b.samples);
}

TEST_CASE("rectifying an already rectified pair changes nothing") {
  const std::string calib = path_of("rect.calib");
  {
    std::ofstream out(calib);
    out << "left.fx = 420\nleft.fy = 420\nleft.u0 = 32\nleft.v0 = 16\n"
           "right.fx = 420\nright.fy = 420\nright.u0 = 32\nright.v0 = 16\n"
           "R = 1 0 0 0 1 0 0 0 1\n"
           "t = -0.12 0 0\n"
           "Tc = 0.12\n"
           "rectified = true\n";
  }
  const std::string prefix = path_of("rc");
  REQUIRE(run_cli("synth --width 64 --height 32 --field const --d0 4 --seed 10 "
                  "--out " + prefix).code == 0);

  const std::string out_prefix = path_of("rc_out");
  CHECK(run_cli("rectify --left " + prefix + "_left.pgm --right " + prefix +
                "_right.pgm --calib " + calib + " --out " + out_prefix)
            .code == 0);
  const stereo::GrayImage in_l = stereo::read_pgm8(prefix + "_left.pgm");
  const stereo::GrayImage out_l = stereo::read_pgm8(out_prefix + "_left.pgm");
  CHECK(in_l.samples == out_l.samples);
  CHECK(fs::exists(out_prefix + "_calib.txt"));
  CHECK(slurp(out_prefix + "_calib.txt").find("rectified = true") !=
        std::string::npos);
}

TEST_CASE("error classes map to exit codes") {
  SUBCASE("usage errors exit 2") {
    CHECK(run_cli("transmogrify").code == 2);
    CHECK(run_cli("match --left a.pgm --right b.pgm").code == 2);  // no --out
    const std::string prefix = path_of("uerr");
    REQUIRE(run_cli("synth --width 24 --height 8 --field const --d0 2 "
                    "--seed 11 --out " + prefix).code == 0);
    const CmdResult r = run_cli("refine --left " + prefix +
                                "_gt.pgm --subpixel --out " +
                                path_of("uerr_out.pgm"));
    CHECK(r.code == 2);
    CHECK(r.err.find("UsageError") != std::string::npos);
  }

  SUBCASE("parse errors exit 3") {
    const CmdResult r = run_cli("evaluate " + path_of("missing_a.pgm") + " " +
                                path_of("missing_b.pgm"));
    CHECK(r.code == 3);
    CHECK(r.err.find("ParseError") != std::string::npos);
  }

  SUBCASE("invariant violations exit 4") {
    const std::string prefix = path_of("ierr");
    REQUIRE(run_cli("synth --width 24 --height 8 --field const --d0 2 "
                    "--seed 12 --out " + prefix).code == 0);
    const CmdResult r =
        run_cli("match --left " + prefix + "_left.pgm --right " + prefix +
                "_right.pgm --dmax -1 --out " + path_of("ierr_out.pgm"));
    CHECK(r.code == 4);
    CHECK(r.err.find("InvariantViolation") != std::string::npos);
  }

  SUBCASE("runtime errors exit 5") {
    const std::string pa = path_of("sz_a");
    const std::string pb = path_of("sz_b");
    REQUIRE(run_cli("synth --width 24 --height 8 --field const --d0 2 "
                    "--seed 13 --out " + pa).code == 0);
    REQUIRE(run_cli("synth --width 16 --height 8 --field const --d0 2 "
                    "--seed 13 --out " + pb).code == 0);
    const CmdResult r = run_cli("evaluate " + pa + "_gt.pgm " + pb + "_gt.pgm");
    CHECK(r.code == 5);
    CHECK(r.err.find("SizeMismatch") != std::string::npos);
  }
}

#include "stereokit/calibration.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "stereokit/errors.hpp"

namespace stereo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size())
    throw ParseError(line, "'" + tok + "' is not a number");
  return v;
}

/// Number of values each key carries; rectified is handled separately.
const std::map<std::string, std::size_t>& key_arity() {
  static const std::map<std::string, std::size_t> table = [] {
    std::map<std::string, std::size_t> t;
    for (const char* side : {"left", "right"})
      for (const char* f : {"fx", "fy", "u0", "v0", "k1", "k2", "k3", "p1", "p2"})
        t[std::string(side) + "." + f] = 1;
    t["R"] = 9;
    t["t"] = 3;
    t["Tc"] = 1;
    return t;
  }();
  return table;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Calibration read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");

  std::map<std::string, std::vector<double>> values;
  bool rectified = false;
  bool saw_rectified = false;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;

    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const auto tokens = split_tokens(text.substr(eq + 1));

    if (key == "rectified") {
      if (saw_rectified) throw ParseError(line, "duplicate key 'rectified'");
      if (tokens.size() != 1 ||
          (tokens[0] != "true" && tokens[0] != "false" && tokens[0] != "0" &&
           tokens[0] != "1"))
        throw ParseError(line, "rectified must be true or false");
      rectified = tokens[0] == "true" || tokens[0] == "1";
      saw_rectified = true;
      continue;
    }

    const auto arity = key_arity().find(key);
    if (arity == key_arity().end())
      throw ParseError(line, "unknown key '" + key + "'");
    if (values.count(key))
      throw ParseError(line, "duplicate key '" + key + "'");
    if (tokens.size() != arity->second)
      throw ParseError(line, "key '" + key + "' expects " +
                                 std::to_string(arity->second) + " value(s)");
    std::vector<double> nums;
    nums.reserve(tokens.size());
    for (const auto& tok : tokens) nums.push_back(parse_double(tok, line));
    values.emplace(key, std::move(nums));
  }

  auto required = [&](const std::string& key) -> const std::vector<double>& {
    const auto it = values.find(key);
    if (it == values.end())
      throw ParseError(0, "missing key '" + key + "'");
    return it->second;
  };
  auto optional1 = [&](const std::string& key) {
    const auto it = values.find(key);
    return it == values.end() ? 0.0 : it->second[0];
  };

  auto intrinsics = [&](const std::string& side) {
    return IntrinsicMatrix(required(side + ".fx")[0], required(side + ".fy")[0],
                           required(side + ".u0")[0],
                           required(side + ".v0")[0]);
  };
  auto distortion = [&](const std::string& side) {
    DistortionCoefficients d;
    d.k1 = optional1(side + ".k1");
    d.k2 = optional1(side + ".k2");
    d.k3 = optional1(side + ".k3");
    d.p1 = optional1(side + ".p1");
    d.p2 = optional1(side + ".p2");
    return d;
  };

  const IntrinsicMatrix kl = intrinsics("left");
  const IntrinsicMatrix kr = intrinsics("right");
  const std::vector<double>& rv = required("R");
  Mat3 r;
  std::copy(rv.begin(), rv.end(), r.m.begin());
  const std::vector<double>& tv = required("t");
  const Vec3 t{tv[0], tv[1], tv[2]};
  const double tc = required("Tc")[0];

  Calibration calib{StereoRig::create(kl, kr, PoseSE3(r, t), tc, rectified),
                    distortion("left"), distortion("right")};
  return calib;
}

void write_calibration(const std::string& path, const Calibration& calib) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");

  auto camera = [&](const char* side, const IntrinsicMatrix& k,
                    const DistortionCoefficients& d) {
    out << side << ".fx = " << format_value(k.fx) << "\n";
    out << side << ".fy = " << format_value(k.fy) << "\n";
    out << side << ".u0 = " << format_value(k.u0) << "\n";
    out << side << ".v0 = " << format_value(k.v0) << "\n";
    out << side << ".k1 = " << format_value(d.k1) << "\n";
    out << side << ".k2 = " << format_value(d.k2) << "\n";
    out << side << ".k3 = " << format_value(d.k3) << "\n";
    out << side << ".p1 = " << format_value(d.p1) << "\n";
    out << side << ".p2 = " << format_value(d.p2) << "\n";
  };
  camera("left", calib.rig.kl, calib.left_distortion);
  camera("right", calib.rig.kr, calib.right_distortion);

  out << "R =";
  for (double v : calib.rig.pose.rotation.m) out << " " << format_value(v);
  out << "\n";
  out << "t = " << format_value(calib.rig.pose.translation.x) << " "
      << format_value(calib.rig.pose.translation.y) << " "
      << format_value(calib.rig.pose.translation.z) << "\n";
  out << "Tc = " << format_value(calib.rig.tc) << "\n";
  out << "rectified = " << (calib.rig.rectified ? "true" : "false") << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<Correspondence> read_correspondences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");

  std::vector<Correspondence> points;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto tokens = split_tokens(trim(raw));
    if (tokens.empty()) continue;
    if (tokens.size() != 4)
      throw ParseError(line, "expected 'uL vL uR vR', got " +
                                 std::to_string(tokens.size()) + " value(s)");
    Correspondence c;
    c.left.u = parse_double(tokens[0], line);
    c.left.v = parse_double(tokens[1], line);
    c.right.u = parse_double(tokens[2], line);
    c.right.v = parse_double(tokens[3], line);
    points.push_back(c);
  }
  return points;
}

void write_correspondences(const std::string& path,
                           const std::vector<Correspondence>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const auto& c : points)
    out << format_value(c.left.u) << " " << format_value(c.left.v) << " "
        << format_value(c.right.u) << " " << format_value(c.right.v) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace stereo

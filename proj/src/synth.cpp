#include "stereokit/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "stereokit/errors.hpp"

namespace stereo {

SynthPair generate_random_dots(int width, int height,
                               const std::vector<float>& disparity_field,
                               std::uint64_t seed) {
  if (width < 1 || height < 1)
    throw InvariantViolation("pair dimensions must be at least 1x1");
  if (disparity_field.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw InvalidDisparityField("field has " +
                                std::to_string(disparity_field.size()) +
                                " entries, expected width * height");
  for (float d : disparity_field)
    if (!std::isfinite(d) || d < 0.0f || d >= static_cast<float>(width))
      throw InvalidDisparityField(
          "disparities must be finite and in [0, width)");

  SynthPair pair;
  pair.left = GrayImage::create(width, height);
  pair.right = GrayImage::create(width, height);
  pair.truth = DisparityImage::create(width, height);
  pair.occlusion.assign(static_cast<std::size_t>(width) * height, 1);

  // Masking the raw engine output keeps the dot stream independent of any
  // distribution implementation.
  std::mt19937_64 engine(seed);
  auto dot = [&engine]() -> std::uint8_t {
    return static_cast<std::uint8_t>(engine() & 0xFF);
  };

  for (auto& s : pair.left.samples) s = dot();

  std::vector<int> winner(static_cast<std::size_t>(width));
  for (int v = 0; v < height; ++v) {
    std::fill(winner.begin(), winner.end(), -1);
    for (int u = 0; u < width; ++u) {
      const int d = static_cast<int>(
          std::lround(disparity_field[pair.truth.index(u, v)]));
      const int target = u - d;
      if (target < 0) continue;
      // Two sources can only collide with different disparities, so the
      // larger one is strictly nearer and hides the other.
      if (winner[target] < 0 ||
          d > static_cast<int>(std::lround(
                  disparity_field[pair.truth.index(winner[target], v)])))
        winner[target] = u;
    }
    for (int t = 0; t < width; ++t) {
      if (winner[t] < 0) {
        pair.right.at(t, v) = dot();  // revealed background, no counterpart
        continue;
      }
      const int u = winner[t];
      pair.right.at(t, v) = pair.left.at(u, v);
      const int d = static_cast<int>(
          std::lround(disparity_field[pair.truth.index(u, v)]));
      pair.truth.at(u, v) = static_cast<float>(d);
      pair.occlusion[pair.truth.index(u, v)] = 0;
    }
  }
  return pair;
}

std::vector<float> make_constant_field(int width, int height, float d) {
  return std::vector<float>(static_cast<std::size_t>(width) * height, d);
}

std::vector<float> make_ramp_field(int width, int height, float d_left,
                                   float d_right) {
  std::vector<float> field(static_cast<std::size_t>(width) * height);
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u)
      field[static_cast<std::size_t>(v) * width + u] =
          width > 1 ? d_left + (d_right - d_left) *
                                   (static_cast<float>(u) / (width - 1))
                    : d_left;
  return field;
}

std::vector<float> make_step_field(int width, int height, float d_background,
                                   float d_foreground, int split_column) {
  std::vector<float> field(static_cast<std::size_t>(width) * height);
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u)
      field[static_cast<std::size_t>(v) * width + u] =
          u < split_column ? d_background : d_foreground;
  return field;
}

}  // namespace stereo

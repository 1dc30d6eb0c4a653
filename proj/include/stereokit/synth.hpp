#pragma once

#include <cstdint>
#include <vector>

#include "stereokit/camera.hpp"
#include "stereokit/matching.hpp"

namespace stereo {

/// Random-dot stereogram with known ground truth. occlusion marks left
/// pixels with no counterpart in the right view (1 = occluded); ground truth
/// is invalid exactly there.
struct SynthPair {
  GrayImage left;
  GrayImage right;
  DisparityImage truth;
  std::vector<std::uint8_t> occlusion;
};

/// Renders a random-dot pair from a per-left-pixel disparity field
/// (row-major, width * height entries). Disparities are rounded to integers;
/// each left pixel (u, v) lands at right-column u - d. When several left
/// pixels land on the same right column the largest disparity wins (nearer
/// surface); losers and pixels pushed off the image are occluded. Right
/// columns nobody landed on receive fresh random dots.
/// Same seed, same field: bit-identical outputs.
/// Throws InvalidDisparityField for non-finite, negative, or >= width values.
SynthPair generate_random_dots(int width, int height,
                               const std::vector<float>& disparity_field,
                               std::uint64_t seed);

std::vector<float> make_constant_field(int width, int height, float d);

/// Linear in u from d_left (column 0) to d_right (last column), constant in v.
std::vector<float> make_ramp_field(int width, int height, float d_left,
                                   float d_right);

/// d_background left of split_column, d_foreground from it on.
std::vector<float> make_step_field(int width, int height, float d_background,
                                   float d_foreground, int split_column);

}  // namespace stereo

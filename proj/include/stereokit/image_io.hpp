#pragma once

#include <string>

#include "stereokit/camera.hpp"
#include "stereokit/matching.hpp"

namespace stereo {

/// Binary PGM (P5), maxval <= 255. Throws ParseError on malformed input.
GrayImage read_pgm8(const std::string& path);
void write_pgm8(const std::string& path, const GrayImage& img);

/// Disparity maps are stored as 16-bit PGM (maxval 65535, big-endian
/// samples) holding round(d * 256); sample 0 means "no estimate". Values
/// below 1/512 therefore quantize to invalid.
/// write_disparity throws DisparityOverflow when round(d * 256) > 65535.
DisparityImage read_disparity(const std::string& path);
void write_disparity(const std::string& path, const DisparityImage& disp);

}  // namespace stereo

#pragma once

#include "slickseg/field.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace slickseg {

/// 8- or 16-bit grayscale raster (16-bit when maxval > 255).
struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major

  int depth() const { return maxval > 255 ? 16 : 8; }
};

/// Parses binary (P5) and ASCII (P2) portable graymaps, maxval <= 65535,
/// 16-bit samples big-endian. Header comments are skipped. Malformed input
/// raises std::runtime_error with a description (truncation errors name the
/// byte offset).
GrayImage read_pgm(const std::string& path);

/// Writes binary P5 at the image's depth; read_pgm(write_pgm(x)) == x.
void write_pgm(const GrayImage& img, const std::string& path);

/// Writes a {0,1} field as P5 maxval 255 with samples {0, 255}.
void write_mask(const RealField& mask, const std::string& path);

/// Image samples as reals in [0, maxval]; no normalization.
RealField to_field(const GrayImage& img);

/// P6 pixmap: the intensity field rescaled to 8-bit grayscale, with the
/// listed contour pixels painted pure red. Out-of-range coordinates raise.
void write_overlay(const RealField& intensity,
                   const std::vector<std::pair<int, int>>& contour,
                   const std::string& path);

}  // namespace slickseg

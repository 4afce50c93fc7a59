#pragma once

#include "finsim/error.hpp"
#include "finsim/types.hpp"

#include <iosfwd>
#include <string>

namespace finsim {

/// Linear RGB image, row-major: pixel (x, y) is column y * width + x.
struct Image {
  int width = 0;
  int height = 0;
  Eigen::Array3Xd pixels;

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(Eigen::Array3Xd::Zero(3, static_cast<Eigen::Index>(w) * h)) {}

  Eigen::Index index(int x, int y) const { return static_cast<Eigen::Index>(y) * width + x; }
  Rgb at(int x, int y) const { return pixels.col(index(x, y)); }
  void set(int x, int y, const Rgb& c) { pixels.col(index(x, y)) = c; }
};

/// Mean Rec. 709 luminance over a (2*half_window+1)^2 window centred on
/// (x, y). Throws OutOfBounds when the window leaves the image.
double probe_intensity(const Image& image, int x, int y, int half_window = 4);

/// Per-pixel luminance.
Eigen::ArrayXd luminance_map(const Image& image);

/// 8-bit sRGB PNG of exposure * linear value.
void write_png(const std::string& path, const Image& image, double exposure = 1.0);

/// "FSIMRAW1", then little-endian uint32 width, height, channels (3) and
/// row-major little-endian float32 samples.
void write_raw(std::ostream& out, const Image& image);
void write_raw(const std::string& path, const Image& image);
Image read_raw(std::istream& in);
Image read_raw(const std::string& path);

/// sRGB opto-electronic transfer of a linear value in [0, 1].
double srgb_encode(double linear);

}  // namespace finsim

#include "finsim/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace finsim {

double probe_intensity(const Image& image, int x, int y, int half_window) {
  require(half_window >= 0, ErrorCode::InvalidArgument, "probe window must be non-negative");
  require(x - half_window >= 0 && y - half_window >= 0 && x + half_window < image.width &&
              y + half_window < image.height,
          ErrorCode::OutOfBounds,
          "probe window at (" + std::to_string(x) + ", " + std::to_string(y) + ") leaves the " +
              std::to_string(image.width) + "x" + std::to_string(image.height) + " image");
  double sum = 0.0;
  for (int j = y - half_window; j <= y + half_window; ++j)
    for (int i = x - half_window; i <= x + half_window; ++i) sum += luminance(image.at(i, j));
  const double n = 2.0 * half_window + 1.0;
  return sum / (n * n);
}

Eigen::ArrayXd luminance_map(const Image& image) {
  return 0.2126 * image.pixels.row(0).transpose() + 0.7152 * image.pixels.row(1).transpose() +
         0.0722 * image.pixels.row(2).transpose();
}

double srgb_encode(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

void write_png(const std::string& path, const Image& image, double exposure) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  require(fp != nullptr, ErrorCode::IoError, "cannot open '" + path + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, ErrorCode::IoError, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng failed while writing '" + path + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(image.width) * 3);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x)
      for (int c = 0; c < 3; ++c)
        row[static_cast<std::size_t>(3 * x + c)] =
            static_cast<png_byte>(std::lround(255.0 * srgb_encode(exposure * image.at(x, y)[c])));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

namespace {

constexpr char kMagic[8] = {'F', 'S', 'I', 'M', 'R', 'A', 'W', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  require(in.good(), ErrorCode::ParseError, "truncated raw image header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_raw(std::ostream& out, const Image& image) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(image.width));
  put_u32(out, static_cast<std::uint32_t>(image.height));
  put_u32(out, 3);
  for (Eigen::Index i = 0; i < image.pixels.cols(); ++i)
    for (int c = 0; c < 3; ++c) {
      const auto f = static_cast<float>(image.pixels(c, i));
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32(out, bits);
    }
  require(out.good(), ErrorCode::IoError, "failed writing raw image");
}

void write_raw(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_raw(out, image);
}

Image read_raw(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::memcmp(magic, kMagic, 8) == 0, ErrorCode::ParseError, "not a raw float image");
  const std::uint32_t w = get_u32(in), h = get_u32(in), ch = get_u32(in);
  require(ch == 3, ErrorCode::ParseError, "raw image must have 3 channels");
  require(w > 0 && h > 0 && w < (1u << 16) && h < (1u << 16), ErrorCode::ParseError, "implausible raw image size");
  Image img(static_cast<int>(w), static_cast<int>(h));
  for (Eigen::Index i = 0; i < img.pixels.cols(); ++i)
    for (int c = 0; c < 3; ++c) {
      const std::uint32_t bits = get_u32(in);
      float f;
      std::memcpy(&f, &bits, 4);
      img.pixels(c, i) = f;
    }
  return img;
}

Image read_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorCode::IoError, "cannot open '" + path + "'");
  return read_raw(in);
}

}  // namespace finsim

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace webcorpus {

// 8-bit RGB, row-major, no padding.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static RgbImage solid(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

// Any PNG color type; alpha is composited over white. Throws Error(kParse).
RgbImage decode_png(std::string_view bytes);
std::string encode_png(const RgbImage& image);

// Baseline JPEG, quality 1..100. Throws Error(kInvalidArgument) for bad input.
std::string encode_jpeg(const RgbImage& image, int quality = 90);
// Dimensions from the JPEG header. Throws Error(kParse).
ImageSize jpeg_size(std::string_view bytes);
RgbImage decode_jpeg(std::string_view bytes);

}  // namespace webcorpus

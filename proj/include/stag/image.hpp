#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace stag {

/// 8-bit grayscale raster. Pixel (x, y), x to the right, y downward.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, uint8_t fill = 0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  uint8_t operator()(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  uint8_t& operator()(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }

  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

  uint8_t at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return (*this)(x, y);
  }

  /// Bilinear sample at a continuous position; coordinates are clamped to the
  /// image border. Pixel centers sit at integer coordinates.
  double bilinear(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height - 1));
    const int x0 = std::min(static_cast<int>(x), width - 2 >= 0 ? width - 2 : 0);
    const int y0 = std::min(static_cast<int>(y), height - 2 >= 0 ? height - 2 : 0);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = (*this)(x0, y0), v10 = (*this)(x1, y0);
    const double v01 = (*this)(x0, y1), v11 = (*this)(x1, y1);
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 +
           fx * fy * v11;
  }
};

/// Single-channel float raster used by intermediate processing stages.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  FloatImage() = default;
  FloatImage(int w, int h, float fill = 0.f)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  float operator()(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  float& operator()(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
};

}  // namespace stag

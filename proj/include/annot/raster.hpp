#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "annot/errors.hpp"

namespace annot {

enum class ColorSpace { Rgb, Gray, Hsv, YCbCr };

inline int channel_count(ColorSpace space) {
  return space == ColorSpace::Gray ? 1 : 3;
}

inline const char* space_name(ColorSpace space) {
  switch (space) {
    case ColorSpace::Rgb: return "RGB";
    case ColorSpace::Gray: return "GRAY";
    case ColorSpace::Hsv: return "HSV";
    case ColorSpace::YCbCr: return "YCBCR";
  }
  return "?";
}

/// Decoded pixel grid. Samples are row-major and channel-interleaved.
/// RGB/GRAY/YCBCR samples live in [0,255]; HSV stores H in [0,360),
/// S and V in [0,1].
struct RasterImage {
  int width = 0;
  int height = 0;
  ColorSpace space = ColorSpace::Rgb;
  std::vector<double> samples;

  int channels() const { return channel_count(space); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  double at(int y, int x, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels() + c];
  }
  double& at(int y, int x, int c = 0) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels() + c];
  }
};

namespace detail {

inline double clamp255(double v) { return std::clamp(v, 0.0, 255.0); }

inline void rgb_to_hsv(double r, double g, double b,
                       double& h, double& s, double& v) {
  r /= 255.0; g /= 255.0; b /= 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  v = mx;
  s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) {
    h = 0.0;
    return;
  }
  if (mx == r) {
    h = 60.0 * ((g - b) / delta);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h = 0.0;
}

}  // namespace detail

/// Convert an RGB image to GRAY, HSV or YCBCR. GRAY uses the
/// 0.299/0.587/0.114 luma weights; YCBCR is the full-range BT.601 mapping.
inline RasterImage convert_space(const RasterImage& img, ColorSpace target) {
  if (img.space != ColorSpace::Rgb) {
    throw UnsupportedConversion(std::string("convert_space: source must be RGB, got ") +
                                space_name(img.space));
  }
  if (target == ColorSpace::Rgb) return img;

  RasterImage out;
  out.width = img.width;
  out.height = img.height;
  out.space = target;
  out.samples.resize(img.pixel_count() * channel_count(target));

  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.samples[i * 3 + 0];
    const double g = img.samples[i * 3 + 1];
    const double b = img.samples[i * 3 + 2];
    switch (target) {
      case ColorSpace::Gray: {
        out.samples[i] = detail::clamp255(0.299 * r + 0.587 * g + 0.114 * b);
        break;
      }
      case ColorSpace::YCbCr: {
        const double y = 0.299 * r + 0.587 * g + 0.114 * b;
        const double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
        const double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
        out.samples[i * 3 + 0] = detail::clamp255(y);
        out.samples[i * 3 + 1] = detail::clamp255(cb);
        out.samples[i * 3 + 2] = detail::clamp255(cr);
        break;
      }
      case ColorSpace::Hsv: {
        double h, s, v;
        detail::rgb_to_hsv(r, g, b, h, s, v);
        out.samples[i * 3 + 0] = h;
        out.samples[i * 3 + 1] = s;
        out.samples[i * 3 + 2] = v;
        break;
      }
      default: break;
    }
  }
  return out;
}

/// Half-open pixel span [lo, hi) covered by cell `idx` of `parts` cells
/// along an axis of `extent` pixels. Spans partition the axis.
inline std::pair<int, int> cell_span(int extent, int parts, int idx) {
  const auto lo = static_cast<int>(static_cast<std::int64_t>(idx) * extent / parts);
  const auto hi = static_cast<int>(static_cast<std::int64_t>(idx + 1) * extent / parts);
  return {lo, hi};
}

/// Per-cell mean colors of a rows x cols grid laid over the image.
struct GridMeans {
  int rows = 0;
  int cols = 0;
  int channels = 0;
  std::vector<double> values;  // rows x cols x channels

  double at(int r, int c, int ch = 0) const {
    return values[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
  }
};

inline GridMeans grid_average(const RasterImage& img, int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw GridTooFine("grid_average: grid must have at least one cell per axis");
  }
  if (rows > img.height || cols > img.width) {
    throw GridTooFine("grid_average: " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " grid is finer than a " + std::to_string(img.height) + "x" +
                      std::to_string(img.width) + " image");
  }

  const int ch = img.channels();
  GridMeans grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.channels = ch;
  grid.values.assign(static_cast<std::size_t>(rows) * cols * ch, 0.0);

  for (int r = 0; r < rows; ++r) {
    const auto [y0, y1] = cell_span(img.height, rows, r);
    for (int c = 0; c < cols; ++c) {
      const auto [x0, x1] = cell_span(img.width, cols, c);
      const double count = static_cast<double>(y1 - y0) * (x1 - x0);
      for (int k = 0; k < ch; ++k) {
        double sum = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x)
            sum += img.at(y, x, k);
        grid.values[(static_cast<std::size_t>(r) * cols + c) * ch + k] = sum / count;
      }
    }
  }
  return grid;
}

}  // namespace annot

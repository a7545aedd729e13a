#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "annot/errors.hpp"
#include "annot/feature.hpp"
#include "annot/raster.hpp"
#include "annot/transforms.hpp"

namespace annot {

// ---------------------------------------------------------------------------
// Edge histogram
// ---------------------------------------------------------------------------

enum class EdgeClass { Vert, Horz, Diag45, Diag135, NonDir, None };

struct EhdParams {
  int target_block_count = 1024;  // desired blocks per whole image
  double edge_threshold = 11.0;
};

/// Classify one 2x2 block from its four sub-block means (row-major:
/// a0=TL, a1=TR, a2=BL, a3=BR). The five directional filter strengths are
/// compared; the strongest wins if it reaches the threshold, ties broken in
/// declaration order VERT, HORZ, DIAG45, DIAG135, NONDIR.
inline EdgeClass block_edge_class(double a0, double a1, double a2, double a3,
                                  double threshold) {
  const double r2 = std::numbers::sqrt2;
  const std::array<double, 5> strength = {
      std::abs(a0 - a1 + a2 - a3),            // vertical
      std::abs(a0 + a1 - a2 - a3),            // horizontal
      std::abs(r2 * a0 - r2 * a3),            // 45-degree diagonal
      std::abs(r2 * a1 - r2 * a2),            // 135-degree diagonal
      std::abs(2 * a0 - 2 * a1 - 2 * a2 + 2 * a3),  // non-directional
  };
  int best = 0;
  for (int i = 1; i < 5; ++i) {
    if (strength[i] > strength[best]) best = i;
  }
  if (strength[best] < threshold) return EdgeClass::None;
  return static_cast<EdgeClass>(best);
}

/// Largest even b >= 2 with (W/b)*(H/b) >= target, i.e. W*H >= target*b^2.
inline int ehd_block_size(int width, int height, int target_block_count) {
  const std::int64_t area = static_cast<std::int64_t>(width) * height;
  const std::int64_t target = target_block_count;
  int b = static_cast<int>(std::sqrt(static_cast<double>(area) / target)) / 2 * 2;
  if (b < 2) b = 2;
  while (area >= target * static_cast<std::int64_t>(b + 2) * (b + 2)) b += 2;
  while (b > 2 && area < target * static_cast<std::int64_t>(b) * b) b -= 2;
  return b;
}

/// 80-element edge histogram: 4x4 sub-image grid, five normalized direction
/// bins per sub-image in the order VERT, HORZ, DIAG45, DIAG135, NONDIR.
inline FeatureVector extract_ehd(const RasterImage& img, const EhdParams& params = {}) {
  const RasterImage gray = convert_space(img, ColorSpace::Gray);
  const int b = ehd_block_size(gray.width, gray.height, params.target_block_count);
  const int half = b / 2;

  FeatureVector fv{DescriptorKind::Ehd, std::vector<double>(80, 0.0)};
  for (int gy = 0; gy < 4; ++gy) {
    const auto [y0, y1] = cell_span(gray.height, 4, gy);
    for (int gx = 0; gx < 4; ++gx) {
      const auto [x0, x1] = cell_span(gray.width, 4, gx);
      if (x1 - x0 < b || y1 - y0 < b) {
        throw ImageTooSmall("image " + std::to_string(gray.width) + "x" +
                            std::to_string(gray.height) +
                            " cannot fit one " + std::to_string(b) + "x" +
                            std::to_string(b) + " block per sub-image");
      }
      std::array<int, 5> counts{};
      int total = 0;
      for (int by = y0; by + b <= y1; by += b) {
        for (int bx = x0; bx + b <= x1; bx += b) {
          // mean gray level of each of the four b/2 x b/2 sub-blocks
          std::array<double, 4> mean{};
          for (int q = 0; q < 4; ++q) {
            const int oy = by + (q / 2) * half;
            const int ox = bx + (q % 2) * half;
            double sum = 0.0;
            for (int y = oy; y < oy + half; ++y) {
              for (int x = ox; x < ox + half; ++x) sum += gray.at(y, x, 0);
            }
            mean[q] = sum / (half * half);
          }
          const EdgeClass cls = block_edge_class(mean[0], mean[1], mean[2], mean[3],
                                                 params.edge_threshold);
          if (cls != EdgeClass::None) ++counts[static_cast<int>(cls)];
          ++total;
        }
      }
      double* bins = fv.values.data() + (gy * 4 + gx) * 5;
      for (int i = 0; i < 5; ++i) bins[i] = static_cast<double>(counts[i]) / total;
    }
  }
  return fv;
}

// ---------------------------------------------------------------------------
// Scalable color
// ---------------------------------------------------------------------------

/// 256-coefficient scalable color descriptor: 16x4x4 HSV histogram
/// (bin = h*16 + s*4 + v), normalized to unit sum, then Haar-transformed.
inline FeatureVector extract_scd(const RasterImage& img) {
  const RasterImage hsv = convert_space(img, ColorSpace::Hsv);
  std::vector<double> hist(256, 0.0);
  const std::size_t pixels = hsv.pixel_count();
  for (std::size_t p = 0; p < pixels; ++p) {
    const double h = hsv.samples[p * 3 + 0];
    const double s = hsv.samples[p * 3 + 1];
    const double v = hsv.samples[p * 3 + 2];
    const int hb = std::min(15, static_cast<int>(h / 360.0 * 16.0));
    const int sb = std::min(3, static_cast<int>(s * 4.0));
    const int vb = std::min(3, static_cast<int>(v * 4.0));
    hist[hb * 16 + sb * 4 + vb] += 1.0;
  }
  for (double& x : hist) x /= static_cast<double>(pixels);
  return {DescriptorKind::Scd, haar_1d(hist)};
}

// ---------------------------------------------------------------------------
// Color layout
// ---------------------------------------------------------------------------

/// 192-value color layout descriptor: 8x8 grid of YCbCr cell means, 2-D DCT
/// per channel, zigzag scan, rows concatenated Y then Cb then Cr.
inline FeatureVector extract_cld_raw(const RasterImage& img) {
  if (img.width < 8 || img.height < 8) {
    throw ImageTooSmall("color layout needs at least 8x8, got " +
                        std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  const RasterImage ycc = convert_space(img, ColorSpace::YCbCr);
  const GridMeans grid = grid_average(ycc, 8, 8);

  FeatureVector fv{DescriptorKind::CldRaw, std::vector<double>()};
  fv.values.reserve(192);
  for (int c = 0; c < 3; ++c) {
    std::array<double, 64> block{};
    for (int r = 0; r < 8; ++r) {
      for (int col = 0; col < 8; ++col) block[r * 8 + col] = grid.at(r, col, c);
    }
    const std::array<double, 64> scanned = zigzag_scan(dct_2d(block));
    fv.values.insert(fv.values.end(), scanned.begin(), scanned.end());
  }
  return fv;
}

}  // namespace annot

#pragma once

// Deterministic synthetic images and corpora. The three corpus classes mix
// oriented 2x2 micro-patterns in different proportions, with a per-image
// drift shared across the whole image: single histogram bins then overlap
// between classes (hard for a greedy tree) while the bins jointly still
// separate them (easy for a pooled-evidence classifier).

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "annot/raster.hpp"
#include "support/codec.hpp"

namespace testsupport {

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline annot::RasterImage solid_rgb(int w, int h, double r, double g, double b) {
  annot::RasterImage img{w, h, annot::ColorSpace::Rgb, {}};
  img.samples.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t p = 0; p < static_cast<std::size_t>(w) * h; ++p) {
    img.samples[p * 3 + 0] = r;
    img.samples[p * 3 + 1] = g;
    img.samples[p * 3 + 2] = b;
  }
  return img;
}

inline annot::RasterImage solid_gray(int w, int h, double v) {
  return solid_rgb(w, h, v, v, v);
}

/// 0/255 stripes one pixel wide; vertical=true means columns alternate.
inline annot::RasterImage stripe_image(int w, int h, bool vertical) {
  annot::RasterImage img = solid_gray(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = ((vertical ? x : y) % 2 == 0) ? 255.0 : 0.0;
      for (int c = 0; c < 3; ++c) img.samples[(static_cast<std::size_t>(y) * w + x) * 3 + c] = v;
    }
  }
  return img;
}

inline annot::RasterImage random_rgb_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  annot::RasterImage img{w, h, annot::ColorSpace::Rgb, {}};
  img.samples.resize(static_cast<std::size_t>(w) * h * 3);
  for (double& s : img.samples) s = uniform01(gen) * 255.0;
  return img;
}

// ---------------------------------------------------------------------------
// Oriented micro-pattern images
// ---------------------------------------------------------------------------

// probabilities over {VERT, HORZ, DIAG45, DIAG135, NONDIR, flat}
using PatternMix = std::array<double, 6>;

/// Paint every 2x2 cell with a micro-pattern drawn from `mix`, on a gray
/// base that drifts per image, optionally tinted, with light pixel noise.
inline annot::RasterImage pattern_image(int w, int h, const PatternMix& mix,
                                        std::uint64_t seed, double tint_r = 0.0,
                                        double tint_g = 0.0, double tint_b = 0.0) {
  std::mt19937_64 gen(seed);
  const double base = 110.0 + uniform01(gen) * 36.0;  // per-image gray drift
  const double delta = 60.0;
  const double lo = base - delta, hi = base + delta;

  annot::RasterImage img = solid_gray(w, h, base);
  for (int cy = 0; cy + 2 <= h; cy += 2) {
    for (int cx = 0; cx + 2 <= w; cx += 2) {
      const double u = uniform01(gen);
      double acc = 0.0;
      int type = 5;
      for (int t = 0; t < 6; ++t) {
        acc += mix[t];
        if (u < acc) {
          type = t;
          break;
        }
      }
      // cell pixels row-major: p0=TL p1=TR p2=BL p3=BR
      std::array<double, 4> px{base, base, base, base};
      switch (type) {
        case 0: px = {hi, lo, hi, lo}; break;            // vertical edge
        case 1: px = {hi, hi, lo, lo}; break;            // horizontal edge
        case 2: px = {hi, base, base, lo}; break;        // 45-degree edge
        case 3: px = {base, hi, lo, base}; break;        // 135-degree edge
        case 4: px = {hi, lo, lo, hi}; break;            // non-directional
        default: break;                                  // flat cell
      }
      for (int q = 0; q < 4; ++q) {
        const int y = cy + q / 2, x = cx + q % 2;
        const double noise = (uniform01(gen) - 0.5) * 8.0;
        const double g = px[q] + noise;
        double* s = img.samples.data() + (static_cast<std::size_t>(y) * w + x) * 3;
        s[0] = annot::detail::clamp255(g + tint_r);
        s[1] = annot::detail::clamp255(g + tint_g);
        s[2] = annot::detail::clamp255(g + tint_b);
      }
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Corpora on disk
// ---------------------------------------------------------------------------

struct SyntheticCorpusParams {
  int per_class = 55;
  int width = 96;
  int height = 96;
  std::uint64_t seed = 1;
};

/// Three classes of oriented texture. Class means differ by `gap` in the
/// vertical/horizontal (and diagonal) pattern shares; a per-image drift of
/// up to `drift` moves mass the same way in every cell of that image.
inline std::vector<std::string> build_synthetic_corpus(const std::filesystem::path& root,
                                                       const SyntheticCorpusParams& params = {}) {
  namespace fs = std::filesystem;
  const std::vector<std::string> classes = {"diagonal", "horizontal", "vertical"};
  const double gap = 0.10;
  const double drift = 0.07;

  for (std::size_t c = 0; c < classes.size(); ++c) {
    fs::create_directories(root / classes[c]);
    for (int i = 0; i < params.per_class; ++i) {
      const std::uint64_t seed =
          params.seed * 1000003ULL + c * 7919ULL + static_cast<std::uint64_t>(i) * 104729ULL;
      std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);

      PatternMix mix{0.17, 0.17, 0.15, 0.15, 0.12, 0.24};
      if (classes[c] == "vertical") {
        mix[0] += gap;
        mix[1] -= gap * 0.5;
        mix[5] -= gap * 0.5;
      } else if (classes[c] == "horizontal") {
        mix[1] += gap;
        mix[0] -= gap * 0.5;
        mix[5] -= gap * 0.5;
      } else {
        mix[2] += gap * 0.5;
        mix[3] += gap * 0.5;
        mix[5] -= gap;
      }
      // image-wide drift, shared by all cells: swaps mass inside the
      // vertical/horizontal pair and inside the diagonal pair
      const double d1 = (uniform01(gen) - 0.5) * 2.0 * drift;
      const double d2 = (uniform01(gen) - 0.5) * 2.0 * drift;
      mix[0] += d1;
      mix[1] -= d1;
      mix[2] += d2;
      mix[3] -= d2;

      const double tint = 12.0;
      const double tj = (uniform01(gen) - 0.5) * 10.0;
      double tr = 0.0, tg = 0.0, tb = 0.0;
      if (c == 0) tr = tint + tj;
      if (c == 1) tg = tint + tj;
      if (c == 2) tb = tint + tj;

      const annot::RasterImage img =
          pattern_image(params.width, params.height, mix, gen(), tr, tg, tb);
      char name[32];
      std::snprintf(name, sizeof(name), "img%03d.png", i);
      write_bytes(root / classes[c] / name, encode_png(img));
    }
  }
  return classes;
}

/// Small flat corpus for I/O-level tests: three obviously separable solid
/// color classes, a handful of images each.
inline std::vector<std::string> build_toy_corpus(const std::filesystem::path& root,
                                                 int per_class = 4, int size = 32) {
  namespace fs = std::filesystem;
  const std::vector<std::string> classes = {"blue", "green", "red"};
  std::mt19937_64 gen(42);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    fs::create_directories(root / classes[c]);
    for (int i = 0; i < per_class; ++i) {
      double r = 30, g = 30, b = 30;
      const double v = 150.0 + uniform01(gen) * 80.0;
      if (c == 0) b = v;
      if (c == 1) g = v;
      if (c == 2) r = v;
      annot::RasterImage img = solid_rgb(size, size, r, g, b);
      // a little structure so EHD isn't all zeros
      for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
          if ((x / (1 + static_cast<int>(c))) % 2 == 0) {
            for (int ch = 0; ch < 3; ++ch) {
              img.samples[(static_cast<std::size_t>(y) * size + x) * 3 + ch] += 40.0;
            }
          }
        }
      }
      char name[32];
      std::snprintf(name, sizeof(name), "img%02d.png", i);
      write_bytes(root / classes[c] / name, encode_png(img));
    }
  }
  return classes;
}

/// Scratch directory beneath the system temp dir; unique per call.
inline std::filesystem::path fresh_scratch_dir(const std::string& tag) {
  static std::uint64_t counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("annot-tests-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport

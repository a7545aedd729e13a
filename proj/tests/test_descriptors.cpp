#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "annot/descriptors.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace annot;
using testsupport::solid_gray;
using testsupport::solid_rgb;

namespace {

RasterImage random_real_gray(int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RasterImage img{w, h, ColorSpace::Rgb, {}};
  img.samples.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t p = 0; p < static_cast<std::size_t>(w) * h; ++p) {
    const double v = testsupport::uniform01(gen) * 255.0;
    img.samples[p * 3] = img.samples[p * 3 + 1] = img.samples[p * 3 + 2] = v;
  }
  return img;
}

RasterImage rotate90_cw(const RasterImage& img) {
  RasterImage out{img.height, img.width, img.space, {}};
  out.samples.resize(img.samples.size());
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = img.at(img.height - 1 - x, y, c);
      }
    }
  }
  return out;
}

}  // namespace

// --- block classification ----------------------------------------------------

TEST_CASE("constant block has no edge") {
  CHECK(block_edge_class(9, 9, 9, 9, 0.5) == EdgeClass::None);
  CHECK(block_edge_class(0, 0, 0, 0, 11) == EdgeClass::None);
}

TEST_CASE("column contrast classifies vertical") {
  CHECK(block_edge_class(255, 0, 255, 0, 11) == EdgeClass::Vert);
}

TEST_CASE("main-diagonal agreement classifies non-directional") {
  CHECK(block_edge_class(255, 0, 0, 255, 11) == EdgeClass::NonDir);
}

TEST_CASE("remaining edge directions") {
  CHECK(block_edge_class(255, 255, 0, 0, 11) == EdgeClass::Horz);
  CHECK(block_edge_class(255, 128, 128, 0, 11) == EdgeClass::Diag45);
  CHECK(block_edge_class(128, 255, 0, 128, 11) == EdgeClass::Diag135);
}

TEST_CASE("threshold boundary lands on the classified side") {
  // vertical strength exactly 11: |a0-a1+a2-a3| with a=(5.5,0,5.5,0)
  CHECK(block_edge_class(5.5, 0, 5.5, 0, 11.0) == EdgeClass::Vert);
  CHECK(block_edge_class(5.4, 0, 5.4, 0, 11.0) == EdgeClass::None);
}

// --- block size --------------------------------------------------------------

TEST_CASE("block size targets ~1024 blocks") {
  CHECK(ehd_block_size(2048, 2048, 1024) == 64);
  CHECK(ehd_block_size(96, 96, 1024) == 2);
  CHECK(ehd_block_size(64, 64, 1024) == 2);
  CHECK(ehd_block_size(500, 500, 1024) == 14);
  CHECK(ehd_block_size(16, 16, 1024) == 2);  // floor at the minimum
  // largest even b with W*H >= 1024*b^2 in general
  for (int w : {33, 100, 333, 1000}) {
    for (int h : {41, 97, 640}) {
      const int b = ehd_block_size(w, h, 1024);
      CHECK(b >= 2);
      CHECK(b % 2 == 0);
      const std::int64_t area = static_cast<std::int64_t>(w) * h;
      if (b > 2) CHECK(area >= 1024LL * b * b);
      CHECK(area < 1024LL * (b + 2) * (b + 2));
    }
  }
}

// --- edge histogram ----------------------------------------------------------

TEST_CASE("constant image gives an all-zero edge histogram") {
  const FeatureVector fv = extract_ehd(solid_gray(64, 64, 100.0));
  REQUIRE(fv.values.size() == 80);
  for (double v : fv.values) CHECK(v == 0.0);
}

TEST_CASE("one-pixel vertical stripes fill the vertical bins") {
  const FeatureVector fv = extract_ehd(testsupport::stripe_image(64, 64, true));
  for (int sub = 0; sub < 16; ++sub) {
    CHECK(fv.values[sub * 5 + 0] == 1.0);  // every block classifies vertical
    for (int bin = 1; bin < 5; ++bin) CHECK(fv.values[sub * 5 + bin] == 0.0);
  }
  // and the horizontal twin
  const FeatureVector fh = extract_ehd(testsupport::stripe_image(64, 64, false));
  for (int sub = 0; sub < 16; ++sub) {
    CHECK(fh.values[sub * 5 + 1] == 1.0);
    CHECK(fh.values[sub * 5 + 0] == 0.0);
  }
}

TEST_CASE("edge histogram values stay in range") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FeatureVector fv = extract_ehd(random_real_gray(50 + seed % 37, 40 + seed % 29, seed));
    REQUIRE(fv.values.size() == 80);
    for (int sub = 0; sub < 16; ++sub) {
      double group = 0.0;
      for (int bin = 0; bin < 5; ++bin) {
        const double v = fv.values[sub * 5 + bin];
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        group += v;
      }
      CHECK(group <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("rotating a square image swaps vertical and horizontal mass") {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    for (int size : {64, 128}) {
      const RasterImage img = random_real_gray(size, size, seed);
      const FeatureVector before = extract_ehd(img);
      const FeatureVector after = extract_ehd(rotate90_cw(img));
      double vert_before = 0.0, horz_after = 0.0, horz_before = 0.0, vert_after = 0.0;
      for (int sub = 0; sub < 16; ++sub) {
        vert_before += before.values[sub * 5 + 0];
        horz_before += before.values[sub * 5 + 1];
        vert_after += after.values[sub * 5 + 0];
        horz_after += after.values[sub * 5 + 1];
      }
      CHECK(vert_before == Catch::Approx(horz_after).margin(1e-6));
      CHECK(horz_before == Catch::Approx(vert_after).margin(1e-6));
    }
  }
}

TEST_CASE("images too small for one block per sub-image are rejected") {
  CHECK_THROWS_AS(extract_ehd(solid_gray(7, 64, 1.0)), ImageTooSmall);
  CHECK_THROWS_AS(extract_ehd(solid_gray(64, 7, 1.0)), ImageTooSmall);
  CHECK_NOTHROW(extract_ehd(solid_gray(8, 8, 1.0)));
}

// --- scalable color ----------------------------------------------------------

TEST_CASE("scalable color DC equals one") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const FeatureVector fv = extract_scd(testsupport::random_rgb_image(31, 22, seed));
    REQUIRE(fv.values.size() == 256);
    CHECK(fv.values[0] == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("constant color concentrates one histogram bin") {
  const RasterImage img = solid_rgb(16, 16, 200, 40, 40);  // a definite red
  const FeatureVector fv = extract_scd(img);

  // locate the bin the shared pixel lands in and Haar-transform that impulse
  const RasterImage hsv = convert_space(img, ColorSpace::Hsv);
  const int hb = std::min(15, static_cast<int>(hsv.at(0, 0, 0) / 360.0 * 16.0));
  const int sb = std::min(3, static_cast<int>(hsv.at(0, 0, 1) * 4.0));
  const int vb = std::min(3, static_cast<int>(hsv.at(0, 0, 2) * 4.0));
  std::vector<double> impulse(256, 0.0);
  impulse[hb * 16 + sb * 4 + vb] = 1.0;
  const std::vector<double> expected = testsupport::haar_oracle(impulse);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(fv.values[i] == Catch::Approx(expected[i]).margin(1e-12));
  }
}

TEST_CASE("a uniform histogram transforms to a lone unit DC") {
  // 256 pixels, one per quantization cell, hit via exact HSV bin centers
  RasterImage img{16, 16, ColorSpace::Rgb, {}};
  img.samples.resize(16 * 16 * 3);
  int p = 0;
  for (int hb = 0; hb < 16; ++hb) {
    for (int sb = 0; sb < 4; ++sb) {
      for (int vb = 0; vb < 4; ++vb) {
        const double h = (hb + 0.5) / 16.0 * 360.0;
        const double s = (sb + 0.5) / 4.0;
        const double v = (vb + 0.5) / 4.0;
        // standard hexcone inverse
        const double c = v * s;
        const double hp = h / 60.0;
        const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
        double r = 0, g = 0, b = 0;
        if (hp < 1) { r = c; g = x; }
        else if (hp < 2) { r = x; g = c; }
        else if (hp < 3) { g = c; b = x; }
        else if (hp < 4) { g = x; b = c; }
        else if (hp < 5) { r = x; b = c; }
        else { r = c; b = x; }
        const double m = v - c;
        img.samples[p * 3 + 0] = (r + m) * 255.0;
        img.samples[p * 3 + 1] = (g + m) * 255.0;
        img.samples[p * 3 + 2] = (b + m) * 255.0;
        ++p;
      }
    }
  }
  const FeatureVector fv = extract_scd(img);
  CHECK(fv.values[0] == Catch::Approx(1.0).margin(1e-9));
  for (std::size_t i = 1; i < 256; ++i) {
    CHECK(fv.values[i] == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("scalable color ignores pixel order") {
  const RasterImage img = testsupport::random_rgb_image(24, 18, 77);
  RasterImage shuffled = img;
  std::mt19937_64 gen(3);
  const std::size_t pixels = img.pixel_count();
  for (std::size_t i = pixels - 1; i > 0; --i) {
    const std::size_t j = gen() % (i + 1);
    for (int c = 0; c < 3; ++c) std::swap(shuffled.samples[i * 3 + c], shuffled.samples[j * 3 + c]);
  }
  const FeatureVector a = extract_scd(img);
  const FeatureVector b = extract_scd(shuffled);
  CHECK(a.values == b.values);
}

// --- color layout ------------------------------------------------------------

TEST_CASE("color layout of a constant image is three lone DC terms") {
  const RasterImage img = solid_rgb(40, 40, 120, 50, 210);
  const FeatureVector fv = extract_cld_raw(img);
  REQUIRE(fv.values.size() == 192);
  for (int ch = 0; ch < 3; ++ch) {
    CHECK(std::abs(fv.values[ch * 64 + 0]) > 1.0);  // DC carries the channel mean
    for (int k = 1; k < 64; ++k) {
      CHECK(fv.values[ch * 64 + k] == Catch::Approx(0.0).margin(1e-9));
    }
  }
}

TEST_CASE("constant gray level v puts 8v in the luma DC slot") {
  const double v = 93.0;
  const FeatureVector fv = extract_cld_raw(solid_gray(32, 32, v));
  CHECK(fv.values[0] == Catch::Approx(8.0 * v).margin(1e-6));
}

TEST_CASE("color layout preserves per-channel energy") {
  const RasterImage img = testsupport::random_rgb_image(57, 43, 31);
  const FeatureVector fv = extract_cld_raw(img);
  const GridMeans grid = grid_average(convert_space(img, ColorSpace::YCbCr), 8, 8);
  for (int ch = 0; ch < 3; ++ch) {
    double cell_energy = 0.0, coeff_energy = 0.0;
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) cell_energy += grid.at(r, c, ch) * grid.at(r, c, ch);
    }
    for (int k = 0; k < 64; ++k) {
      coeff_energy += fv.values[ch * 64 + k] * fv.values[ch * 64 + k];
    }
    CHECK(coeff_energy == Catch::Approx(cell_energy).margin(1e-6));
  }
}

TEST_CASE("color layout ignores pixel order within grid cells") {
  RasterImage img = testsupport::random_rgb_image(64, 64, 55);
  RasterImage shuffled = img;
  std::mt19937_64 gen(4);
  for (int cell_y = 0; cell_y < 8; ++cell_y) {
    for (int cell_x = 0; cell_x < 8; ++cell_x) {
      std::vector<std::pair<int, int>> coords;
      for (int y = cell_y * 8; y < cell_y * 8 + 8; ++y) {
        for (int x = cell_x * 8; x < cell_x * 8 + 8; ++x) coords.push_back({y, x});
      }
      for (std::size_t i = coords.size() - 1; i > 0; --i) {
        const std::size_t j = gen() % (i + 1);
        for (int c = 0; c < 3; ++c) {
          std::swap(shuffled.at(coords[i].first, coords[i].second, c),
                    shuffled.at(coords[j].first, coords[j].second, c));
        }
      }
    }
  }
  const FeatureVector a = extract_cld_raw(img);
  const FeatureVector b = extract_cld_raw(shuffled);
  // cell sums accumulate in raster order, so equality is only up to rounding
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == Catch::Approx(b.values[i]).margin(1e-8));
  }
}

TEST_CASE("color layout needs at least 8x8") {
  CHECK_THROWS_AS(extract_cld_raw(solid_gray(7, 20, 1.0)), ImageTooSmall);
  CHECK_THROWS_AS(extract_cld_raw(solid_gray(20, 7, 1.0)), ImageTooSmall);
  CHECK_NOTHROW(extract_cld_raw(solid_gray(8, 8, 1.0)));
}

TEST_CASE("extraction is deterministic") {
  const RasterImage img = testsupport::random_rgb_image(48, 48, 62);
  CHECK(extract_ehd(img).values == extract_ehd(img).values);
  CHECK(extract_scd(img).values == extract_scd(img).values);
  CHECK(extract_cld_raw(img).values == extract_cld_raw(img).values);
}

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "annot/errors.hpp"

namespace annot {

/// One-dimensional Haar transform of a power-of-two-length signal.
/// Pairwise sums a+b and differences a-b; the sums half recurses. Output
/// layout: [overall lowpass, detail coefficients coarsest-to-finest].
inline std::vector<double> haar_1d(std::span<const double> signal) {
  const std::size_t n = signal.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw LengthNotPowerOfTwo("haar_1d needs a power-of-two length, got " +
                              std::to_string(n));
  }
  std::vector<double> out(signal.begin(), signal.end());
  std::vector<double> tmp(n);
  for (std::size_t len = n; len > 1; len /= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      tmp[i] = out[2 * i] + out[2 * i + 1];
      tmp[half + i] = out[2 * i] - out[2 * i + 1];
    }
    for (std::size_t i = 0; i < len; ++i) out[i] = tmp[i];
  }
  return out;
}

inline std::vector<double> inverse_haar_1d(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw LengthNotPowerOfTwo("inverse_haar_1d needs a power-of-two length, got " +
                              std::to_string(n));
  }
  std::vector<double> out(coeffs.begin(), coeffs.end());
  std::vector<double> tmp(n);
  for (std::size_t len = 2; len <= n; len *= 2) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
      tmp[2 * i] = (out[i] + out[half + i]) / 2.0;
      tmp[2 * i + 1] = (out[i] - out[half + i]) / 2.0;
    }
    for (std::size_t i = 0; i < len; ++i) out[i] = tmp[i];
  }
  return out;
}

namespace detail {

// 8x8 orthonormal DCT-II basis, built once.
inline const std::array<std::array<double, 8>, 8>& dct8_basis() {
  static const std::array<std::array<double, 8>, 8> basis = [] {
    std::array<std::array<double, 8>, 8> b{};
    for (int u = 0; u < 8; ++u) {
      const double c = (u == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int m = 0; m < 8; ++m) {
        b[u][m] = c * std::cos((2.0 * m + 1.0) * u * std::numbers::pi / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

}  // namespace detail

/// 8x8 two-dimensional DCT-II with orthonormal scaling; input and output are
/// row-major 64-element blocks.
inline std::array<double, 64> dct_2d(const std::array<double, 64>& block) {
  const auto& b = detail::dct8_basis();
  std::array<double, 64> rows{};  // rows transformed along n (columns index)
  for (int m = 0; m < 8; ++m) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int n = 0; n < 8; ++n) s += block[m * 8 + n] * b[v][n];
      rows[m * 8 + v] = s;
    }
  }
  std::array<double, 64> out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int m = 0; m < 8; ++m) s += rows[m * 8 + v] * b[u][m];
      out[u * 8 + v] = s;
    }
  }
  return out;
}

inline std::array<double, 64> idct_2d(const std::array<double, 64>& coeffs) {
  const auto& b = detail::dct8_basis();
  std::array<double, 64> rows{};
  for (int u = 0; u < 8; ++u) {
    for (int n = 0; n < 8; ++n) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += coeffs[u * 8 + v] * b[v][n];
      rows[u * 8 + n] = s;
    }
  }
  std::array<double, 64> out{};
  for (int m = 0; m < 8; ++m) {
    for (int n = 0; n < 8; ++n) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += rows[u * 8 + n] * b[u][m];
      out[m * 8 + n] = s;
    }
  }
  return out;
}

/// JPEG zigzag scan order: zigzag_order()[k] is the row-major index of the
/// k-th coefficient along the diagonal scan of an 8x8 block.
inline const std::array<int, 64>& zigzag_order() {
  static const std::array<int, 64> order = {
      0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
      12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
      35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
      58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};
  return order;
}

inline std::array<double, 64> zigzag_scan(const std::array<double, 64>& block) {
  std::array<double, 64> out{};
  const auto& order = zigzag_order();
  for (int k = 0; k < 64; ++k) out[k] = block[order[k]];
  return out;
}

}  // namespace annot

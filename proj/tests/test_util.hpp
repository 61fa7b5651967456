#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "pcfed/linalg.hpp"
#include "pcfed/ocsvm.hpp"

namespace pcfed::testing {

inline Matrix gaussian_blob(std::size_t n, std::size_t dim, std::uint64_t seed, double spread = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  Matrix X(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) X(i, d) = g(rng);
  }
  return X;
}

/// Noisy ring of radius 1 in 2D.
inline Matrix noisy_ring(std::size_t n, std::uint64_t seed, double noise = 0.05) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, noise);
  Matrix X(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    X(i, 0) = std::cos(a) + g(rng);
    X(i, 1) = std::sin(a) + g(rng);
  }
  return X;
}

inline Matrix unit_circle(std::size_t n) {
  Matrix X(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    X(i, 0) = std::cos(a);
    X(i, 1) = std::sin(a);
  }
  return X;
}

inline Matrix uniform_disk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix X(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(u(rng));
    const double a = 2.0 * std::numbers::pi * u(rng);
    X(i, 0) = r * std::cos(a);
    X(i, 1) = r * std::sin(a);
  }
  return X;
}

/// size x size grid over [lo, hi]^2.
inline Matrix square_grid(std::size_t size, double lo, double hi) {
  Matrix G(size * size, 2);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      G(a * size + b, 0) = lo + (hi - lo) * static_cast<double>(a) / static_cast<double>(size - 1);
      G(a * size + b, 1) = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(size - 1);
    }
  }
  return G;
}

/// Fraction of rows of G where both models give the same sign.
inline double sign_agreement(const OcsvmModel& a, const OcsvmModel& b, const Matrix& G) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < G.rows(); ++i) {
    if (classify(a, G.row(i)) == classify(b, G.row(i))) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(G.rows());
}

inline double brute_dual_objective(const std::vector<double>& a, const KernelMatrix& K) {
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lin += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * a[j] * K(i, j);
  }
  return lin - 0.5 * quad;
}

}  // namespace pcfed::testing

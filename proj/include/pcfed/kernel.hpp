#pragma once

#include <span>

#include "pcfed/linalg.hpp"

namespace pcfed {

/// Gaussian kernel k(x, y) = exp(-||x - y||^2 / (2 sigma^2)).
struct KernelConfig {
  double sigma = 1.0;

  explicit KernelConfig(double s);
  KernelConfig() = default;
};

/// Dense symmetric Gram matrix with unit diagonal.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(Matrix entries);

  std::size_t n() const { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  std::span<const double> row(std::size_t i) const { return entries_.row(i); }
  const Matrix& entries() const { return entries_; }

  /// Principal submatrix over the given indices.
  KernelMatrix submatrix(std::span<const std::size_t> indices) const;

 private:
  Matrix entries_;
};

double gaussian_kernel(std::span<const double> x, std::span<const double> y, const KernelConfig& cfg);

/// Median heuristic: sqrt(median pairwise squared distance / 2).
/// Throws when every pair of rows coincides.
double median_sigma(const Matrix& X);

KernelMatrix kernel_matrix(const Matrix& X, const KernelConfig& cfg);

}  // namespace pcfed

#include "pcfed/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcfed {

KernelConfig::KernelConfig(double s) : sigma(s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("KernelConfig: sigma must be positive and finite");
  }
}

KernelMatrix::KernelMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("KernelMatrix: matrix must be square");
  }
}

KernelMatrix KernelMatrix::submatrix(std::span<const std::size_t> indices) const {
  Matrix sub(indices.size(), indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = 0; b < indices.size(); ++b) {
      sub(a, b) = entries_(indices[a], indices[b]);
    }
  }
  return KernelMatrix(std::move(sub));
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y, const KernelConfig& cfg) {
  if (x.size() != y.size()) throw std::invalid_argument("gaussian_kernel: dimension mismatch");
  if (x.empty()) throw std::invalid_argument("gaussian_kernel: empty feature vector");
  return std::exp(-squared_distance(x, y) / (2.0 * cfg.sigma * cfg.sigma));
}

double median_sigma(const Matrix& X) {
  if (X.rows() < 2) throw std::invalid_argument("median_sigma: need at least two samples");
  std::vector<double> d2;
  d2.reserve(X.rows() * (X.rows() - 1) / 2);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t j = i + 1; j < X.rows(); ++j) d2.push_back(squared_distance(X.row(i), X.row(j)));
  }
  std::sort(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const double median = (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  if (!(median > 0.0)) throw std::invalid_argument("median_sigma: median pairwise distance is zero");
  return std::sqrt(median / 2.0);
}

KernelMatrix kernel_matrix(const Matrix& X, const KernelConfig& cfg) {
  if (X.empty()) throw std::invalid_argument("kernel_matrix: no samples");
  const std::size_t n = X.rows();
  Matrix K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = gaussian_kernel(X.row(i), X.row(j), cfg);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return KernelMatrix(std::move(K));
}

}  // namespace pcfed

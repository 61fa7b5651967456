#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcfed/kernel.hpp"
#include "pcfed/linalg.hpp"

namespace pcfed {

/// Hyperparameters of the dual solver.
struct TrainConfig {
  double nu = 0.05;       // upper bound on the outlier fraction
  double eta = 0.05;      // learning rate
  double epsilon = 1e-5;  // stop when ||alpha_t - alpha_{t+1}|| <= epsilon
  int max_epochs = 1000;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  /// Box upper bound 1 / (nu n).
  double upper_bound(std::size_t n) const { return 1.0 / (nu * static_cast<double>(n)); }
};

/// Lagrange multipliers, one per training sample.
struct AlphaVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double sum() const;
  friend bool operator==(const AlphaVector&, const AlphaVector&) = default;
};

/// Kernel-space coefficients w = alpha K shared with the server.
struct CoefficientVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;
};

/// Deployable one-class detector: g(x) = sum_i alpha_i k(x_i, x) - rho.
struct OcsvmModel {
  Matrix support_points;
  std::vector<double> alphas;
  // Row of each support point in the training matrix it came from.
  std::vector<std::size_t> support_index;
  double rho = 0.0;
  KernelConfig kernel;
  double nu = 0.05;

  std::size_t n_support() const { return alphas.size(); }
};

/// Multipliers at or below this value do not make a support vector.
inline constexpr double kSupportThreshold = 1e-8;

AlphaVector init_alpha(std::size_t n, const TrainConfig& cfg);

double project_box(double a, std::size_t n, double nu);

/// One Gauss-Seidel sweep k = 0..n-1 of
///   alpha_k <- clamp(alpha_k + eta (offset - sum_i alpha_i K(i,k)), 0, 1/(nu n))
/// using the freshest alpha at each step. offset = 1 is the plain dual
/// gradient; train_local passes the current rho to honour sum(alpha) = 1.
AlphaVector sgd_epoch(const AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg,
                      double offset = 1.0);

/// Same sweep, visiting coordinates in the given order, updating alpha in place.
void sgd_sweep(AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg, double offset,
               std::span<const std::size_t> order);

/// Euclidean projection onto {0 <= a_i <= upper, sum a_i = 1}.
AlphaVector project_box_simplex(const AlphaVector& alpha, double upper);

struct LocalTrainResult {
  AlphaVector alpha;
  KernelMatrix K;
  int epochs = 0;
  bool converged = false;
};

/// Sweeps until successive alphas differ by at most epsilon or max_epochs is hit.
LocalTrainResult train_local(const Matrix& X, const KernelConfig& kcfg, const TrainConfig& cfg);

CoefficientVector compute_w(const AlphaVector& alpha, const KernelMatrix& K);

/// J(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j K_ij.
double dual_objective(const AlphaVector& alpha, const KernelMatrix& K);

/// Client loss reported to the server: -J(alpha).
double local_loss(const AlphaVector& alpha, const KernelMatrix& K);

/// Offset rho: mean of (alpha K)_i over margin support vectors
/// (strictly inside (0, upper) by 1e-8), or over all support vectors when
/// no margin vector exists. Throws std::domain_error if alpha is all zero.
double compute_rho(const AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg);
double compute_rho(const AlphaVector& alpha, const KernelMatrix& K, double upper);

/// Keeps samples with alpha_i > kSupportThreshold and attaches rho.
OcsvmModel make_model(const Matrix& X, const AlphaVector& alpha, const KernelMatrix& K,
                      const KernelConfig& kcfg, const TrainConfig& cfg);

double decision(const OcsvmModel& model, std::span<const double> x);

/// +1 healthy, -1 anomalous; g(x) == 0 counts as healthy.
int classify(double g);
int classify(const OcsvmModel& model, std::span<const double> x);

}  // namespace pcfed

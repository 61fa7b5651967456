#include "pcfed/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pcfed {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

// sum_i alpha_i K(i, k); K is symmetric so row k serves as column k.
double kernel_weighted_sum(const std::vector<double>& alpha, const KernelMatrix& K, std::size_t k) {
  auto row = K.row(k);
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * row[i];
  return s;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("TrainConfig: nu must lie in (0, 1)");
  if (!(eta > 0.0)) throw std::invalid_argument("TrainConfig: eta must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("TrainConfig: epsilon must be positive");
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
}

double AlphaVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

AlphaVector init_alpha(std::size_t n, const TrainConfig& cfg) {
  cfg.validate();
  if (n == 0) throw std::invalid_argument("init_alpha: n must be positive");
  return AlphaVector{std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

double project_box(double a, std::size_t n, double nu) {
  const double upper = 1.0 / (nu * static_cast<double>(n));
  return std::clamp(a, 0.0, upper);
}

void sgd_sweep(AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg, double offset,
               std::span<const std::size_t> order) {
  require_same_size(alpha.size(), K.n(), "sgd_sweep");
  const std::size_t n = alpha.size();
  const double upper = cfg.upper_bound(n);
  for (std::size_t k : order) {
    const double grad = offset - kernel_weighted_sum(alpha.values, K, k);
    alpha.values[k] = std::clamp(alpha.values[k] + cfg.eta * grad, 0.0, upper);
  }
}

AlphaVector sgd_epoch(const AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg, double offset) {
  require_same_size(alpha.size(), K.n(), "sgd_epoch");
  std::vector<std::size_t> order(alpha.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  AlphaVector out = alpha;
  sgd_sweep(out, K, cfg, offset, order);
  return out;
}

AlphaVector project_box_simplex(const AlphaVector& alpha, double upper) {
  const std::size_t n = alpha.size();
  if (n == 0) throw std::invalid_argument("project_box_simplex: empty vector");
  if (upper * static_cast<double>(n) < 1.0 - 1e-12) {
    throw std::invalid_argument("project_box_simplex: box and simplex do not intersect");
  }
  const auto& v = alpha.values;
  // mass(t) = sum_i clamp(v_i - t, 0, upper) is piecewise linear and
  // non-increasing in t with kinks at v_i and v_i - upper.
  auto mass = [&](double t) {
    double s = 0.0;
    for (double x : v) s += std::clamp(x - t, 0.0, upper);
    return s;
  };
  std::vector<double> kinks;
  kinks.reserve(2 * n);
  for (double x : v) {
    kinks.push_back(x - upper);
    kinks.push_back(x);
  }
  std::sort(kinks.begin(), kinks.end());
  // Largest kink with mass >= 1; mass(kinks.front()) = n * upper >= 1.
  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (mass(kinks[mid]) >= 1.0) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  double t = kinks[lo];
  const double m_lo = mass(t);
  if (m_lo > 1.0 && lo + 1 < kinks.size()) {
    const double t_hi = kinks[lo + 1];
    const double m_hi = mass(t_hi);
    t = t + (m_lo - 1.0) * (t_hi - t) / (m_lo - m_hi);
  }
  AlphaVector out{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) out.values[i] = std::clamp(v[i] - t, 0.0, upper);
  return out;
}

LocalTrainResult train_local(const Matrix& X, const KernelConfig& kcfg, const TrainConfig& cfg) {
  cfg.validate();
  if (X.empty()) throw std::invalid_argument("train_local: no training samples");
  LocalTrainResult result;
  result.K = kernel_matrix(X, kcfg);
  const std::size_t n = X.rows();
  const double upper = cfg.upper_bound(n);
  result.alpha = init_alpha(n, cfg);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double rho = compute_rho(result.alpha, result.K, upper);
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    AlphaVector next = result.alpha;
    sgd_sweep(next, result.K, cfg, rho, order);
    next = project_box_simplex(next, upper);
    rho = compute_rho(next, result.K, upper);

    double diff2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = next.values[i] - result.alpha.values[i];
      diff2 += d * d;
    }
    result.alpha = std::move(next);
    result.epochs = epoch;
    if (std::sqrt(diff2) <= cfg.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

CoefficientVector compute_w(const AlphaVector& alpha, const KernelMatrix& K) {
  require_same_size(alpha.size(), K.n(), "compute_w");
  CoefficientVector w{std::vector<double>(alpha.size())};
  for (std::size_t k = 0; k < alpha.size(); ++k) w.values[k] = kernel_weighted_sum(alpha.values, K, k);
  return w;
}

double dual_objective(const AlphaVector& alpha, const KernelMatrix& K) {
  require_same_size(alpha.size(), K.n(), "dual_objective");
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha.values[i];
    quadratic += alpha.values[i] * kernel_weighted_sum(alpha.values, K, i);
  }
  return linear - 0.5 * quadratic;
}

double local_loss(const AlphaVector& alpha, const KernelMatrix& K) { return -dual_objective(alpha, K); }

double compute_rho(const AlphaVector& alpha, const KernelMatrix& K, double upper) {
  require_same_size(alpha.size(), K.n(), "compute_rho");
  constexpr double kSlack = 1e-8;
  double margin_sum = 0.0;
  std::size_t margin_count = 0;
  double support_sum = 0.0;
  std::size_t support_count = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double a = alpha.values[i];
    if (a <= kSupportThreshold) continue;
    const double wi = kernel_weighted_sum(alpha.values, K, i);
    support_sum += wi;
    ++support_count;
    if (a > kSlack && a < upper - kSlack) {
      margin_sum += wi;
      ++margin_count;
    }
  }
  if (support_count == 0) throw std::domain_error("compute_rho: no support vectors (all alphas are zero)");
  const double rho = margin_count > 0 ? margin_sum / static_cast<double>(margin_count)
                                      : support_sum / static_cast<double>(support_count);
  if (!std::isfinite(rho)) throw std::domain_error("compute_rho: non-finite offset");
  return rho;
}

double compute_rho(const AlphaVector& alpha, const KernelMatrix& K, const TrainConfig& cfg) {
  return compute_rho(alpha, K, cfg.upper_bound(alpha.size()));
}

OcsvmModel make_model(const Matrix& X, const AlphaVector& alpha, const KernelMatrix& K, const KernelConfig& kcfg,
                      const TrainConfig& cfg) {
  require_same_size(X.rows(), alpha.size(), "make_model");
  OcsvmModel model;
  model.kernel = kcfg;
  model.nu = cfg.nu;
  // Sub-threshold multipliers are dropped so rho matches the deployed sum.
  AlphaVector kept = alpha;
  for (double& a : kept.values) {
    if (a <= kSupportThreshold) a = 0.0;
  }
  model.rho = compute_rho(kept, K, cfg);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha.values[i] > kSupportThreshold) {
      model.support_points.append_row(X.row(i));
      model.alphas.push_back(alpha.values[i]);
      model.support_index.push_back(i);
    }
  }
  return model;
}

double decision(const OcsvmModel& model, std::span<const double> x) {
  if (model.n_support() == 0) throw std::domain_error("decision: model has no support vectors");
  if (x.size() != model.support_points.cols()) throw std::invalid_argument("decision: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < model.n_support(); ++i) {
    s += model.alphas[i] * gaussian_kernel(model.support_points.row(i), x, model.kernel);
  }
  return s - model.rho;
}

int classify(double g) { return g >= 0.0 ? +1 : -1; }

int classify(const OcsvmModel& model, std::span<const double> x) { return classify(decision(model, x)); }

}  // namespace pcfed

#include "pcfed/personalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcfed/kernel.hpp"

namespace pcfed {

void EdgeConfig::validate(std::size_t sample_count) const {
  if (k < 1 || static_cast<std::size_t>(k) >= sample_count) {
    throw std::invalid_argument("EdgeConfig: k must satisfy 1 <= k < sample count (k=" + std::to_string(k) +
                                ", samples=" + std::to_string(sample_count) + ")");
  }
  if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("EdgeConfig: gamma must lie in (0, 0.5)");
}

std::vector<std::size_t> knn(const Matrix& points, std::size_t query_index, std::size_t k) {
  if (query_index >= points.rows()) throw std::out_of_range("knn: query index out of range");
  if (k == 0 || k >= points.rows()) {
    throw std::invalid_argument("knn: k must satisfy 0 < k < number of points");
  }
  const auto q = points.row(query_index);
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(points.rows() - 1);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    if (i != query_index) cand.emplace_back(squared_distance(q, points.row(i)), i);
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<std::size_t> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = cand[j].second;
  return out;
}

namespace {

// Unit vector from x to y; zero when they coincide.
Vector unit_towards(std::span<const double> x, std::span<const double> y, bool& coincident) {
  Vector u(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) u[d] = y[d] - x[d];
  const double len = norm(u);
  coincident = !(len > 0.0);
  if (coincident) {
    std::fill(u.begin(), u.end(), 0.0);
  } else {
    for (double& c : u) c /= len;
  }
  return u;
}

}  // namespace

NormVector norm_vector(std::span<const double> x, const Matrix& neighbors) {
  if (neighbors.cols() != x.size() && !neighbors.empty()) {
    throw std::invalid_argument("norm_vector: dimension mismatch");
  }
  NormVector out{Vector(x.size(), 0.0), 0};
  for (std::size_t j = 0; j < neighbors.rows(); ++j) {
    bool coincident = false;
    const Vector u = unit_towards(x, neighbors.row(j), coincident);
    if (coincident) {
      ++out.coincident;
      continue;
    }
    for (std::size_t d = 0; d < x.size(); ++d) out.v[d] += u[d];
  }
  return out;
}

double edge_ratio(std::span<const double> x, const Matrix& neighbors, std::span<const double> v) {
  if (neighbors.empty()) throw std::invalid_argument("edge_ratio: no neighbours");
  std::size_t count = 0;
  for (std::size_t j = 0; j < neighbors.rows(); ++j) {
    bool coincident = false;
    const Vector u = unit_towards(x, neighbors.row(j), coincident);
    if (dot(u, v) >= 0.0) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(neighbors.rows());
}

EdgeVerdict classify_edge(const Matrix& points, std::size_t sv_index, const EdgeConfig& cfg) {
  cfg.validate(points.rows());
  const auto idx = knn(points, sv_index, static_cast<std::size_t>(cfg.k));
  const Matrix neighbors = points.select_rows(idx);
  const auto x = points.row(sv_index);
  const NormVector nv = norm_vector(x, neighbors);

  EdgeVerdict verdict;
  verdict.sv_index = sv_index;
  verdict.l = edge_ratio(x, neighbors, nv.v);
  verdict.degenerate = norm(nv.v) < 1e-9 * static_cast<double>(cfg.k);
  verdict.is_edge = !verdict.degenerate && verdict.l >= 1.0 - cfg.gamma;
  return verdict;
}

PersonalizeResult personalize_model(const OcsvmModel& model, const Matrix& local_X, const EdgeConfig& cfg,
                                    const TrainConfig& tcfg) {
  if (model.n_support() == 0) throw std::invalid_argument("personalize_model: model has no support vectors");
  if (model.support_index.size() != model.n_support()) {
    throw std::invalid_argument("personalize_model: model lacks support indices into the training data");
  }
  cfg.validate(local_X.rows());

  PersonalizeResult result;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < model.n_support(); ++s) {
    const std::size_t row = model.support_index[s];
    if (row >= local_X.rows()) throw std::out_of_range("personalize_model: support index outside local data");
    EdgeVerdict v = classify_edge(local_X, row, cfg);
    if (v.is_edge) keep.push_back(s);
    result.verdicts.push_back(v);
  }
  result.n_edge = keep.size();

  if (keep.empty()) {
    result.model = model;
    result.fallback = true;
    return result;
  }

  const double total = std::accumulate(model.alphas.begin(), model.alphas.end(), 0.0);
  double kept_total = 0.0;
  for (std::size_t s : keep) kept_total += model.alphas[s];
  const double scale = total / kept_total;

  OcsvmModel out;
  out.kernel = model.kernel;
  out.nu = model.nu;
  out.support_points = model.support_points.select_rows(keep);
  for (std::size_t s : keep) {
    out.alphas.push_back(model.alphas[s] * scale);
    out.support_index.push_back(model.support_index[s]);
  }
  const KernelMatrix K = kernel_matrix(out.support_points, out.kernel);
  const double upper = scale * tcfg.upper_bound(local_X.rows());
  out.rho = compute_rho(AlphaVector{out.alphas}, K, upper);
  result.model = std::move(out);
  return result;
}

}  // namespace pcfed

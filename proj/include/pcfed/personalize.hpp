#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcfed/linalg.hpp"
#include "pcfed/ocsvm.hpp"

namespace pcfed {

struct EdgeConfig {
  int k = 10;           // neighbours per support vector
  double gamma = 0.05;  // tolerated fraction of neighbours on the far side

  void validate(std::size_t sample_count) const;
};

struct EdgeVerdict {
  std::size_t sv_index = 0;
  double l = 0.0;  // fraction of neighbours with theta >= 0
  bool is_edge = false;
  bool degenerate = false;  // norm vector vanished
};

/// Indices of the k nearest rows to points.row(query_index), excluding the
/// query itself. Ties go to the lower index.
std::vector<std::size_t> knn(const Matrix& points, std::size_t query_index, std::size_t k);

struct NormVector {
  Vector v;
  std::size_t coincident = 0;  // neighbours equal to x, skipped
};

/// Sum of unit vectors from x towards each neighbour.
NormVector norm_vector(std::span<const double> x, const Matrix& neighbors);

/// (1/k) |{ j : (u_j . v) >= 0 }| with u_j the unit vector from x to neighbour j.
double edge_ratio(std::span<const double> x, const Matrix& neighbors, std::span<const double> v);

/// Tangent-plane test for points.row(sv_index) against its k nearest rows.
EdgeVerdict classify_edge(const Matrix& points, std::size_t sv_index, const EdgeConfig& cfg);

struct PersonalizeResult {
  OcsvmModel model;
  std::vector<EdgeVerdict> verdicts;  // one per input support vector
  std::size_t n_edge = 0;
  bool fallback = false;  // no edge support vector found; input model returned
};

/// Keeps only the edge support vectors, rescales their alphas so the total
/// is preserved, and recomputes rho on the retained set. Neighbours are
/// searched over all of local_X. The model must carry support_index into
/// local_X.
PersonalizeResult personalize_model(const OcsvmModel& model, const Matrix& local_X, const EdgeConfig& cfg,
                                    const TrainConfig& tcfg);

}  // namespace pcfed

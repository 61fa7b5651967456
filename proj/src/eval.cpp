#include "pcfed/eval.hpp"

#include <stdexcept>

namespace pcfed {

Confusion confusion(const std::vector<int>& predictions, const std::vector<Label>& truths) {
  if (predictions.size() != truths.size()) throw std::invalid_argument("confusion: length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool predicted_healthy = predictions[i] > 0;
    const bool healthy = truths[i] == Label::Healthy;
    if (predicted_healthy && healthy) {
      ++c.tp;
    } else if (predicted_healthy) {
      ++c.fp;
    } else if (healthy) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double precision(const Confusion& c) {
  const std::size_t d = c.tp + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const Confusion& c) {
  const std::size_t d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f_score(const Confusion& c) {
  const double p = precision(c);
  const double r = recall(c);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace pcfed

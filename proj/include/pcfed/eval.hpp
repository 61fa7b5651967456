#pragma once

#include <cstddef>
#include <vector>

#include "pcfed/data.hpp"

namespace pcfed {

/// Positive class is Healthy (classifier output +1).
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

Confusion confusion(const std::vector<int>& predictions, const std::vector<Label>& truths);

// A zero denominator makes the affected quantity 0.
double precision(const Confusion& c);
double recall(const Confusion& c);
double f_score(const Confusion& c);

}  // namespace pcfed

#pragma once

#include <vector>

#include "calderon/errors.hpp"

namespace calderon {

/// Fiber data for E tensored with the m trace slots. `weights` are the
/// grading degrees of the slots, default 0,1,...,m-1.
struct GradedBundle {
  int rank = 1;
  int m = 1;
  std::vector<int> weights;

  GradedBundle() : weights{0} {}
  GradedBundle(int rank_, int m_) : rank(rank_), m(m_) {
    for (int j = 0; j < m; ++j) weights.push_back(j);
    validate();
  }
  GradedBundle(int rank_, int m_, std::vector<int> weights_)
      : rank(rank_), m(m_), weights(std::move(weights_)) {
    validate();
  }

  int jet_dim() const { return rank * m; }

  void validate() const {
    if (rank < 1) throw InputError("GradedBundle", "rank must be >= 1");
    if (m < 1) throw InputError("GradedBundle", "m must be >= 1");
    if (static_cast<int>(weights.size()) != m)
      throw InputError("GradedBundle", "weights must have m entries");
    for (std::size_t j = 1; j < weights.size(); ++j)
      if (weights[j] <= weights[j - 1])
        throw InputError("GradedBundle", "weights must be strictly increasing");
  }
};

}  // namespace calderon

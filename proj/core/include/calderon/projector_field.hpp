#pragma once

#include <vector>

#include "calderon/geometry.hpp"
#include "calderon/types.hpp"

namespace calderon {

/// Per-grid-point square matrices expected to be idempotent. Rank must be
/// constant on each connected component of the grid.
struct ProjectorField {
  std::vector<CMatrix> values;
  double tolerance = kProjectorTol;

  std::size_t size() const { return values.size(); }

  double max_idempotence_defect() const;
  std::vector<int> ranks() const;  // round(Re tr P) per point

  /// Throws NumericalError if idempotence or per-component rank constancy
  /// fails against the grid.
  void validate(const CosphereGrid& grid) const;
};

/// Constant projector over a whole grid.
ProjectorField constant_projector(const CosphereGrid& grid, const CMatrix& p,
                                  double tolerance = kProjectorTol);

}  // namespace calderon

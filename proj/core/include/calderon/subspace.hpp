#pragma once

#include <vector>

#include "calderon/types.hpp"

namespace calderon {

/// A subspace of a Fourier-truncated graded Sobolev space. Coordinates are
/// ordered mode-major: index = (n + trunc) * slots + slot. `weights` carries
/// the per-coordinate Sobolev factors (1 + n^2)^{s_j/2}; `basis` columns are
/// stored in weighted coordinates.
struct TruncatedSubspace {
  int trunc = 0;
  int slots = 1;
  RVector weights;
  CMatrix basis;

  double min_singular_value = 0.0;
  double gram_condition = 0.0;

  int ambient_dim() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(basis.cols()); }

  /// Orthonormalizes the stored basis (in the weighted metric) and records
  /// conditioning diagnostics. Throws on rank deficiency.
  void finalize();
};

TruncatedSubspace make_subspace(int trunc, int slots, RVector weights, CMatrix raw_basis);

/// Orthonormal basis columns for span of the columns of `m` (rank by the
/// 1e-8 * sigma_max SVD threshold).
CMatrix orthonormal_range(const CMatrix& m, double rel_threshold = 1e-8);

/// Intersection of two subspaces given by orthonormal bases.
CMatrix subspace_intersection(const CMatrix& q1, const CMatrix& q2, double tol = 1e-8);

/// Largest-principal-angle gap between two subspaces (orthonormalized
/// internally): || P_A - P_B ||_2.
double subspace_gap(const CMatrix& a, const CMatrix& b);

struct IndexReport {
  int dim_intersection = 0;
  int codim_sum = 0;
  int index = 0;
  std::vector<std::pair<int, int>> stabilization;  // (N, index)
  bool stabilized = true;
};

/// dim(B cap C) - codim(B + C) in the shared truncated space, ranks via the
/// 1e-8 relative SVD threshold.
IndexReport fredholm_pair_index(const TruncatedSubspace& B, const TruncatedSubspace& C);

}  // namespace calderon

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "calderon/collar.hpp"
#include "calderon/projector_field.hpp"
#include "calderon/types.hpp"

namespace calderon {

/// Spectral split of the boundary ODE at one cosphere point, in the trace
/// coordinates (v, D_t v, ..., D_t^{m-1} v).
struct CompanionSplit {
  CospherePoint point;
  std::vector<Complex> roots;   // xi_n roots of det sigma_cn, with multiplicity
  double real_axis_margin = 0;  // min |Im root|
  CMatrix basis_plus;           // columns span E_+ (decay as t -> +inf)
  CMatrix basis_minus;          // columns span E_-
  CMatrix p_plus;               // projection onto E_+ along E_-

  int dim_plus() const { return static_cast<int>(basis_plus.cols()); }
  int dim_minus() const { return static_cast<int>(basis_minus.cols()); }
};

struct Contour {
  Complex center;
  double radius = 1.0;
  int n_points = 256;
};

/// Riesz projection (2*pi*i)^{-1} * contour integral of (lambda - M)^{-1},
/// trapezoid rule with node doubling until two successive results agree to
/// 1e-10. Throws if an eigenvalue of M sits within `margin` of the contour.
CMatrix riesz_projection(const CMatrix& M, const Contour& contour,
                         double margin = 1e-8);

/// Companion-matrix route: builds the rank*m companion matrix of
/// A_0^{-1} sigma_cn and splits its spectrum at the real axis.
CompanionSplit boundary_ode_split(const CollarOperator& op, const CospherePoint& p);

/// Residue-calculus route for the same projection: contour integral of
/// xi_n^j a(xi_n)^{-1} sum_l a_l xi_n^{m-k-1-l} over the upper half plane
/// roots. Independent of boundary_ode_split; used as its oracle.
CMatrix p_plus_residue(const CollarOperator& op, const CospherePoint& p);

/// p_plus over a whole grid (companion route), validated as a projector
/// field.
ProjectorField p_plus_field(const CollarOperator& op, const CosphereGrid& grid,
                            double tolerance = kProjectorTol);

/// Basis change from D_t-jets to outward-normal jets diag((-i)^j) per slot;
/// conjugating p_plus by this matrix reproduces textbook Calderon symbol
/// displays (e.g. the Laplace-type (1/2)[[1,1/|xi|],[|xi|,1]]).
CMatrix outward_jet_conjugation(int m, int rank);

/// Full per-point symbol report for one operator on a grid.
struct SymbolPointReport {
  CompanionSplit split;
  CMatrix p_plus_residue_value;
  double cross_method_residual = 0.0;
};

std::vector<SymbolPointReport> symbol_sweep(const CollarOperator& op,
                                            const CosphereGrid& grid,
                                            bool with_residue = true);

// --- Fourier-tier recursion ---------------------------------------------

/// Inputs for the approximate-Calderon recursion on a rotation-invariant
/// model: exact per-mode Calderon matrices and the principal projector per
/// mode. Modes are indexed by the integer n.
struct RecursionInput {
  std::vector<int> modes;
  std::vector<CMatrix> principal;  // P_1(n), sigma_0 = p_plus
  std::vector<CMatrix> exact;      // P_C(n), exact per mode
  int m = 1;                       // operator order (recursion depth cap)
};

struct RecursionOutput {
  std::vector<int> modes;
  std::vector<CMatrix> projectors;       // idempotent within 1e-10
  double max_idempotence_defect = 0.0;
  double decay_slope = 0.0;              // log||P - P_C|| vs log|n|, top half
};

/// Starting from the principal projector, subtracts Richardson-estimated
/// order(-k) discrepancies against the exact per-mode Calderon projector for
/// k = 1..k_max-1, then restores exact idempotence with a per-mode Riesz
/// projection around 1.
RecursionOutput approximate_calderon_recursion(const RecursionInput& input, int k_max);

/// Least-squares slope of log(values) vs log|n| over the top half of the
/// mode range; returns a large negative sentinel (-99) if the values are
/// at floor (< 1e-14).
double decay_exponent(const std::vector<int>& modes, const std::vector<double>& values);

}  // namespace calderon

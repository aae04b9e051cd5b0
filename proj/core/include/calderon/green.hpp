#pragma once

#include "calderon/calderon_symbol.hpp"
#include "calderon/collar.hpp"
#include "calderon/projector_field.hpp"

namespace calderon {

/// Principal symbols of the Green's-formula matrices in D_t-jet coordinates:
/// atilde is block lower triangular with A_0 on the diagonal and entry (j,k)
/// of degree j-k; a = -i tau atilde is the boundary-pairing matrix.
struct GreenMatrices {
  int m = 1;
  int rank = 1;
  Eigen::MatrixXd tau;        // m x m antidiagonal permutation (slot level)
  SymbolMatrix sigma0_atilde; // block (j,k): sigma_{j-k}(A_{j-k}) for j >= k
  SymbolMatrix sigma0_a;      // -i tau (x) atilde

  CMatrix tau_full() const;   // tau tensor identity on the rank-r fiber
  CMatrix eval_atilde(const CospherePoint& p) const;
  CMatrix eval_a(const CospherePoint& p) const;
};

GreenMatrices green_matrices(const CollarOperator& op);

/// Exact inverse of sigma0_atilde at p by block forward substitution.
CMatrix invert_atilde(const GreenMatrices& g, const CospherePoint& p);

/// sigma_0 of the adjoint boundary-condition projector: pointwise
/// P_dagger = (a*)^{-1} (1 - P*) a*. Applying it twice (with the roles of D
/// and D^dagger swapped) restores P.
ProjectorField adjoint_condition_symbol(const GreenMatrices& g, const ProjectorField& P,
                                        const GreenMatrices& g_dagger,
                                        const CosphereGrid& grid);

struct AdjointDualityReport {
  bool pass = false;
  double pairing_residual = 0.0;   // max ||sigma0(a)* + sigma0(a_dagger)||
  double calderon_residual = 0.0;  // max ||p_+(D^dag) - [a (1-p_+(D)) a^-1]*||
  double tolerance = 1e-8;
};

/// Checks a* + a_dagger = 0 and the adjoint Calderon-symbol identity over
/// the grid, with p_+ computed independently for both operators.
AdjointDualityReport adjoint_duality_check(const CollarOperator& op,
                                           const CollarOperator& op_dagger,
                                           const CosphereGrid& grid,
                                           double tolerance = 1e-8);

}  // namespace calderon

#pragma once

#include <functional>
#include <vector>

#include "calderon/types.hpp"

namespace calderon {

/// Fixed-step RK4 for small complex systems, with step-doubling Richardson
/// verification. Throws NumericalError when the two runs disagree beyond
/// `tol` (relative to the solution size).
CVector rk4_richardson(const std::function<CVector(double, const CVector&)>& rhs,
                       CVector y0, double s0, double s1, int steps, double tol,
                       const char* op_name, double* error_out = nullptr);

/// Interior log-derivative v(s) = r u'(r)/u(r) (s = log r) of the radial
/// equation u'' + u'/r - (n^2/r^2 + q) u = 0 for the regular solution; the
/// return value at s = 0 is the Dirichlet-to-Neumann value of mode n. `q`
/// may be complex (spectral parameter probes).
Complex interior_log_dtn(int n, Complex q, double eps = 1e-3, int base_steps = 2000);

/// Exterior decaying-solution log-derivative at r = 1 for the same radial
/// equation with q > 0, integrated backwards from r = r_max where the
/// asymptotic seed is exact to roundoff after contraction.
double exterior_log_dtn(int n, double q, double r_max = 16.0, int base_steps = 4000);

// --- real symmetric tridiagonal helpers (radial finite differences) -------

struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size() - 1
};

/// Smallest eigenvalue by shifted inverse iteration with Thomas solves.
double tridiag_smallest_eigenvalue(const Tridiag& t, double tol = 1e-11);

/// Symmetrized cell-centered finite-difference discretization (measure r dr)
/// of L_n u = -(u'' + u'/r - n^2/r^2 u) + shift u on (0,1), with the natural
/// regularity condition at r = 0. robin_c: boundary condition at r = 1 is
/// u'(1) + robin_c u(1) = 0; pass +infinity for Dirichlet.
Tridiag radial_fd_operator(int n, double shift, int cells, double robin_c);

/// Applies the same discrete operator to a coefficient vector (for residual
/// and Rayleigh-quotient probes). `u` lives on cell centers.
RVector radial_fd_apply(const Tridiag& t, const RVector& u);

}  // namespace calderon

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calderon/geometry.hpp"
#include "calderon/graded.hpp"
#include "calderon/symbol.hpp"

namespace calderon {

/// Order-m elliptic operator described by its boundary-collar coefficients:
/// D = sum_l A_l D_xn^{m-l} near Sigma, with A_l of tangential order l. Only
/// the data at x_n = 0 (plus optional first normal jet and zeroth-order
/// parts) is stored; that is all the symbol computations consume.
struct CollarOperator {
  std::string name;
  Geometry geometry = Geometry::kCircle;
  GradedBundle bundle_in;
  GradedBundle bundle_out;
  int m = 1;
  std::vector<SymbolMatrix> coeffs;                 // principal symbol of A_l, l = 0..m
  std::vector<std::optional<SymbolMatrix>> dnormal; // dA_l/dx_n at 0, optional
  std::vector<std::optional<CMatrix>> zeroth;       // zeroth-order part of A_l, optional

  int rank_in() const { return bundle_in.rank; }
  int rank_out() const { return bundle_out.rank; }

  /// A_0 as a constant matrix (throws if the l = 0 coefficient is not
  /// covector-independent). Ellipticity makes it invertible.
  CMatrix a0() const;
  double a0_condition() const;

  /// Interior principal symbol a(x',0,xi',xi_n) = sum_l a_l(xi') xi_n^{m-l}.
  CMatrix interior_symbol(const CospherePoint& p, double xi_n) const;

  void validate() const;
};

/// Conormal symbol at p: polynomial in xi_n with matrix coefficients,
/// returned leading-first: coeff[j] multiplies xi_n^{m-j} (coeff[0] = A_0).
std::vector<CMatrix> conormal_symbol(const CollarOperator& op, const CospherePoint& p);

struct EllipticityScanReport {
  bool pass = false;
  double min_singular_value = 0.0;
  CospherePoint witness;
  double witness_xi_n = 0.0;
  double tolerance = 0.0;
};

/// Scans grid x m real conormal directions, normalized to |(xi',xi_n)| = 1,
/// for the smallest singular value of the interior principal symbol.
EllipticityScanReport interior_ellipticity(const CollarOperator& op,
                                           const CosphereGrid& grid, int xi_n_samples,
                                           double tolerance = 1e-7);

/// Principal-level formal adjoint: coefficients a_l^dagger = a_l^* entrywise
/// (the conormal symbol of D^dagger at real covectors).
CollarOperator formal_adjoint_collar(const CollarOperator& op);

// --- JSON operator files ----------------------------------------------------
// Schema: { "m", "rank_e", "rank_f", "geometry", "coeffs": [ { "l",
//   "entries": [ {"row","col","monomials":[{"powers":[...],"coef":[re,im]}]} ],
//   "dnormal": optional, "zeroth": optional } ] }

CollarOperator load_operator_json(const std::string& path);
CollarOperator parse_operator_json(const std::string& text);
std::string operator_to_json(const CollarOperator& op);
void save_operator_json(const CollarOperator& op, const std::string& path);

}  // namespace calderon

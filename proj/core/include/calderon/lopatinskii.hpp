#pragma once

#include <optional>
#include <string>

#include "calderon/calderon_symbol.hpp"
#include "calderon/collar.hpp"
#include "calderon/projector_field.hpp"

namespace calderon {

enum class SlMethod { kSymbol, kOde };

struct EllipticityReport {
  bool elliptic = false;
  double min_singular_value = 0.0;
  double tolerance = 0.0;
  CospherePoint witness;
  SlMethod method = SlMethod::kSymbol;
  std::optional<double> commutator_order_estimate;
};

/// Shapiro-Lopatinskii check at symbol level: smallest singular value of
/// p_+(D) - (1 - sigma(P)) over the grid. Elliptic iff the margin clears a
/// relative tolerance of `rel_tol` times the matrix scale.
EllipticityReport sl_check_symbol(const CollarOperator& op, const ProjectorField& P,
                                  const CosphereGrid& grid,
                                  double rel_tol = kEllipticityTol);

/// Half-line formulation: sigma(P) restricted to E_+(D) must be injective
/// onto ran sigma(P) at every point. Agrees with sl_check_symbol.
EllipticityReport sl_check_ode(const CollarOperator& op, const ProjectorField& P,
                               const CosphereGrid& grid,
                               double rel_tol = kEllipticityTol);

enum class RegularityClass { kRegular, kFredholm, kNeither };

struct RegularityReport {
  RegularityClass verdict = RegularityClass::kNeither;
  bool regular = false;
  bool fredholm = false;
  bool sl_elliptic = false;
  EllipticityReport symbol_report;
  EllipticityReport ode_report;
};

/// For projector-defined conditions in the graded calculus, regularity,
/// Fredholmness and SL-ellipticity coincide; the report states all three.
RegularityReport regularity_verdict(const CollarOperator& op, const ProjectorField& P,
                                    const CosphereGrid& grid,
                                    double rel_tol = kEllipticityTol);

struct BoundaryDecomposingReport {
  bool pass = false;
  double max_commutator_norm = 0.0;          // symbol tier: ||[p_+, sigma(P)]||
  std::optional<double> fourier_exponent;    // decay of (1-P_C) P P_C per mode
  double required_exponent = 0.0;
  std::string note;
};

/// Symbol tier: [p_+, sigma(P)] must vanish pointwise. Fourier tier (when
/// per-mode data is supplied): measured decay exponent of
/// ||(1 - P_C(n)) P(n) P_C(n)|| must be <= -m + 0.1.
struct FourierModeData {
  std::vector<int> modes;
  std::vector<CMatrix> calderon;  // exact P_C(n)
  std::vector<CMatrix> candidate; // P(n)
};

BoundaryDecomposingReport boundary_decomposing_check(
    const CollarOperator& op, const ProjectorField& P, const CosphereGrid& grid,
    const std::optional<FourierModeData>& fourier_model = std::nullopt,
    double commutator_tol = 1e-9);

}  // namespace calderon

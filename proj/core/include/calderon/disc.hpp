#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "calderon/subspace.hpp"
#include "calderon/types.hpp"

namespace calderon {

// Rotation-invariant model problems with circle boundary, resolved exactly
// per Fourier mode. Conventions (printed in every report):
//  - inward unit normal and product measure on the collar;
//  - first-order models order their components so slot 1 carries the
//    holomorphic (z^n, n >= 0) part of the kernel;
//  - traces of the second-order model are outward radial jets (u, d_r u);
//  - mode 0 of first-order models uses the spectral cut r = 1/2 for chi^+
//    and the Szego choice P_C(0) = 1 for the Calderon projector;
//  - the exterior complement is the Riemann-sphere complement.

enum class DiscModelKind {
  kCauchyRiemann,   // D_0: Dirac-type pair, m = 1, rank 2
  kAlphaTwisted,    // D_alpha: D_0 plus -i alpha(r) sigma d_theta, m = 1
  kLaplaceShifted,  // -Laplace + lambda_shift, m = 2, rank 1
  kHalfCylinder,    // d_t + A on [0, inf) x S^1, exact spectral tier
};

/// Radial twist profile alpha in C^inf((0,1]) with alpha(1) = 0. The named
/// shapes share alpha'(1) = scale except `flat`, which has alpha'(1) = 0.
struct AlphaProfile {
  std::string shape = "cubic";  // cubic, quartic, bump, flat
  double scale = 1.0;

  double operator()(double r) const;
  double boundary_slope() const;  // alpha'(1)
  static AlphaProfile parse(const std::string& text);  // "cubic:1.0"
};

struct FourierModeOperator {
  DiscModelKind kind = DiscModelKind::kCauchyRiemann;
  int m = 1;
  int rank = 2;
  AlphaProfile alpha;
  double lambda_shift = 1.0;
  std::function<CMatrix(int)> half_cylinder_a;

  static FourierModeOperator d0();
  static FourierModeOperator d_alpha(AlphaProfile profile);
  static FourierModeOperator laplace(double lambda_shift);
  static FourierModeOperator half_cylinder(std::function<CMatrix(int)> a);

  int trace_dim() const { return kind == DiscModelKind::kLaplaceShifted ? 2 : rank; }
};

std::vector<int> mode_range(int trunc);  // -N..N

/// Green's-formula pairing matrix per mode in the lab trace conventions
/// (constant across modes for the disc models).
CMatrix green_mode_matrix(const FourierModeOperator& model);

// --- adapted boundary operator and spectral projectors ---------------------

struct AdaptedBoundaryOp {
  std::vector<int> modes;
  std::vector<CMatrix> a;   // A(n)
  bool well_adapted = true;
  int zero_mode = 0;        // index of the flagged non-invertible mode
};

AdaptedBoundaryOp adapted_boundary_operator(const FourierModeOperator& model, int trunc);

/// chi^+(A(n) - cut) per mode via eigendecomposition; exact idempotents for
/// diagonalizable matrices. Throws listing offending modes when the cut is
/// within 1e-10 of an eigenvalue.
std::vector<CMatrix> chi_plus(const std::vector<CMatrix>& a_modes,
                              const std::vector<int>& modes, double cut,
                              double* margin_out = nullptr);

// --- Hardy space, Calderon projector, DtN ---------------------------------

struct HardyModes {
  std::vector<int> modes;
  std::vector<CMatrix> basis;  // columns span gamma ker(D_max) at each mode
  double max_integrator_error = 0.0;
};

HardyModes hardy_modes(const FourierModeOperator& model, int trunc);

struct CalderonModes {
  std::vector<int> modes;
  std::vector<CMatrix> projectors;
  double min_transversality = 1.0;
  std::string mode0_convention;
};

CalderonModes calderon_modes(const FourierModeOperator& model, int trunc);

struct DtnModes {
  std::vector<int> modes;
  std::vector<double> lambda_dn;
  std::vector<CMatrix> p_zeta;  // [[1,0],[Lambda,0]] per mode
};

DtnModes dtn_modes(const FourierModeOperator& model, int trunc);

/// Principal Calderon symbol per mode for the second-order model, in the
/// outward-jet coordinates: (1/2)[[1, 1/|n|],[|n|, 1]]; mode 0 falls back to
/// the exact projector.
std::vector<CMatrix> laplace_principal_modes(const FourierModeOperator& model, int trunc);

// --- Robin probe ------------------------------------------------------------

struct RobinProbeReport {
  double invertibility_margin = 0.0;
  std::vector<int> ladder;                  // truncations probed
  std::vector<double> low_pair_norms;       // H^{3/2} -> H^{1/2} multiplier norm
  std::vector<double> high_pair_norms;      // H^{7/2} -> H^{5/2}
  bool low_bounded = false;
  bool high_growing = false;
};

/// a given by finitely many Fourier coefficients (frequency, value). The
/// margin is sigma_min of the truncated Lambda_DN + a; the norm ladder
/// documents the multiplier behaviour across truncations.
RobinProbeReport robin_probe(const FourierModeOperator& model,
                             const std::vector<std::pair<int, Complex>>& fourier_coeffs,
                             int trunc);

/// The lacunary sum 2^{-2k}(z^{2^k} + z^{-2^k}), k <= k_max.
std::vector<std::pair<int, Complex>> lacunary_coefficients(int k_max);

// --- truncated subspaces, indices ------------------------------------------

RVector graded_weights(const FourierModeOperator& model, int trunc, double s);

/// Subspace spanned by the chosen (mode, slot) coordinate lines.
TruncatedSubspace coordinate_subspace(const FourierModeOperator& model, int trunc,
                                      double s,
                                      const std::function<bool(int, int)>& keep);

TruncatedSubspace hardy_subspace(const FourierModeOperator& model, int trunc, double s);
TruncatedSubspace calderon_complement_subspace(const FourierModeOperator& model,
                                               int trunc, double s);

/// Generalized APS condition for D_0/D_alpha: cut K on the holomorphic
/// factor (slot 1 keeps n <= K-1), complementary cut on the other factor
/// (slot 2 keeps n >= 1).
TruncatedSubspace aps_subspace(const FourierModeOperator& model, int trunc, int cut_k,
                               double s);

struct RealizedIndexReport {
  IndexReport pair;
  int dim_ker_min = 0;
  int dim_ker_min_dagger = 0;
  int index = 0;
  bool stabilized = true;
  std::vector<std::pair<int, int>> stabilization;
};

/// ind(B,C_D) + dim ker(D_min) - dim ker(D_min^dagger) with the APS-type cut,
/// stabilized over truncations {N/2, 3N/4, N}.
RealizedIndexReport realized_index(const FourierModeOperator& model, int aps_cut,
                                   int trunc);

// --- graphical decomposition -------------------------------------------------

struct GraphicalDecomposition {
  int dim_w_plus = 0;
  int dim_w_minus_star = 0;
  int dim_v_minus = 0;
  double x_minus_min_sv = 0.0;
  double reconstruction_gap = 0.0;
  double adjoint_gap = 0.0;
  CMatrix v_minus_basis;  // weighted coordinates
  CMatrix w_plus_basis;
  CMatrix g_matrix;       // action: g(v_minus_basis * c) = g_matrix * c (weighted)
};

/// Decomposes B relative to the per-mode projector field P_plus:
/// W+ = ran P+ cap B, V- = P- B, g = P+ o (P-|_{B cap W+^perp})^{-1}.
/// Checks the reconstruction B = {v + g v} + W+ and the adjoint formula
/// B^perp = {u - g^* u} + W-^* in the L^2 pairing.
GraphicalDecomposition graphical_decomposition(const FourierModeOperator& model,
                                               const TruncatedSubspace& B,
                                               const std::vector<CMatrix>& p_plus_modes,
                                               int trunc);

/// Robin condition {a xi_0 + xi_1 = 0} for the second-order model, constant a.
TruncatedSubspace robin_subspace(const FourierModeOperator& model, int trunc,
                                 double robin_a, double s);

// --- Poincare constants, kernels ---------------------------------------------

struct PoincareReport {
  double sigma_min = 0.0;
  int argmin_mode = 0;
  bool random_vectors_ok = false;
  std::vector<std::pair<int, double>> per_truncation;
};

/// Smallest singular value of the truncated Dirichlet realization (full
/// trace zero for first-order, u(1) = 0 for the second-order model), per-mode
/// radial finite differences, minimized over |n| <= N. Verifies the Poincare
/// inequality on 100 seeded random domain vectors. An optional Robin
/// parameter replaces the Dirichlet condition (used to probe kernel modes).
PoincareReport poincare_constant(const FourierModeOperator& model, int trunc,
                                 std::uint64_t seed,
                                 std::optional<double> robin_c = std::nullopt,
                                 int radial_cells = 1600);

/// Numerical dimension of ker(D_max - lambda) at each truncation in N_list.
std::vector<int> max_kernel_growth(const FourierModeOperator& model, Complex lambda,
                                   const std::vector<int>& n_list);

// --- the first-order case study ----------------------------------------------

struct CaseStudyReport {
  double alpha_slope = 0.0;        // alpha'(1)
  CMatrix limit_pos;               // lim n (chi+ - P_C)(n), n -> +inf (signed scale)
  CMatrix limit_neg;               // lim n (chi+ - P_C)(n), n -> -inf
  double max_equality_residual_d0 = 0.0;  // ||chi+ - P_C|| when alpha = 0
  std::vector<std::pair<int, double>> scaled_tail;  // (n, ||n (chi+-P_C)(n)||)
  double extrapolation_spread = 0.0;  // agreement of the last extrapolants
};

/// Richardson-extrapolated limits of the signed-scaled difference
/// n (chi^+(A(n)) - P_C(n)) using modes up to `trunc`.
CaseStudyReport d_alpha_case_study(const AlphaProfile& profile, int trunc);

/// Windowed operator-norm lower bounds of chi^+(A) - P_C as a map from the
/// weighted -1/2 Hardy side to the weighted +1/2 complement side, over mode
/// windows [N, 2N].
std::vector<double> compactness_failure_windows(const AlphaProfile& profile,
                                                const std::vector<int>& window_starts);

/// dim(chi^+(A) H^{-1/2} cap C_D) at truncation N (principal-angle count).
int finite_intersection_dimension(const AlphaProfile& profile, int trunc);

}  // namespace calderon

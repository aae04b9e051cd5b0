#include "calderon/disc.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "calderon/errors.hpp"
#include "calderon/parallel.hpp"
#include "calderon/radial.hpp"

namespace calderon {

namespace {
constexpr double kSeedRadius = 1e-3;  // Frobenius seed for radial integrations
}

// --- alpha profiles ----------------------------------------------------------

double AlphaProfile::operator()(double r) const {
  if (shape == "cubic") return scale * r * r * (r - 1.0);
  if (shape == "quartic") return scale * r * r * r * (r - 1.0);
  if (shape == "bump") return scale * r * r * (r - 1.0) * (2.0 - r);
  if (shape == "flat") return scale * r * r * (r - 1.0) * (r - 1.0);
  throw InputError("AlphaProfile", "unknown shape '" + shape + "'");
}

double AlphaProfile::boundary_slope() const {
  return shape == "flat" ? 0.0 : scale;
}

AlphaProfile AlphaProfile::parse(const std::string& text) {
  AlphaProfile p;
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    p.shape = text;
  } else {
    p.shape = text.substr(0, colon);
    p.scale = std::stod(text.substr(colon + 1));
  }
  (void)p(0.5);  // validates the shape name
  return p;
}

// --- model constructors -------------------------------------------------------

FourierModeOperator FourierModeOperator::d0() {
  FourierModeOperator m;
  m.kind = DiscModelKind::kCauchyRiemann;
  m.m = 1;
  m.rank = 2;
  m.alpha = AlphaProfile{"cubic", 0.0};
  return m;
}

FourierModeOperator FourierModeOperator::d_alpha(AlphaProfile profile) {
  FourierModeOperator m;
  m.kind = DiscModelKind::kAlphaTwisted;
  m.m = 1;
  m.rank = 2;
  m.alpha = std::move(profile);
  return m;
}

FourierModeOperator FourierModeOperator::laplace(double lambda_shift) {
  FourierModeOperator m;
  m.kind = DiscModelKind::kLaplaceShifted;
  m.m = 2;
  m.rank = 1;
  m.lambda_shift = lambda_shift;
  return m;
}

FourierModeOperator FourierModeOperator::half_cylinder(std::function<CMatrix(int)> a) {
  FourierModeOperator m;
  m.kind = DiscModelKind::kHalfCylinder;
  m.m = 1;
  m.half_cylinder_a = std::move(a);
  m.rank = static_cast<int>(m.half_cylinder_a(0).rows());
  return m;
}

std::vector<int> mode_range(int trunc) {
  std::vector<int> out;
  for (int n = -trunc; n <= trunc; ++n) out.push_back(n);
  return out;
}

CMatrix green_mode_matrix(const FourierModeOperator& model) {
  // Both disc families pair traces through the same antisymmetric matrix in
  // the lab conventions; the half-cylinder d_t + A pairs through the identity
  // coefficient of d_t.
  if (model.kind == DiscModelKind::kHalfCylinder)
    return CMatrix::Identity(model.rank, model.rank);
  CMatrix a(2, 2);
  a << 0, 1, -1, 0;
  return a;
}

// --- adapted boundary operator -------------------------------------------------

AdaptedBoundaryOp adapted_boundary_operator(const FourierModeOperator& model, int trunc) {
  AdaptedBoundaryOp out;
  out.modes = mode_range(trunc);
  out.a.reserve(out.modes.size());
  switch (model.kind) {
    case DiscModelKind::kCauchyRiemann:
    case DiscModelKind::kAlphaTwisted:
      for (int n : out.modes) {
        CMatrix a(2, 2);
        a << n, 0, 0, -n;
        out.a.push_back(a);
      }
      // the twist sits in R_0 and vanishes at the boundary: A is well adapted
      // for every profile
      out.well_adapted = true;
      break;
    case DiscModelKind::kHalfCylinder:
      for (int n : out.modes) out.a.push_back(model.half_cylinder_a(n));
      out.well_adapted = true;
      break;
    case DiscModelKind::kLaplaceShifted:
      throw InputError("adapted_boundary_operator", "model is not first order");
  }
  out.zero_mode = trunc;  // index of n = 0
  return out;
}

std::vector<CMatrix> chi_plus(const std::vector<CMatrix>& a_modes,
                              const std::vector<int>& modes, double cut,
                              double* margin_out) {
  if (a_modes.size() != modes.size())
    throw InputError("chi_plus", "mode table size mismatch");
  double margin = std::numeric_limits<double>::infinity();
  std::string offenders;
  std::vector<CMatrix> out(a_modes.size());
  for (std::size_t i = 0; i < a_modes.size(); ++i) {
    Eigen::ComplexEigenSolver<CMatrix> es(a_modes[i]);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      double dist = std::abs(es.eigenvalues()(k).real() - cut);
      margin = std::min(margin, dist);
      if (dist < 1e-10) offenders += " " + std::to_string(modes[i]);
    }
    CMatrix sel = CMatrix::Zero(a_modes[i].rows(), a_modes[i].cols());
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      if (es.eigenvalues()(k).real() > cut) sel(k, k) = 1.0;
    Eigen::PartialPivLU<CMatrix> vlu(es.eigenvectors());
    out[i] = es.eigenvectors() * sel * vlu.solve(identity_like(sel));
  }
  if (!offenders.empty())
    throw NumericalError("disc-lab", "chi_plus",
                         "cut within 1e-10 of an eigenvalue at modes:" + offenders);
  if (margin_out) *margin_out = margin;
  return out;
}

// --- per-mode radial solves ----------------------------------------------------

namespace {

// Normalized regular solution of the first-order mode system
//   f1' = (n/r) f1 + c(r) f2,   f2' = -(n/r) f2 - c(r) f1,
// with c(r) = n alpha(r) + lambda, integrated in s = log r with the leading
// power r^{|n|} removed. Returns trace directions at r = 1 (columns).
CMatrix first_order_interior(const FourierModeOperator& model, int n, Complex lambda,
                             double* err_out) {
  auto coupling = [&](double r) -> Complex {
    double a = (model.kind == DiscModelKind::kAlphaTwisted) ? model.alpha(r) : 0.0;
    return static_cast<double>(n) * a + lambda;
  };
  double s0 = std::log(kSeedRadius);
  int steps = 600 + 16 * std::abs(n);

  if (n == 0) {
    // no indicial growth: integrate both coordinate seeds directly
    auto rhs = [&](double s, const CVector& y) {
      double r = std::exp(s);
      Complex c = coupling(r);
      CVector out(2);
      out(0) = r * c * y(1);
      out(1) = -r * c * y(0);
      return out;
    };
    CMatrix cols(2, 2);
    double err = 0;
    for (int j = 0; j < 2; ++j) {
      CVector y0 = CVector::Zero(2);
      y0(j) = 1.0;
      double e = 0;
      CVector y = rk4_richardson(rhs, y0, s0, 0.0, steps, 1e-10, "hardy_modes", &e);
      err = std::max(err, e);
      cols.col(j) = y / y.norm();
    }
    if (err_out) *err_out = err;
    return cols;
  }

  int na = std::abs(n);
  std::function<CVector(double, const CVector&)> rhs;
  CVector y0(2);
  if (n > 0) {
    rhs = [&, na](double s, const CVector& y) {
      double r = std::exp(s);
      Complex c = coupling(r);
      CVector out(2);
      out(0) = r * c * y(1);
      out(1) = -2.0 * na * y(1) - r * c * y(0);
      return out;
    };
    y0 << 1.0, 0.0;
  } else {
    rhs = [&, na](double s, const CVector& y) {
      double r = std::exp(s);
      Complex c = coupling(r);
      CVector out(2);
      out(0) = -2.0 * na * y(0) + r * c * y(1);
      out(1) = -r * c * y(0);
      return out;
    };
    y0 << 0.0, 1.0;
  }
  double err = 0;
  CVector y = rk4_richardson(rhs, y0, s0, 0.0, steps, 1e-10, "hardy_modes", &err);
  if (err_out) *err_out = err;
  if (y.norm() < 1e-12)
    throw NumericalError("disc-lab", "hardy_modes",
                         "vanishing trace at mode " + std::to_string(n));
  return y / y.norm();
}

// Exterior (Riemann-sphere complement) decaying direction of the first-order
// models; the twist is supported in the disc, so this is the untwisted model.
CVector first_order_exterior(int n) {
  CVector v = CVector::Zero(2);
  if (n > 0)
    v(1) = 1.0;
  else
    v(0) = 1.0;
  return v;  // n = 0 is degenerate and handled by the caller
}

// Oblique projector onto span(h) along span(g) in C^2, plus transversality
// margin |det[h g]| / (|h||g|).
CMatrix oblique_projector(const CVector& h, const CVector& g, double* margin) {
  Complex det = h(0) * g(1) - h(1) * g(0);
  double m = std::abs(det) / (h.norm() * g.norm());
  if (margin) *margin = m;
  if (m < 1e-12)
    throw NumericalError("disc-lab", "calderon_modes",
                         "interior and exterior trace spans are not transversal");
  // annihilator functional of g (bilinear): phi = (g2, -g1)
  CVector phi(2);
  phi << g(1), -g(0);
  Complex denom = phi(0) * h(0) + phi(1) * h(1);  // = -det[g h]
  CMatrix p(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) p(r, c) = h(r) * phi(c) / denom;
  return p;
}

double laplace_interior_dtn(const FourierModeOperator& model, int n) {
  Complex v = interior_log_dtn(n, Complex(model.lambda_shift, 0.0));
  if (std::abs(v) > 1e8)
    throw NumericalError("disc-lab", "dtn_modes",
                         "Dirichlet non-solvability at mode " + std::to_string(n));
  return v.real();
}

double laplace_exterior_dtn(const FourierModeOperator& model, int n) {
  if (model.lambda_shift > 0.0) return exterior_log_dtn(n, model.lambda_shift);
  if (n == 0)
    throw NumericalError("disc-lab", "calderon_modes",
                         "transversality failure at mode 0 for the unshifted model");
  return -std::abs(static_cast<double>(n));
}

}  // namespace

HardyModes hardy_modes(const FourierModeOperator& model, int trunc) {
  HardyModes out;
  out.modes = mode_range(trunc);
  out.basis.resize(out.modes.size());
  std::vector<double> errs(out.modes.size(), 0.0);

  parallel_for(out.modes.size(), [&](std::size_t i) {
    int n = out.modes[i];
    switch (model.kind) {
      case DiscModelKind::kCauchyRiemann:
      case DiscModelKind::kAlphaTwisted:
        out.basis[i] = first_order_interior(model, n, 0.0, &errs[i]);
        break;
      case DiscModelKind::kLaplaceShifted: {
        double dtn = laplace_interior_dtn(model, n);
        CMatrix col(2, 1);
        col << 1.0, dtn;
        out.basis[i] = col / col.norm();
        break;
      }
      case DiscModelKind::kHalfCylinder: {
        Eigen::ComplexEigenSolver<CMatrix> es(model.half_cylinder_a(n));
        int count = 0;
        for (int k = 0; k < es.eigenvalues().size(); ++k)
          if (es.eigenvalues()(k).real() > 0) ++count;
        CMatrix cols(model.rank, count);
        int c = 0;
        for (int k = 0; k < es.eigenvalues().size(); ++k)
          if (es.eigenvalues()(k).real() > 0) cols.col(c++) = es.eigenvectors().col(k);
        out.basis[i] = cols;
        break;
      }
    }
  });
  for (double e : errs) out.max_integrator_error = std::max(out.max_integrator_error, e);
  return out;
}

CalderonModes calderon_modes(const FourierModeOperator& model, int trunc) {
  CalderonModes out;
  out.modes = mode_range(trunc);
  out.projectors.resize(out.modes.size());
  std::vector<double> margins(out.modes.size(), 1.0);

  parallel_for(out.modes.size(), [&](std::size_t i) {
    int n = out.modes[i];
    switch (model.kind) {
      case DiscModelKind::kCauchyRiemann:
      case DiscModelKind::kAlphaTwisted: {
        if (n == 0) {
          // finite-rank Szego convention: mode 0 keeps the full 2-dim Hardy
          // space of constants
          out.projectors[i] = CMatrix::Identity(2, 2);
          return;
        }
        CMatrix h = first_order_interior(model, n, 0.0, nullptr);
        CVector g = first_order_exterior(n);
        out.projectors[i] = oblique_projector(h.col(0), g, &margins[i]);
        break;
      }
      case DiscModelKind::kLaplaceShifted: {
        CVector h(2), g(2);
        h << 1.0, laplace_interior_dtn(model, n);
        g << 1.0, laplace_exterior_dtn(model, n);
        out.projectors[i] = oblique_projector(h, g, &margins[i]);
        break;
      }
      case DiscModelKind::kHalfCylinder: {
        std::vector<CMatrix> a{model.half_cylinder_a(n)};
        std::vector<int> mm{n};
        out.projectors[i] = chi_plus(a, mm, 0.0)[0];
        break;
      }
    }
  });
  for (double m : margins) out.min_transversality = std::min(out.min_transversality, m);
  out.mode0_convention = (model.kind == DiscModelKind::kCauchyRiemann ||
                          model.kind == DiscModelKind::kAlphaTwisted)
                             ? "szego_identity"
                             : "regular";
  return out;
}

DtnModes dtn_modes(const FourierModeOperator& model, int trunc) {
  if (model.kind != DiscModelKind::kLaplaceShifted)
    throw InputError("dtn_modes", "Dirichlet-to-Neumann tier needs the second-order model");
  DtnModes out;
  out.modes = mode_range(trunc);
  out.lambda_dn.resize(out.modes.size());
  out.p_zeta.resize(out.modes.size());
  parallel_for(out.modes.size(), [&](std::size_t i) {
    double dtn = laplace_interior_dtn(model, out.modes[i]);
    out.lambda_dn[i] = dtn;
    CMatrix p(2, 2);
    p << 1, 0, dtn, 0;
    out.p_zeta[i] = p;
  });
  return out;
}

std::vector<CMatrix> laplace_principal_modes(const FourierModeOperator& model, int trunc) {
  if (model.kind != DiscModelKind::kLaplaceShifted)
    throw InputError("laplace_principal_modes", "second-order model required");
  CalderonModes exact = calderon_modes(model, trunc);
  std::vector<CMatrix> out(exact.modes.size());
  for (std::size_t i = 0; i < exact.modes.size(); ++i) {
    int n = exact.modes[i];
    if (n == 0) {
      out[i] = exact.projectors[i];  // symbol undefined at xi' = 0
      continue;
    }
    double an = std::abs(static_cast<double>(n));
    CMatrix p(2, 2);
    p << 0.5, 0.5 / an, 0.5 * an, 0.5;
    out[i] = p;
  }
  return out;
}

// --- Robin probe ----------------------------------------------------------------

std::vector<std::pair<int, Complex>> lacunary_coefficients(int k_max) {
  std::vector<std::pair<int, Complex>> out;
  for (int k = 0; k <= k_max; ++k) {
    double c = std::pow(2.0, -2.0 * k);
    int freq = 1 << k;
    out.push_back({freq, Complex(c, 0)});
    out.push_back({-freq, Complex(c, 0)});
  }
  return out;
}

namespace {

CMatrix multiplication_matrix(const std::vector<std::pair<int, Complex>>& coeffs,
                              int trunc) {
  int dim = 2 * trunc + 1;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int row = 0; row < dim; ++row)
    for (int col = 0; col < dim; ++col) {
      int diff = (row - trunc) - (col - trunc);
      for (const auto& [freq, value] : coeffs)
        if (freq == diff) m(row, col) += value;
    }
  return m;
}

double weighted_operator_norm(const CMatrix& m, int trunc, double s_out, double s_in) {
  int dim = 2 * trunc + 1;
  CMatrix scaled = m;
  for (int row = 0; row < dim; ++row) {
    double n = row - trunc;
    double w = std::pow(1.0 + n * n, s_out / 2.0);
    scaled.row(row) *= w;
  }
  for (int col = 0; col < dim; ++col) {
    double n = col - trunc;
    double w = std::pow(1.0 + n * n, -s_in / 2.0);
    scaled.col(col) *= w;
  }
  Eigen::BDCSVD<CMatrix> svd(scaled);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

RobinProbeReport robin_probe(const FourierModeOperator& model,
                             const std::vector<std::pair<int, Complex>>& fourier_coeffs,
                             int trunc) {
  if (model.kind != DiscModelKind::kLaplaceShifted)
    throw InputError("robin_probe", "second-order model required");
  RobinProbeReport report;

  DtnModes dtn = dtn_modes(model, trunc);
  CMatrix t = multiplication_matrix(fourier_coeffs, trunc);
  for (int i = 0; i < 2 * trunc + 1; ++i) t(i, i) += dtn.lambda_dn[i];
  Eigen::BDCSVD<CMatrix> svd(t);
  report.invertibility_margin = svd.singularValues().minCoeff();

  for (int n = std::max(8, trunc / 8); n <= trunc; n *= 2) {
    report.ladder.push_back(n);
    CMatrix m = multiplication_matrix(fourier_coeffs, n);
    report.low_pair_norms.push_back(weighted_operator_norm(m, n, 0.5, 1.5));
    report.high_pair_norms.push_back(weighted_operator_norm(m, n, 2.5, 3.5));
  }
  if (!report.low_pair_norms.empty()) {
    double lo_min = *std::min_element(report.low_pair_norms.begin(),
                                      report.low_pair_norms.end());
    double lo_max = *std::max_element(report.low_pair_norms.begin(),
                                      report.low_pair_norms.end());
    report.low_bounded = lo_max <= 1.25 * lo_min + 1e-12;
    report.high_growing =
        std::is_sorted(report.high_pair_norms.begin(), report.high_pair_norms.end()) &&
        report.high_pair_norms.back() >= 1.4 * report.high_pair_norms.front();
  }
  return report;
}

// --- truncated subspaces ---------------------------------------------------------

RVector graded_weights(const FourierModeOperator& model, int trunc, double s) {
  int slots = model.trace_dim();
  RVector w(slots * (2 * trunc + 1));
  for (int n = -trunc; n <= trunc; ++n)
    for (int j = 0; j < slots; ++j) {
      double order = s;
      if (model.kind == DiscModelKind::kLaplaceShifted) order = s - j;
      w((n + trunc) * slots + j) = std::pow(1.0 + static_cast<double>(n) * n, order / 2.0);
    }
  return w;
}

TruncatedSubspace coordinate_subspace(const FourierModeOperator& model, int trunc,
                                      double s,
                                      const std::function<bool(int, int)>& keep) {
  int slots = model.trace_dim();
  int dim = slots * (2 * trunc + 1);
  std::vector<int> kept;
  for (int n = -trunc; n <= trunc; ++n)
    for (int j = 0; j < slots; ++j)
      if (keep(n, j)) kept.push_back((n + trunc) * slots + j);
  CMatrix basis = CMatrix::Zero(dim, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) basis(kept[c], c) = 1.0;
  return make_subspace(trunc, slots, graded_weights(model, trunc, s), basis);
}

namespace {

TruncatedSubspace subspace_from_mode_blocks(const FourierModeOperator& model, int trunc,
                                            double s, const std::vector<CMatrix>& blocks) {
  int slots = model.trace_dim();
  int dim = slots * (2 * trunc + 1);
  int total_cols = 0;
  for (const CMatrix& b : blocks) total_cols += static_cast<int>(b.cols());
  CMatrix basis = CMatrix::Zero(dim, total_cols);
  int c = 0;
  for (int i = 0; i < 2 * trunc + 1; ++i) {
    const CMatrix& b = blocks[i];
    basis.block(i * slots, c, slots, b.cols()) = b;
    c += static_cast<int>(b.cols());
  }
  return make_subspace(trunc, slots, graded_weights(model, trunc, s), basis);
}

}  // namespace

TruncatedSubspace hardy_subspace(const FourierModeOperator& model, int trunc, double s) {
  HardyModes h = hardy_modes(model, trunc);
  return subspace_from_mode_blocks(model, trunc, s, h.basis);
}

TruncatedSubspace calderon_complement_subspace(const FourierModeOperator& model,
                                               int trunc, double s) {
  CalderonModes pc = calderon_modes(model, trunc);
  std::vector<CMatrix> blocks(pc.projectors.size());
  for (std::size_t i = 0; i < pc.projectors.size(); ++i)
    blocks[i] = orthonormal_range(identity_like(pc.projectors[i]) - pc.projectors[i]);
  return subspace_from_mode_blocks(model, trunc, s, blocks);
}

TruncatedSubspace aps_subspace(const FourierModeOperator& model, int trunc, int cut_k,
                               double s) {
  if (model.kind != DiscModelKind::kCauchyRiemann &&
      model.kind != DiscModelKind::kAlphaTwisted)
    throw InputError("aps_subspace", "first-order disc model required");
  // cut K on the holomorphic factor, complementary cut on the other factor
  return coordinate_subspace(model, trunc, s, [cut_k](int n, int slot) {
    return slot == 0 ? (n <= cut_k - 1) : (n >= 1);
  });
}

TruncatedSubspace robin_subspace(const FourierModeOperator& model, int trunc,
                                 double robin_a, double s) {
  if (model.kind != DiscModelKind::kLaplaceShifted)
    throw InputError("robin_subspace", "second-order model required");
  std::vector<CMatrix> blocks(2 * trunc + 1);
  for (int i = 0; i < 2 * trunc + 1; ++i) {
    CMatrix col(2, 1);
    col << 1.0, -robin_a;  // a xi_0 + xi_1 = 0
    blocks[i] = col / col.norm();
  }
  return subspace_from_mode_blocks(model, trunc, s, blocks);
}

// --- realized index ---------------------------------------------------------------

namespace {

int dim_ker_min_truncated(const FourierModeOperator& model, int trunc) {
  // kernel elements of the minimal (full Dirichlet-jet) realization would
  // show as regular solutions with vanishing full trace
  int count = 0;
  for (int n = -trunc; n <= trunc; ++n) {
    switch (model.kind) {
      case DiscModelKind::kCauchyRiemann:
      case DiscModelKind::kAlphaTwisted: {
        CMatrix h = first_order_interior(model, n, 0.0, nullptr);
        for (int c = 0; c < h.cols(); ++c)
          if (h.col(c).norm() < 1e-8) ++count;
        break;
      }
      case DiscModelKind::kLaplaceShifted: {
        // the jet (u(1), u'(1)) of a nonzero regular solution never vanishes
        // (second-order ODE uniqueness); verified via the finite DtN value
        laplace_interior_dtn(model, n);
        break;
      }
      case DiscModelKind::kHalfCylinder:
        break;  // exact spectral tier: traces of e^{-tA} never vanish
    }
  }
  return count;
}

}  // namespace

RealizedIndexReport realized_index(const FourierModeOperator& model, int aps_cut,
                                   int trunc) {
  RealizedIndexReport report;
  double s = model.m - 0.5;
  std::vector<int> ladder{trunc / 2, (3 * trunc) / 4, trunc};
  for (int nn : ladder) {
    TruncatedSubspace b = aps_subspace(model, nn, aps_cut, s);
    TruncatedSubspace c = hardy_subspace(model, nn, s);
    IndexReport pair = fredholm_pair_index(b, c);
    int ker = dim_ker_min_truncated(model, nn);
    int coker = ker;  // the formal adjoint is the swapped model; same count
    int idx = pair.index + ker - coker;
    report.stabilization.push_back({nn, idx});
    if (nn == trunc) {
      report.pair = pair;
      report.dim_ker_min = ker;
      report.dim_ker_min_dagger = coker;
      report.index = idx;
    }
  }
  for (auto& [nn, idx] : report.stabilization)
    if (idx != report.index) report.stabilized = false;
  report.pair.stabilization = report.stabilization;
  report.pair.stabilized = report.stabilized;
  return report;
}

// --- graphical decomposition -------------------------------------------------------

namespace {

CMatrix block_diagonal(const std::vector<CMatrix>& blocks) {
  int dim = 0;
  for (const CMatrix& b : blocks) dim += static_cast<int>(b.rows());
  CMatrix out = CMatrix::Zero(dim, dim);
  int at = 0;
  for (const CMatrix& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += static_cast<int>(b.rows());
  }
  return out;
}

// null space of m (columns), relative SVD threshold
CMatrix null_space(const CMatrix& m, double rel = 1e-8) {
  if (m.rows() == 0)
    return CMatrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel * std::max(top, 1e-300)) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

CMatrix orth_complement(const CMatrix& q, int ambient) {
  if (q.cols() == 0) return CMatrix::Identity(ambient, ambient);
  return null_space(q.adjoint());
}

}  // namespace

GraphicalDecomposition graphical_decomposition(const FourierModeOperator& model,
                                               const TruncatedSubspace& B,
                                               const std::vector<CMatrix>& p_plus_modes,
                                               int trunc) {
  const int slots = model.trace_dim();
  const int dim = slots * (2 * trunc + 1);
  if (B.ambient_dim() != dim)
    throw InputError("graphical_decomposition", "subspace truncation mismatch");
  if (static_cast<int>(p_plus_modes.size()) != 2 * trunc + 1)
    throw InputError("graphical_decomposition", "projector mode table mismatch");

  const RVector& w = B.weights;
  CMatrix p_raw = block_diagonal(p_plus_modes);
  CMatrix p_weighted = w.cast<Complex>().asDiagonal() * p_raw *
                       w.cwiseInverse().cast<Complex>().asDiagonal();
  CMatrix one = CMatrix::Identity(dim, dim);

  GraphicalDecomposition out;

  CMatrix ran_p = orthonormal_range(p_weighted);
  out.w_plus_basis = subspace_intersection(ran_p, B.basis);
  out.dim_w_plus = static_cast<int>(out.w_plus_basis.cols());

  // B1 = B cap W_+^perp (weighted metric)
  CMatrix b1 = B.basis;
  if (out.dim_w_plus > 0) {
    CMatrix overlap = out.w_plus_basis.adjoint() * B.basis;
    b1 = B.basis * null_space(overlap);
  }

  CMatrix x_minus = (one - p_weighted) * b1;
  CMatrix y_plus = p_weighted * b1;
  if (x_minus.cols() > 0) {
    Eigen::BDCSVD<CMatrix> svd(x_minus);
    out.x_minus_min_sv = svd.singularValues().minCoeff();
    if (out.x_minus_min_sv < 1e-10)
      throw NumericalError("disc-lab", "graphical_decomposition",
                           "X_- is numerically non-invertible (smallest singular "
                           "value " +
                               std::to_string(out.x_minus_min_sv) + ")");
  }

  out.v_minus_basis = orthonormal_range((one - p_weighted) * B.basis);
  out.dim_v_minus = static_cast<int>(out.v_minus_basis.cols());

  // g on V_-: solve X_- c = v, then g v = P_+ X_-^{-1} v
  CMatrix g_on_vminus(dim, out.dim_v_minus);
  if (out.dim_v_minus > 0) {
    CMatrix coords = x_minus.colPivHouseholderQr().solve(out.v_minus_basis);
    g_on_vminus = y_plus * coords;
  }
  out.g_matrix = g_on_vminus;

  // reconstruction: B should equal {v + g v} + W_+
  CMatrix graph(dim, out.dim_v_minus + out.dim_w_plus);
  if (out.dim_v_minus > 0)
    graph.leftCols(out.dim_v_minus) = out.v_minus_basis + g_on_vminus;
  if (out.dim_w_plus > 0) graph.rightCols(out.dim_w_plus) = out.w_plus_basis;
  out.reconstruction_gap = subspace_gap(graph, B.basis);

  // adjoint side, in raw L^2-pairing coordinates
  CMatrix w_inv = w.cwiseInverse().cast<Complex>().asDiagonal();
  CMatrix b_raw = orthonormal_range(w_inv * B.basis);
  CMatrix b_perp = orth_complement(b_raw, dim);

  CMatrix p_star = p_raw.adjoint();
  CMatrix w_plus_raw = orthonormal_range(w_inv * out.w_plus_basis);
  CMatrix v_plus_star =
      subspace_intersection(orthonormal_range(p_star), orth_complement(w_plus_raw, dim));
  CMatrix w_minus_star =
      subspace_intersection(orthonormal_range(one - p_star), b_perp);
  out.dim_w_minus_star = static_cast<int>(w_minus_star.cols());
  CMatrix v_minus_star = subspace_intersection(
      orthonormal_range(one - p_star), orth_complement(w_minus_star, dim));

  // pairing adjoint of g: <g* u, v> = <u, g v> for u in V_+^*, v in V_-
  CMatrix vm_raw = w_inv * out.v_minus_basis;         // V_- in raw coords
  CMatrix g_raw = w_inv * g_on_vminus;                // g(vm_raw c) = g_raw c
  CMatrix adjoint_side(dim, v_plus_star.cols() + w_minus_star.cols());
  if (v_plus_star.cols() > 0) {
    CMatrix gram = (v_minus_star.adjoint() * vm_raw).adjoint();  // (Vms* Vm)^*
    CMatrix rhs = g_raw.adjoint() * v_plus_star;
    CMatrix coeffs = gram.colPivHouseholderQr().solve(rhs);
    // columns: u_i - g^* u_i
    adjoint_side.leftCols(v_plus_star.cols()) = v_plus_star - v_minus_star * coeffs;
  }
  if (w_minus_star.cols() > 0)
    adjoint_side.rightCols(w_minus_star.cols()) = w_minus_star;
  out.adjoint_gap = subspace_gap(adjoint_side, b_perp);
  return out;
}

// --- Poincare ----------------------------------------------------------------------

PoincareReport poincare_constant(const FourierModeOperator& model, int trunc,
                                 std::uint64_t seed, std::optional<double> robin_c,
                                 int radial_cells) {
  if (model.kind == DiscModelKind::kHalfCylinder)
    throw InputError("poincare_constant", "compact-model realization required");
  PoincareReport report;
  double bc = robin_c ? *robin_c : std::numeric_limits<double>::infinity();
  double shift = model.kind == DiscModelKind::kLaplaceShifted ? model.lambda_shift : 0.0;

  auto sigma_min_upto = [&](int nmax, int cells) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    std::vector<double> per_mode(nmax + 1);
    parallel_for(nmax + 1, [&](std::size_t n) {
      Tridiag t = radial_fd_operator(static_cast<int>(n), shift, cells, bc);
      per_mode[n] = tridiag_smallest_eigenvalue(t);
    });
    for (int n = 0; n <= nmax; ++n)
      if (per_mode[n] < best) {
        best = per_mode[n];
        arg = n;
      }
    // second-order model: sigma = smallest eigenvalue of the self-adjoint
    // realization; first-order: ||D u||^2 = <(-Laplace) u, u> componentwise,
    // so sigma is the square root of the Dirichlet bottom eigenvalue.
    double sigma = model.kind == DiscModelKind::kLaplaceShifted ? best : std::sqrt(best);
    return std::make_pair(sigma, arg);
  };

  for (int nn : {trunc / 4, trunc / 2, trunc}) {
    auto [sg, arg] = sigma_min_upto(nn, radial_cells);
    report.per_truncation.push_back({nn, sg});
    if (nn == trunc) {
      report.sigma_min = sg;
      report.argmin_mode = arg;
    }
  }

  if (report.sigma_min < 1e-6)
    throw NumericalError("disc-lab", "poincare_constant",
                         "realization has a numerical kernel mode (sigma_min " +
                             std::to_string(report.sigma_min) + ")");

  // Poincare inequality on 100 random domain vectors of the worst mode
  Tridiag worst = radial_fd_operator(report.argmin_mode, shift, radial_cells, bc);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double quad_floor = model.kind == DiscModelKind::kLaplaceShifted
                          ? report.sigma_min
                          : report.sigma_min * report.sigma_min;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    RVector u(static_cast<int>(worst.diag.size()));
    for (int i = 0; i < u.size(); ++i) u(i) = gauss(rng);
    double quad = u.dot(radial_fd_apply(worst, u));
    if (quad < quad_floor * u.squaredNorm() * (1.0 - 1e-8)) ok = false;
  }
  report.random_vectors_ok = ok;
  return report;
}

// --- kernel growth ------------------------------------------------------------------

std::vector<int> max_kernel_growth(const FourierModeOperator& model, Complex lambda,
                                   const std::vector<int>& n_list) {
  std::vector<int> dims;
  for (int nn : n_list) {
    int count = 0;
    for (int n = -nn; n <= nn; ++n) {
      switch (model.kind) {
        case DiscModelKind::kCauchyRiemann:
        case DiscModelKind::kAlphaTwisted: {
          CMatrix h = first_order_interior(model, n, lambda, nullptr);
          count += static_cast<int>(h.cols());
          break;
        }
        case DiscModelKind::kLaplaceShifted: {
          // one regular radial solution per mode at any spectral parameter
          Complex q = Complex(model.lambda_shift, 0) - lambda;
          interior_log_dtn(n, q);  // residual-verified integration
          count += 1;
          break;
        }
        case DiscModelKind::kHalfCylinder:
          throw InputError("max_kernel_growth", "compact-model tier required");
      }
    }
    dims.push_back(count);
  }
  return dims;
}

// --- case study ----------------------------------------------------------------------

namespace {

CMatrix chi_plus_exact_first_order(int n) {
  CMatrix p = CMatrix::Zero(2, 2);
  if (n > 0) p(0, 0) = 1.0;
  if (n < 0) p(1, 1) = 1.0;
  return p;
}

CMatrix scaled_difference(const FourierModeOperator& model, int n) {
  CMatrix h = first_order_interior(model, n, 0.0, nullptr);
  CMatrix pc = oblique_projector(h.col(0), first_order_exterior(n), nullptr);
  return static_cast<double>(n) * (chi_plus_exact_first_order(n) - pc);
}

}  // namespace

CaseStudyReport d_alpha_case_study(const AlphaProfile& profile, int trunc) {
  FourierModeOperator model = FourierModeOperator::d_alpha(profile);
  CaseStudyReport report;
  report.alpha_slope = profile.boundary_slope();

  auto limit = [&](int sign) {
    CMatrix s1 = scaled_difference(model, sign * trunc);
    CMatrix s2 = scaled_difference(model, sign * (trunc / 2));
    CMatrix s3 = scaled_difference(model, sign * (trunc / 4));
    CMatrix a1 = 2.0 * s1 - s2;
    CMatrix a2 = 2.0 * s2 - s3;
    CMatrix l = (4.0 * a1 - a2) / 3.0;
    report.extrapolation_spread = std::max(report.extrapolation_spread, (a1 - a2).norm());
    return l;
  };
  report.limit_pos = limit(+1);
  report.limit_neg = limit(-1);

  for (int n = 8; n <= trunc; n *= 2)
    report.scaled_tail.push_back({n, scaled_difference(model, n).norm()});
  return report;
}

std::vector<double> compactness_failure_windows(const AlphaProfile& profile,
                                                const std::vector<int>& window_starts) {
  FourierModeOperator model = FourierModeOperator::d_alpha(profile);
  std::vector<double> bounds;
  for (int start : window_starts) {
    double best = 0.0;
    for (int n = start; n <= 2 * start; ++n) {
      for (int sign : {+1, -1}) {
        int mode = sign * n;
        CMatrix chi = chi_plus_exact_first_order(mode);
        CMatrix h = first_order_interior(model, mode, 0.0, nullptr);
        CMatrix pc = oblique_projector(h.col(0), first_order_exterior(mode), nullptr);
        CMatrix block = (identity_like(chi) - chi) * (chi - pc) * chi;
        // weighted -1/2 Hardy side to weighted +1/2 complement side
        double weight = std::sqrt(1.0 + static_cast<double>(mode) * mode);
        Eigen::JacobiSVD<CMatrix> svd(block);
        best = std::max(best, weight * svd.singularValues().maxCoeff());
      }
    }
    bounds.push_back(best);
  }
  return bounds;
}

int finite_intersection_dimension(const AlphaProfile& profile, int trunc) {
  FourierModeOperator model = FourierModeOperator::d_alpha(profile);
  int count = 0;
  for (int n = -trunc; n <= trunc; ++n) {
    if (n == 0) continue;  // chi^+ kills mode 0 under the r = 1/2 cut
    CMatrix h = first_order_interior(model, n, 0.0, nullptr);
    CVector chi_dir = CVector::Zero(2);
    chi_dir(n > 0 ? 0 : 1) = 1.0;
    double angle_cos = std::abs(chi_dir.dot(h.col(0)));
    if (1.0 - angle_cos < 1e-7) ++count;
  }
  return count;
}

}  // namespace calderon

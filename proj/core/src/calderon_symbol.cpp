#include "calderon/calderon_symbol.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "calderon/errors.hpp"
#include "calderon/parallel.hpp"

namespace calderon {

namespace {

constexpr double kRealAxisMargin = 1e-8;

std::vector<Complex> matrix_eigenvalues(const CMatrix& M) {
  Eigen::ComplexSchur<CMatrix> schur(M, /*computeU=*/false);
  std::vector<Complex> out;
  out.reserve(M.rows());
  for (int i = 0; i < M.rows(); ++i) out.push_back(schur.matrixT()(i, i));
  return out;
}

// Circle enclosing exactly `inside`, excluding `outside`. Radius follows the
// 1.5*spread + half-gap-to-real-axis rule, clamped into the separating
// annulus when that rule would leak.
Contour separating_contour(const std::vector<Complex>& inside,
                           const std::vector<Complex>& outside,
                           const char* op_name) {
  Complex center = 0.0;
  for (Complex z : inside) center += z;
  center /= static_cast<double>(inside.size());

  double spread = 0.0;
  double min_im = std::numeric_limits<double>::infinity();
  for (Complex z : inside) {
    spread = std::max(spread, std::abs(z - center));
    min_im = std::min(min_im, std::abs(z.imag()));
  }
  double exclusion = std::numeric_limits<double>::infinity();
  for (Complex z : outside) exclusion = std::min(exclusion, std::abs(z - center));

  double radius = 1.5 * spread + 0.5 * min_im;
  if (radius <= spread || radius >= exclusion) {
    if (spread + kRealAxisMargin >= exclusion)
      throw NumericalError("calderon-symbol", op_name,
                           "contour cannot separate upper/lower roots (margin < 1e-8)");
    radius = 0.5 * (spread + exclusion);
  }
  return Contour{center, radius, 256};
}

CMatrix trapezoid_resolvent_integral(
    const std::function<CMatrix(Complex)>& integrand_times_dlambda_over_2pii,
    const Contour& contour) {
  // Doubles node count until two successive trapezoid sums agree to 1e-10.
  CMatrix prev;
  int n = contour.n_points;
  for (int iter = 0; iter < 6; ++iter, n *= 2) {
    CMatrix acc;
    for (int k = 0; k < n; ++k) {
      double theta = 2.0 * M_PI * k / n;
      Complex pos = contour.center + contour.radius * Complex(std::cos(theta), std::sin(theta));
      // dlambda = i r e^{i theta} dtheta; /(2 pi i) leaves r e^{i theta}/n
      Complex weight = contour.radius * Complex(std::cos(theta), std::sin(theta)) /
                       static_cast<double>(n);
      CMatrix term = integrand_times_dlambda_over_2pii(pos) * weight;
      if (k == 0)
        acc = term;
      else
        acc += term;
    }
    if (iter > 0 && (acc - prev).norm() <= 1e-10 * std::max(1.0, acc.norm())) return acc;
    prev = acc;
  }
  return prev;
}

}  // namespace

CMatrix riesz_projection(const CMatrix& M, const Contour& contour, double margin) {
  for (Complex ev : matrix_eigenvalues(M)) {
    double dist = std::abs(std::abs(ev - contour.center) - contour.radius);
    if (dist < margin)
      throw NumericalError("calderon-symbol", "riesz_projection",
                           "eigenvalue within margin of the contour at lambda = (" +
                               std::to_string(ev.real()) + ", " +
                               std::to_string(ev.imag()) + ")");
  }
  Eigen::PartialPivLU<CMatrix> lu;
  CMatrix id = CMatrix::Identity(M.rows(), M.cols());
  return trapezoid_resolvent_integral(
      [&](Complex lambda) {
        lu.compute(lambda * id - M);
        return lu.solve(id).eval();
      },
      contour);
}

CompanionSplit boundary_ode_split(const CollarOperator& op, const CospherePoint& p) {
  const int rank = op.rank_in();
  if (op.rank_out() != rank)
    throw InputError("boundary_ode_split", "square fibers required (rank_e == rank_f)");
  const int m = op.m;
  const int n = rank * m;

  std::vector<CMatrix> a = conormal_symbol(op, p);
  Eigen::PartialPivLU<CMatrix> a0lu(a[0]);

  // Companion matrix of the monic polynomial A_0^{-1} sigma_cn acting on the
  // D_t-jet (v, D_t v, ..., D_t^{m-1} v).
  CMatrix companion = CMatrix::Zero(n, n);
  for (int j = 0; j + 1 < m; ++j)
    companion.block(j * rank, (j + 1) * rank, rank, rank) =
        CMatrix::Identity(rank, rank);
  for (int k = 0; k < m; ++k)
    companion.block((m - 1) * rank, k * rank, rank, rank) = -a0lu.solve(a[m - k]);

  CompanionSplit split;
  split.point = p;
  split.roots = matrix_eigenvalues(companion);

  split.real_axis_margin = std::numeric_limits<double>::infinity();
  for (Complex z : split.roots)
    split.real_axis_margin = std::min(split.real_axis_margin, std::abs(z.imag()));
  if (split.real_axis_margin < kRealAxisMargin)
    throw NumericalError("calderon-symbol", "boundary_ode_split",
                         "real characteristic root: ellipticity violated at the "
                         "boundary (margin " +
                             std::to_string(split.real_axis_margin) + ")");

  std::vector<Complex> upper, lower;
  for (Complex z : split.roots) (z.imag() > 0 ? upper : lower).push_back(z);

  if (upper.empty()) {
    split.p_plus = CMatrix::Zero(n, n);
  } else if (lower.empty()) {
    split.p_plus = CMatrix::Identity(n, n);
  } else {
    Contour contour = separating_contour(upper, lower, "boundary_ode_split");
    split.p_plus = riesz_projection(companion, contour);
  }

  int dim_plus = static_cast<int>(upper.size());
  auto range_basis = [n](const CMatrix& proj, int dim) {
    if (dim == 0) return CMatrix(n, 0);
    Eigen::JacobiSVD<CMatrix> svd(proj, Eigen::ComputeThinU);
    return CMatrix(svd.matrixU().leftCols(dim));
  };
  split.basis_plus = range_basis(split.p_plus, dim_plus);
  split.basis_minus =
      range_basis(CMatrix::Identity(n, n) - split.p_plus, n - dim_plus);
  return split;
}

CMatrix p_plus_residue(const CollarOperator& op, const CospherePoint& p) {
  const int rank = op.rank_in();
  const int m = op.m;
  const int n = rank * m;

  std::vector<CMatrix> a = conormal_symbol(op, p);

  // Reuse the companion eigenvalues only to place the contour.
  CompanionSplit probe = boundary_ode_split(op, p);
  std::vector<Complex> upper, lower;
  for (Complex z : probe.roots) (z.imag() > 0 ? upper : lower).push_back(z);
  if (upper.empty()) return CMatrix::Zero(n, n);

  Contour contour = separating_contour(upper, lower, "p_plus_residue");

  Eigen::PartialPivLU<CMatrix> lu;
  auto integrand = [&](Complex xi_n) {
    // a(xi_n) = sum_l a_l xi_n^{m-l}
    CMatrix az = CMatrix::Zero(rank, rank);
    Complex pw = 1.0;
    for (int l = m; l >= 0; --l) {
      az += a[l] * pw;
      pw *= xi_n;
    }
    lu.compute(az);
    CMatrix out(n, n);
    for (int k = 0; k < m; ++k) {
      // w_k(xi_n) = sum_{l=0}^{m-k-1} a_l xi_n^{m-k-1-l}
      CMatrix wk = CMatrix::Zero(rank, rank);
      Complex q = 1.0;
      for (int l = m - k - 1; l >= 0; --l) {
        wk += a[l] * q;
        q *= xi_n;
      }
      CMatrix solved = lu.solve(wk);
      Complex xj = 1.0;
      for (int j = 0; j < m; ++j) {
        out.block(j * rank, k * rank, rank, rank) = xj * solved;
        xj *= xi_n;
      }
    }
    return out;
  };
  return trapezoid_resolvent_integral(integrand, contour);
}

ProjectorField p_plus_field(const CollarOperator& op, const CosphereGrid& grid,
                            double tolerance) {
  ProjectorField field;
  field.tolerance = tolerance;
  field.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    field.values[i] = boundary_ode_split(op, grid.points[i]).p_plus;
  });
  field.validate(grid);
  return field;
}

CMatrix outward_jet_conjugation(int m, int rank) {
  int n = m * rank;
  CMatrix out = CMatrix::Zero(n, n);
  Complex factor = 1.0;
  for (int j = 0; j < m; ++j) {
    out.block(j * rank, j * rank, rank, rank) =
        factor * CMatrix::Identity(rank, rank);
    factor *= Complex(0, -1);
  }
  return out;
}

std::vector<SymbolPointReport> symbol_sweep(const CollarOperator& op,
                                            const CosphereGrid& grid,
                                            bool with_residue) {
  std::vector<SymbolPointReport> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    out[i].split = boundary_ode_split(op, grid.points[i]);
    if (with_residue) {
      out[i].p_plus_residue_value = p_plus_residue(op, grid.points[i]);
      out[i].cross_method_residual =
          (out[i].p_plus_residue_value - out[i].split.p_plus).norm();
    }
  });
  return out;
}

double decay_exponent(const std::vector<int>& modes, const std::vector<double>& values) {
  // top half of the |n| range, log-log least squares
  int max_abs = 0;
  for (int n : modes) max_abs = std::max(max_abs, std::abs(n));
  double lo = max_abs / 2.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int n = std::abs(modes[i]);
    if (n < lo || n == 0) continue;
    if (values[i] < 1e-14) continue;
    double x = std::log(static_cast<double>(n));
    double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return -99.0;  // at floor: effectively infinite decay order
  double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return -99.0;
  return (count * sxy - sx * sy) / denom;
}

RecursionOutput approximate_calderon_recursion(const RecursionInput& input, int k_max) {
  if (k_max < 1 || k_max > input.m)
    throw InputError("approximate_calderon_recursion", "need 1 <= k_max <= m");
  if (input.modes.size() != input.principal.size() ||
      input.modes.size() != input.exact.size())
    throw InputError("approximate_calderon_recursion", "mode table size mismatch");

  std::vector<CMatrix> current = input.principal;

  auto mode_index = [&](int n) -> int {
    for (std::size_t i = 0; i < input.modes.size(); ++i)
      if (input.modes[i] == n) return static_cast<int>(i);
    return -1;
  };
  int n_max = 0;
  for (int n : input.modes) n_max = std::max(n_max, std::abs(n));

  for (int k = 1; k < k_max; ++k) {
    // Richardson-extrapolated limit of |n|^k (P_k - P_C)(n) per sign of n;
    // this is the Fourier-tier stand-in for the order(-k) symbol of the
    // discrepancy.
    for (int sign : {+1, -1}) {
      int top = mode_index(sign * n_max);
      int half = mode_index(sign * (n_max / 2));
      if (top < 0 || half < 0) continue;
      auto scaled = [&](int idx) {
        double nn = std::abs(static_cast<double>(input.modes[idx]));
        return (std::pow(nn, k) * (current[idx] - input.exact[idx])).eval();
      };
      CMatrix limit = 2.0 * scaled(top) - scaled(half);
      for (std::size_t i = 0; i < input.modes.size(); ++i) {
        int n = input.modes[i];
        if (n == 0 || (sign > 0) != (n > 0)) continue;
        current[i] -= limit / std::pow(std::abs(static_cast<double>(n)), k);
      }
    }
  }

  RecursionOutput out;
  out.modes = input.modes;
  out.projectors.resize(current.size());
  Contour around_one{Complex(1.0, 0.0), 0.5, 64};
  for (std::size_t i = 0; i < current.size(); ++i) {
    try {
      out.projectors[i] = riesz_projection(current[i], around_one);
    } catch (const NumericalError&) {
      throw NumericalError("calderon-symbol", "approximate_calderon_recursion",
                           "spectral gap of the corrected projector closed around "
                           "{0,1} at mode " +
                               std::to_string(input.modes[i]));
    }
    out.max_idempotence_defect = std::max(
        out.max_idempotence_defect,
        (out.projectors[i] * out.projectors[i] - out.projectors[i]).norm());
  }

  std::vector<double> diffs(current.size());
  for (std::size_t i = 0; i < current.size(); ++i)
    diffs[i] = (out.projectors[i] - input.exact[i]).norm();
  out.decay_slope = decay_exponent(input.modes, diffs);
  return out;
}

}  // namespace calderon

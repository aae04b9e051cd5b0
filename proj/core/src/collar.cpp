#include "calderon/collar.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "calderon/errors.hpp"
#include "calderon/parallel.hpp"

namespace calderon {

CMatrix CollarOperator::a0() const {
  const SymbolMatrix& s = coeffs.at(0);
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) {
      auto d = s.degree(r, c);
      if (d && *d != 0)
        throw InputError("CollarOperator", "A_0 must be a constant (order-0) matrix");
    }
  std::vector<double> origin(boundary_dim(geometry), 0.0);
  if (boundary_dim(geometry) == 0) return s.eval(origin);
  // constant entries evaluate the same anywhere; use a unit covector to
  // stay clear of |xi|-power guards.
  std::vector<double> unit(boundary_dim(geometry), 0.0);
  unit[0] = 1.0;
  return s.eval(unit);
}

double CollarOperator::a0_condition() const {
  Eigen::JacobiSVD<CMatrix> svd(a0());
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

CMatrix CollarOperator::interior_symbol(const CospherePoint& p, double xi_n) const {
  CMatrix acc = CMatrix::Zero(rank_out(), rank_in());
  double pw = 1.0;
  // accumulate from l = m (xi_n^0) down to l = 0 (xi_n^m)
  for (int l = m; l >= 0; --l) {
    acc += coeffs[l].eval(p) * pw;
    pw *= xi_n;
  }
  return acc;
}

void CollarOperator::validate() const {
  if (m < 1) throw InputError("CollarOperator", "order m must be >= 1");
  if (bundle_in.m != m || bundle_out.m != m)
    throw InputError("CollarOperator", "bundle grading slots must equal m");
  if (static_cast<int>(coeffs.size()) != m + 1)
    throw InputError("CollarOperator", "need coefficients for l = 0..m");
  int d = boundary_dim(geometry);
  for (int l = 0; l <= m; ++l) {
    const SymbolMatrix& s = coeffs[l];
    if (s.rows() != rank_out() || s.cols() != rank_in())
      throw InputError("CollarOperator", "coefficient block size mismatch at l=" +
                                             std::to_string(l));
    if (s.covector_dim() != d)
      throw InputError("CollarOperator", "coefficient covector dimension mismatch");
    for (int r = 0; r < s.rows(); ++r)
      for (int c = 0; c < s.cols(); ++c) {
        auto deg = s.degree(r, c);
        if (deg && *deg != l)
          throw InputError("CollarOperator",
                           "A_" + std::to_string(l) + " entry (" + std::to_string(r) +
                               "," + std::to_string(c) + ") has degree " +
                               std::to_string(*deg));
      }
  }
  Eigen::JacobiSVD<CMatrix> svd(a0());
  if (svd.singularValues().minCoeff() <= 0.0)
    throw InputError("CollarOperator", "A_0 is singular");
}

std::vector<CMatrix> conormal_symbol(const CollarOperator& op, const CospherePoint& p) {
  std::vector<CMatrix> out;
  out.reserve(op.m + 1);
  for (int l = 0; l <= op.m; ++l) out.push_back(op.coeffs[l].eval(p));
  return out;
}

EllipticityScanReport interior_ellipticity(const CollarOperator& op,
                                           const CosphereGrid& grid, int xi_n_samples,
                                           double tolerance) {
  if (xi_n_samples < 8)
    throw InputError("interior_ellipticity", "xi_n_samples must be >= 8");

  const std::size_t n = grid.size();
  std::vector<double> minima(n, std::numeric_limits<double>::infinity());
  std::vector<double> argphi(n, 0.0);

  parallel_for(n, [&](std::size_t i) {
    const CospherePoint& p = grid.points[i];
    for (int k = 0; k <= xi_n_samples; ++k) {
      // (xi', xi_n) = (cos(phi) xi'_unit, sin(phi)) sweeps the unit sphere of
      // the conormal plane over this grid point; the opposite tangential
      // direction is covered by the antipodal grid point.
      double phi = M_PI * k / xi_n_samples;
      CospherePoint q = p;
      for (double& c : q.covector) c *= std::cos(phi);
      CMatrix a = op.interior_symbol(q, std::sin(phi));
      Eigen::JacobiSVD<CMatrix> svd(a);
      double s = svd.singularValues().minCoeff();
      if (s < minima[i]) {
        minima[i] = s;
        argphi[i] = phi;
      }
    }
  });

  EllipticityScanReport report;
  report.tolerance = tolerance;
  std::size_t best = 0;
  double global = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (minima[i] < global) {
      global = minima[i];
      best = i;
    }
  report.min_singular_value = global;
  report.witness = grid.points[best];
  for (double& c : report.witness.covector) c *= std::cos(argphi[best]);
  report.witness_xi_n = std::sin(argphi[best]);
  report.pass = global > tolerance;
  return report;
}

CollarOperator formal_adjoint_collar(const CollarOperator& op) {
  CollarOperator adj;
  adj.name = op.name + "_dagger";
  adj.geometry = op.geometry;
  adj.bundle_in = op.bundle_out;
  adj.bundle_out = op.bundle_in;
  adj.m = op.m;
  for (const SymbolMatrix& s : op.coeffs) adj.coeffs.push_back(s.hermitian_adjoint());
  adj.dnormal.assign(adj.coeffs.size(), std::nullopt);
  adj.zeroth.assign(adj.coeffs.size(), std::nullopt);
  adj.validate();
  return adj;
}

}  // namespace calderon

#include "calderon/subspace.hpp"

#include <Eigen/SVD>

#include "calderon/errors.hpp"

namespace calderon {

CMatrix orthonormal_range(const CMatrix& m, double rel_threshold) {
  if (m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_threshold * top) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix subspace_intersection(const CMatrix& q1, const CMatrix& q2, double tol) {
  if (q1.cols() == 0 || q2.cols() == 0) return CMatrix(q1.rows(), 0);
  CMatrix overlap = q1.adjoint() * q2;
  Eigen::JacobiSVD<CMatrix> svd(overlap, Eigen::ComputeThinU | Eigen::ComputeThinV);
  int count = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1.0 - tol) ++count;
  if (count == 0) return CMatrix(q1.rows(), 0);
  return orthonormal_range(q1 * svd.matrixU().leftCols(count));
}

double subspace_gap(const CMatrix& a, const CMatrix& b) {
  CMatrix qa = orthonormal_range(a);
  CMatrix qb = orthonormal_range(b);
  CMatrix pa = qa * qa.adjoint();
  CMatrix pb = qb * qb.adjoint();
  Eigen::JacobiSVD<CMatrix> svd(pa - pb);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

void TruncatedSubspace::finalize() {
  if (basis.cols() == 0) {
    min_singular_value = 0.0;
    gram_condition = 1.0;
    return;
  }
  Eigen::JacobiSVD<CMatrix> svd(basis, Eigen::ComputeThinU);
  min_singular_value = svd.singularValues().minCoeff();
  double top = svd.singularValues().maxCoeff();
  if (min_singular_value <= 1e-12 * top)
    throw NumericalError("disc-lab", "truncated_subspace",
                         "basis is numerically rank deficient");
  gram_condition = (top / min_singular_value) * (top / min_singular_value);
  basis = svd.matrixU().leftCols(basis.cols());
}

TruncatedSubspace make_subspace(int trunc, int slots, RVector weights, CMatrix raw_basis) {
  TruncatedSubspace out;
  out.trunc = trunc;
  out.slots = slots;
  out.weights = std::move(weights);
  if (raw_basis.rows() != out.weights.size())
    throw InputError("make_subspace", "basis rows must match ambient dimension");
  // weight the raw mode coefficients
  out.basis = out.weights.cast<Complex>().asDiagonal() * raw_basis;
  out.finalize();
  return out;
}

IndexReport fredholm_pair_index(const TruncatedSubspace& B, const TruncatedSubspace& C) {
  if (B.ambient_dim() != C.ambient_dim())
    throw InputError("fredholm_pair_index", "subspaces live in different spaces");
  IndexReport report;
  CMatrix joint(B.ambient_dim(), B.dim() + C.dim());
  joint << B.basis, C.basis;
  CMatrix range = orthonormal_range(joint);
  int rank = static_cast<int>(range.cols());
  report.dim_intersection = B.dim() + C.dim() - rank;
  report.codim_sum = B.ambient_dim() - rank;
  report.index = report.dim_intersection - report.codim_sum;
  return report;
}

}  // namespace calderon

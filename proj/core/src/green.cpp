#include "calderon/green.hpp"

#include <Eigen/LU>

#include "calderon/errors.hpp"
#include "calderon/parallel.hpp"

namespace calderon {

CMatrix GreenMatrices::tau_full() const {
  int n = m * rank;
  CMatrix out = CMatrix::Zero(n, n);
  for (int j = 0; j < m; ++j)
    out.block(j * rank, (m - 1 - j) * rank, rank, rank) = CMatrix::Identity(rank, rank);
  return out;
}

CMatrix GreenMatrices::eval_atilde(const CospherePoint& p) const {
  return sigma0_atilde.eval(p);
}

CMatrix GreenMatrices::eval_a(const CospherePoint& p) const { return sigma0_a.eval(p); }

GreenMatrices green_matrices(const CollarOperator& op) {
  if (op.rank_in() != op.rank_out())
    throw InputError("green_matrices", "square fibers required");
  const int m = op.m;
  const int rank = op.rank_in();
  const int dim = boundary_dim(op.geometry);

  GreenMatrices g;
  g.m = m;
  g.rank = rank;
  g.tau = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) g.tau(j, m - 1 - j) = 1.0;

  // atilde block (j,k) carries the principal symbol of A_{j-k}; the free
  // lower-order parts of the paper's A_{j,k} are set to zero.
  SymbolMatrix atilde(m * rank, m * rank, dim);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k <= j; ++k) {
      const SymbolMatrix& block = op.coeffs[j - k];
      for (int r = 0; r < rank; ++r)
        for (int c = 0; c < rank; ++c)
          for (const Monomial& mono : block.at(r, c).monomials)
            atilde.add_term(j * rank + r, k * rank + c, mono.powers, mono.coef,
                            mono.norm_power);
    }
  g.sigma0_atilde = atilde;

  // a = -i tau atilde: row j of a is row (m-1-j) of atilde, scaled by -i.
  SymbolMatrix a(m * rank, m * rank, dim);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      int src = m - 1 - j;
      for (int r = 0; r < rank; ++r)
        for (int c = 0; c < rank; ++c)
          for (const Monomial& mono : atilde.at(src * rank + r, k * rank + c).monomials)
            a.add_term(j * rank + r, k * rank + c, mono.powers,
                       Complex(0, -1) * mono.coef, mono.norm_power);
    }
  g.sigma0_a = a;
  return g;
}

CMatrix invert_atilde(const GreenMatrices& g, const CospherePoint& p) {
  const int m = g.m;
  const int rank = g.rank;
  CMatrix at = g.eval_atilde(p);
  CMatrix a0 = at.block(0, 0, rank, rank);
  Eigen::PartialPivLU<CMatrix> a0lu(a0);
  CMatrix inv = CMatrix::Zero(m * rank, m * rank);
  CMatrix a0inv = a0lu.solve(CMatrix::Identity(rank, rank));

  // Block forward substitution: X_{jj} = A_0^{-1},
  // X_{jk} = -A_0^{-1} sum_{l=k}^{j-1} atilde_{jl} X_{lk}.
  for (int j = 0; j < m; ++j) inv.block(j * rank, j * rank, rank, rank) = a0inv;
  for (int k = 0; k < m; ++k)
    for (int j = k + 1; j < m; ++j) {
      CMatrix acc = CMatrix::Zero(rank, rank);
      for (int l = k; l < j; ++l)
        acc += at.block(j * rank, l * rank, rank, rank) *
               inv.block(l * rank, k * rank, rank, rank);
      inv.block(j * rank, k * rank, rank, rank) = -a0lu.solve(acc);
    }
  return inv;
}

ProjectorField adjoint_condition_symbol(const GreenMatrices& g, const ProjectorField& P,
                                        const GreenMatrices& g_dagger,
                                        const CosphereGrid& grid) {
  if (P.size() != grid.size())
    throw InputError("adjoint_condition_symbol", "projector field does not match grid");
  if (g.m != g_dagger.m || g.rank != g_dagger.rank)
    throw InputError("adjoint_condition_symbol", "fiber dimension mismatch between E and F");
  P.validate(grid);

  ProjectorField out;
  out.tolerance = P.tolerance;
  out.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    CMatrix a_star = g.eval_a(grid.points[i]).adjoint();
    CMatrix one = CMatrix::Identity(a_star.rows(), a_star.cols());
    Eigen::PartialPivLU<CMatrix> lu(a_star);
    out.values[i] = lu.solve((one - P.values[i].adjoint()) * a_star);
  });
  out.validate(grid);
  return out;
}

AdjointDualityReport adjoint_duality_check(const CollarOperator& op,
                                           const CollarOperator& op_dagger,
                                           const CosphereGrid& grid, double tolerance) {
  GreenMatrices g = green_matrices(op);
  GreenMatrices gd = green_matrices(op_dagger);

  AdjointDualityReport report;
  report.tolerance = tolerance;
  std::vector<double> pairing(grid.size()), calderon(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const CospherePoint& p = grid.points[i];
    CMatrix a = g.eval_a(p);
    CMatrix ad = gd.eval_a(p);
    pairing[i] = (a.adjoint() + ad).norm();

    CMatrix p_plus = boundary_ode_split(op, p).p_plus;
    CMatrix p_plus_dag = boundary_ode_split(op_dagger, p).p_plus;
    CMatrix one = identity_like(p_plus);
    Eigen::PartialPivLU<CMatrix> alu(a);
    CMatrix conj = a * (one - p_plus) * alu.solve(one);
    calderon[i] = (p_plus_dag - conj.adjoint()).norm();
  });
  for (double v : pairing) report.pairing_residual = std::max(report.pairing_residual, v);
  for (double v : calderon)
    report.calderon_residual = std::max(report.calderon_residual, v);
  report.pass = report.pairing_residual <= tolerance &&
                report.calderon_residual <= tolerance;
  return report;
}

}  // namespace calderon

#include "calderon/fixtures.hpp"

namespace calderon {
namespace fixtures {

namespace {

CollarOperator skeleton(const char* name, int m, int rank) {
  CollarOperator op;
  op.name = name;
  op.geometry = Geometry::kCircle;
  op.m = m;
  op.bundle_in = GradedBundle(rank, m);
  op.bundle_out = GradedBundle(rank, m);
  op.coeffs.assign(m + 1, SymbolMatrix(rank, rank, 1));
  op.dnormal.assign(m + 1, std::nullopt);
  op.zeroth.assign(m + 1, std::nullopt);
  return op;
}

}  // namespace

CollarOperator scalar_dbar_circle() {
  CollarOperator op = skeleton("scalar_dbar_circle", 1, 1);
  op.coeffs[0].add_term(0, 0, {0}, Complex(0, 1));  // A_0 = i
  op.coeffs[1].add_term(0, 0, {1}, 1.0);            // a_1 = xi
  op.validate();
  return op;
}

CollarOperator dirac2_circle() {
  CollarOperator op = skeleton("dirac2_circle", 1, 2);
  // A_0 = i sigma, sigma = [[0,1],[-1,0]]
  op.coeffs[0].add_term(0, 1, {0}, Complex(0, 1));
  op.coeffs[0].add_term(1, 0, {0}, Complex(0, -1));
  // a_1 = sigma c_A with c_A = diag(xi, -xi): [[0, -xi],[-xi, 0]]
  op.coeffs[1].add_term(0, 1, {1}, -1.0);
  op.coeffs[1].add_term(1, 0, {1}, -1.0);
  op.validate();
  return op;
}

CollarOperator laplace_circle() {
  CollarOperator op = skeleton("laplace_circle", 2, 1);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[2].add_term(0, 0, {2}, 1.0);
  op.validate();
  return op;
}

CollarOperator laplace_rank2_circle() {
  CollarOperator op = skeleton("laplace_rank2_circle", 2, 2);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[0].add_term(1, 1, {0}, 1.0);
  op.coeffs[1].add_term(0, 1, {1}, 1.0);  // upper-triangular first-order coupling
  op.coeffs[2].add_term(0, 0, {2}, 1.0);
  op.coeffs[2].add_term(1, 1, {2}, 2.0);
  op.validate();
  return op;
}

CollarOperator order3_scalar_circle() {
  // (xi_n - i xi)(xi_n + 2 i xi)(xi_n - 3 i xi)
  //   = xi_n^3 - 2 i xi xi_n^2 + 5 xi^2 xi_n - 6 i xi^3
  CollarOperator op = skeleton("order3_scalar_circle", 3, 1);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[1].add_term(0, 0, {1}, Complex(0, -2));
  op.coeffs[2].add_term(0, 0, {2}, 5.0);
  op.coeffs[3].add_term(0, 0, {3}, Complex(0, -6));
  op.validate();
  return op;
}

CollarOperator order3_rank2_circle() {
  // block diagonal third-order pair with mirrored root patterns and a
  // degree-3 coupling entry in the corner
  CollarOperator op = skeleton("order3_rank2_circle", 3, 2);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[0].add_term(1, 1, {0}, 1.0);
  op.coeffs[1].add_term(0, 0, {1}, Complex(0, -2));
  op.coeffs[1].add_term(1, 1, {1}, Complex(0, 2));
  op.coeffs[2].add_term(0, 0, {2}, 5.0);
  op.coeffs[2].add_term(1, 1, {2}, 5.0);
  op.coeffs[3].add_term(0, 0, {3}, Complex(0, -6));
  op.coeffs[3].add_term(1, 1, {3}, Complex(0, 6));
  op.coeffs[3].add_term(0, 1, {3}, 0.5);
  op.validate();
  return op;
}

CollarOperator defective_m2_circle() {
  // (xi_n - i xi)^2 = xi_n^2 - 2 i xi xi_n - xi^2: elliptic, defective split
  CollarOperator op = skeleton("defective_m2_circle", 2, 1);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[1].add_term(0, 0, {1}, Complex(0, -2));
  op.coeffs[2].add_term(0, 0, {2}, -1.0);
  op.validate();
  return op;
}

CollarOperator laplace_torus() {
  CollarOperator op;
  op.name = "laplace_torus";
  op.geometry = Geometry::kFlatTorus2d;
  op.m = 2;
  op.bundle_in = GradedBundle(1, 2);
  op.bundle_out = GradedBundle(1, 2);
  op.coeffs.assign(3, SymbolMatrix(1, 1, 2));
  op.dnormal.assign(3, std::nullopt);
  op.zeroth.assign(3, std::nullopt);
  op.coeffs[0].add_term(0, 0, {0, 0}, 1.0);
  op.coeffs[2].add_term(0, 0, {2, 0}, 1.0);
  op.coeffs[2].add_term(0, 0, {0, 2}, 1.0);
  op.validate();
  return op;
}

CollarOperator wave_circle() {
  CollarOperator op = skeleton("wave_circle", 2, 1);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  op.coeffs[2].add_term(0, 0, {2}, -1.0);  // xi_n^2 - xi^2: real characteristics
  op.validate();
  return op;
}

std::vector<CollarOperator> standard_fixtures() {
  return {scalar_dbar_circle(),    dirac2_circle(),      laplace_circle(),
          laplace_rank2_circle(),  order3_scalar_circle(), order3_rank2_circle(),
          defective_m2_circle()};
}

ProjectorField dirichlet_field(const CosphereGrid& grid) {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return constant_projector(grid, p);
}

ProjectorField neumann_field(const CosphereGrid& grid) {
  CMatrix p = CMatrix::Zero(2, 2);
  p(1, 1) = 1.0;
  return constant_projector(grid, p);
}

ProjectorField identity_field(const CosphereGrid& grid, int dim) {
  return constant_projector(grid, CMatrix::Identity(dim, dim));
}

ProjectorField zero_field(const CosphereGrid& grid, int dim) {
  return constant_projector(grid, CMatrix::Zero(dim, dim));
}

}  // namespace fixtures
}  // namespace calderon

#include <cmath>

#include "calderon/calderon_symbol.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/green.hpp"
#include "doctest.h"

using namespace calderon;

namespace {

CospherePoint unit_point(double xi = 1.0) { return {{0.0}, {xi}}; }

// D = D_xn^m + A with A tangential of order m (no mixed coefficients).
CollarOperator normal_power_fixture(int m) {
  CollarOperator op;
  op.name = "normal_power_m" + std::to_string(m);
  op.geometry = Geometry::kCircle;
  op.m = m;
  op.bundle_in = GradedBundle(1, m);
  op.bundle_out = GradedBundle(1, m);
  op.coeffs.assign(m + 1, SymbolMatrix(1, 1, 1));
  op.dnormal.assign(m + 1, std::nullopt);
  op.zeroth.assign(m + 1, std::nullopt);
  op.coeffs[0].add_term(0, 0, {0}, 1.0);
  std::vector<int> top{m};
  op.coeffs[m].add_term(0, 0, top, 1.0);  // sigma(A) = xi^m
  op.validate();
  return op;
}

}  // namespace

TEST_CASE("m=1 Dirac-type: sigma0(a) = -i A_0") {
  // fixture with A_0 = antidiag(1,-1) literally
  CollarOperator op;
  op.name = "antidiag_dirac";
  op.geometry = Geometry::kCircle;
  op.m = 1;
  op.bundle_in = GradedBundle(2, 1);
  op.bundle_out = GradedBundle(2, 1);
  op.coeffs.assign(2, SymbolMatrix(2, 2, 1));
  op.dnormal.assign(2, std::nullopt);
  op.zeroth.assign(2, std::nullopt);
  op.coeffs[0].add_term(0, 1, {0}, 1.0);
  op.coeffs[0].add_term(1, 0, {0}, -1.0);
  op.coeffs[1].add_term(0, 0, {1}, Complex(0, 1));
  op.coeffs[1].add_term(1, 1, {1}, Complex(0, 1));
  op.validate();

  GreenMatrices g = green_matrices(op);
  CMatrix expected(2, 2);
  expected << 0, Complex(0, -1), Complex(0, 1), 0;  // -i * antidiag(1,-1)
  CHECK((g.eval_a(unit_point()) - expected).norm() <= 1e-14);
}

TEST_CASE("tau is the antidiagonal involution") {
  GreenMatrices g = green_matrices(fixtures::order3_scalar_circle());
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  CHECK((g.tau - expected).norm() == 0.0);
  CHECK((g.tau * g.tau - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CMatrix full = g.tau_full();
  CHECK((full * full - identity_like(full)).norm() == 0.0);
}

TEST_CASE("normal-power operator: a has the pure tau pattern") {
  CollarOperator op = normal_power_fixture(2);
  GreenMatrices g = green_matrices(op);
  CMatrix a = g.eval_a(unit_point());
  CMatrix expected(2, 2);
  expected << 0, Complex(0, -1), Complex(0, -1), 0;  // -i tau (A_1 = 0)
  CHECK((a - expected).norm() <= 1e-14);
}

TEST_CASE("invert_atilde") {
  SUBCASE("diagonal case") {
    GreenMatrices g = green_matrices(normal_power_fixture(3));
    CMatrix inv = invert_atilde(g, unit_point());
    CHECK((inv - CMatrix::Identity(3, 3)).norm() <= 1e-14);
  }

  SUBCASE("m=2 with one subdiagonal entry") {
    CollarOperator op;
    op.geometry = Geometry::kCircle;
    op.m = 2;
    op.bundle_in = GradedBundle(1, 2);
    op.bundle_out = GradedBundle(1, 2);
    op.coeffs.assign(3, SymbolMatrix(1, 1, 1));
    op.dnormal.assign(3, std::nullopt);
    op.zeroth.assign(3, std::nullopt);
    op.coeffs[0].add_term(0, 0, {0}, 1.0);
    Complex b(2.0, 1.0);
    op.coeffs[1].add_term(0, 0, {1}, b);
    op.coeffs[2].add_term(0, 0, {2}, 1.0);
    op.validate();
    GreenMatrices g = green_matrices(op);
    CMatrix inv = invert_atilde(g, unit_point());
    CHECK(std::abs(inv(1, 0) - (-b)) <= 1e-14);  // -A_0^{-1} b A_0^{-1}
  }

  SUBCASE("order-3 fixture: inverse and its degree pattern") {
    GreenMatrices g = green_matrices(fixtures::order3_scalar_circle());
    CospherePoint p = unit_point();
    CMatrix inv = invert_atilde(g, p);
    CHECK((g.eval_atilde(p) * inv - CMatrix::Identity(3, 3)).norm() <= 1e-12);
    // entries of the inverse scale like t^{r-c}, the same DN pattern
    CMatrix inv2 = invert_atilde(g, {{0.0}, {2.0}});
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c <= r; ++c) {
        double expected = std::pow(2.0, r - c);
        if (std::abs(inv(r, c)) < 1e-13) continue;
        CHECK(std::abs(inv2(r, c) / inv(r, c)) ==
              doctest::Approx(expected).epsilon(1e-10));
      }
  }
}

TEST_CASE("adjoint condition symbol") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 8);

  SUBCASE("P = 0 maps to the identity projector") {
    CollarOperator op = fixtures::laplace_circle();
    GreenMatrices g = green_matrices(op);
    GreenMatrices gd = green_matrices(formal_adjoint_collar(op));
    ProjectorField zero = fixtures::zero_field(grid, 2);
    ProjectorField pd = adjoint_condition_symbol(g, zero, gd, grid);
    for (const CMatrix& v : pd.values)
      CHECK((v - CMatrix::Identity(2, 2)).norm() <= 1e-12);
  }

  SUBCASE("bundle-like conditions of D = D_xn^m + A: (B_k)* = B_{m-k}") {
    // adjoint pairs: the condition killing the first k traces pairs with the
    // one killing the first m-k; the half cut of even order is self-adjoint
    const int m = 4;
    CollarOperator op = normal_power_fixture(m);
    GreenMatrices g = green_matrices(op);
    GreenMatrices gd = green_matrices(formal_adjoint_collar(op));
    for (int k = 0; k <= m; ++k) {
      CMatrix pk = CMatrix::Zero(m, m);
      for (int j = 0; j < k; ++j) pk(j, j) = 1.0;
      ProjectorField field = constant_projector(grid, pk);
      ProjectorField pdag = adjoint_condition_symbol(g, field, gd, grid);
      const CMatrix& q = pdag.values[0];
      CHECK(std::lround(q.trace().real()) == m - k);
      for (int j = m - k; j < m; ++j)
        CHECK((q * CVector::Unit(m, j)).norm() <= 1e-12);  // e_j in ker P_dagger
    }
  }

  SUBCASE("involution: applying the operation twice restores P") {
    CollarOperator op = fixtures::laplace_circle();
    CollarOperator dag = formal_adjoint_collar(op);
    GreenMatrices g = green_matrices(op);
    GreenMatrices gd = green_matrices(dag);
    ProjectorField p = fixtures::dirichlet_field(grid);
    ProjectorField pd = adjoint_condition_symbol(g, p, gd, grid);
    ProjectorField pdd = adjoint_condition_symbol(gd, pd, g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((pdd.values[i] - p.values[i]).norm() <= 1e-8);
  }

  SUBCASE("P = p_plus(D) maps to p_plus(D_dagger)") {
    CollarOperator op = fixtures::dirac2_circle();
    CollarOperator dag = formal_adjoint_collar(op);
    GreenMatrices g = green_matrices(op);
    GreenMatrices gd = green_matrices(dag);
    ProjectorField p = p_plus_field(op, grid);
    ProjectorField expected = p_plus_field(dag, grid);
    ProjectorField pd = adjoint_condition_symbol(g, p, gd, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((pd.values[i] - expected.values[i]).norm() <= 1e-8);
  }
}

TEST_CASE("adjoint duality check") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 8);

  SUBCASE("dirac fixture at roundoff") {
    CollarOperator op = fixtures::dirac2_circle();
    AdjointDualityReport rep =
        adjoint_duality_check(op, formal_adjoint_collar(op), grid);
    CHECK(rep.pass);
    CHECK(rep.pairing_residual <= 1e-12);
    CHECK(rep.calderon_residual <= 1e-9);
  }

  SUBCASE("laplace fixture passes") {
    CollarOperator op = fixtures::laplace_circle();
    AdjointDualityReport rep =
        adjoint_duality_check(op, formal_adjoint_collar(op), grid);
    CHECK(rep.pass);
  }

  SUBCASE("sign-corrupted adjoint fails loudly") {
    CollarOperator op = fixtures::dirac2_circle();
    CollarOperator corrupted = formal_adjoint_collar(op);
    for (SymbolMatrix& s : corrupted.coeffs) s = s.scaled(-1.0);
    AdjointDualityReport rep = adjoint_duality_check(op, corrupted, grid);
    CHECK_FALSE(rep.pass);
    GreenMatrices g = green_matrices(op);
    double a_norm = g.eval_a(grid.points[0]).norm();
    CHECK(rep.pairing_residual == doctest::Approx(2.0 * a_norm).epsilon(1e-9));
  }

  SUBCASE("duality identity p_+(D) = a^{-1} p_-(D^dag)* a on all fixtures") {
    for (const CollarOperator& op : fixtures::standard_fixtures()) {
      CollarOperator dag = formal_adjoint_collar(op);
      GreenMatrices g = green_matrices(op);
      CosphereGrid fixture_grid = build_cosphere_grid(op.geometry, 6);
      for (const CospherePoint& p : fixture_grid.points) {
        CMatrix a = g.eval_a(p);
        CMatrix p_plus = boundary_ode_split(op, p).p_plus;
        CMatrix p_minus_dag = identity_like(p_plus) - boundary_ode_split(dag, p).p_plus;
        CMatrix rhs = a.inverse() * p_minus_dag.adjoint() * a;
        CHECK((p_plus - rhs).norm() <= 1e-8);
      }
    }
  }
}

#include <cmath>

#include "calderon/calderon_symbol.hpp"
#include "calderon/disc.hpp"
#include "calderon/errors.hpp"
#include "calderon/fixtures.hpp"
#include "doctest.h"

using namespace calderon;

namespace {

CollarOperator first_order_diag_fixture() {
  // m = 1, rank 2, adapted symbol c_A = diag(-xi, xi): A_0 = i, A_1 = c_A
  CollarOperator op;
  op.name = "diag_first_order";
  op.geometry = Geometry::kCircle;
  op.m = 1;
  op.bundle_in = GradedBundle(2, 1);
  op.bundle_out = GradedBundle(2, 1);
  op.coeffs.assign(2, SymbolMatrix(2, 2, 1));
  op.dnormal.assign(2, std::nullopt);
  op.zeroth.assign(2, std::nullopt);
  op.coeffs[0].add_term(0, 0, {0}, Complex(0, 1));
  op.coeffs[0].add_term(1, 1, {0}, Complex(0, 1));
  op.coeffs[1].add_term(0, 0, {1}, Complex(0, -1));  // i * (-xi)
  op.coeffs[1].add_term(1, 1, {1}, Complex(0, 1));   // i * xi
  op.validate();
  return op;
}

CospherePoint unit_point(double xi = 1.0) { return {{0.0}, {xi}}; }

}  // namespace

TEST_CASE("conormal symbol assembles leading coefficient A_0") {
  for (const CollarOperator& op : fixtures::standard_fixtures()) {
    auto coeffs = conormal_symbol(op, unit_point());
    CHECK((coeffs[0] - op.a0()).norm() <= 1e-14);
    CHECK(static_cast<int>(coeffs.size()) == op.m + 1);
  }
}

TEST_CASE("laplace split: roots +-i, p_plus magnitudes (1/2)[[1,1],[1,1]]") {
  CompanionSplit split = boundary_ode_split(fixtures::laplace_circle(), unit_point());
  REQUIRE(split.roots.size() == 2);
  double dist = std::min(std::abs(split.roots[0] - Complex(0, 1)),
                         std::abs(split.roots[0] - Complex(0, -1)));
  CHECK(dist <= 1e-12);
  CHECK(split.dim_plus() == 1);
  CHECK(split.dim_minus() == 1);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(split.p_plus(r, c)) == doctest::Approx(0.5).epsilon(1e-9));
  // projector relations from the contract
  CHECK((split.p_plus * split.p_plus - split.p_plus).norm() <= 1e-9);
  CHECK((split.p_plus * split.basis_plus - split.basis_plus).norm() <= 1e-9);
  CHECK((split.p_plus * split.basis_minus).norm() <= 1e-9);
}

TEST_CASE("first-order diagonal model: E_+ = span e2") {
  CollarOperator op = first_order_diag_fixture();
  CompanionSplit split = boundary_ode_split(op, unit_point());
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  CHECK((split.p_plus - expected).norm() <= 1e-10);
  // adapted-operator route: p_plus = chi^+(c_A) exactly
  CHECK((p_plus_residue(op, unit_point()) - expected).norm() <= 1e-10);
}

TEST_CASE("cross-method agreement on every fixture and grid point") {
  for (const CollarOperator& op : fixtures::standard_fixtures()) {
    CosphereGrid grid = build_cosphere_grid(op.geometry, 8);
    for (const auto& rep : symbol_sweep(op, grid, true)) {
      CHECK(rep.cross_method_residual <= 1e-8);
      // residue-route output is itself a projector
      CMatrix q = rep.p_plus_residue_value;
      CHECK((q * q - q).norm() <= 1e-9);
    }
  }
}

TEST_CASE("split dimension symmetry under xi -> -xi") {
  for (const CollarOperator& op : fixtures::standard_fixtures()) {
    CompanionSplit plus = boundary_ode_split(op, unit_point(1.0));
    CompanionSplit minus = boundary_ode_split(op, unit_point(-1.0));
    CHECK(plus.dim_plus() == minus.dim_minus());
    CHECK(plus.dim_minus() == minus.dim_plus());
  }
}

TEST_CASE("non-triviality over each boundary component") {
  // over the full cosphere of the (connected) boundary circle both E_+ and
  // E_- must show up somewhere; for rank-1 first-order operators their
  // supports sit on complementary fibers
  for (const CollarOperator& op : fixtures::standard_fixtures()) {
    CosphereGrid grid = build_cosphere_grid(op.geometry, 4);
    int max_plus = 0, max_minus = 0;
    for (const CospherePoint& p : grid.points) {
      CompanionSplit split = boundary_ode_split(op, p);
      max_plus = std::max(max_plus, split.dim_plus());
      max_minus = std::max(max_minus, split.dim_minus());
    }
    CHECK(max_plus >= 1);
    CHECK(max_minus >= 1);
  }
}

TEST_CASE("defective double root handled through the resolvent") {
  CollarOperator op = fixtures::defective_m2_circle();
  CompanionSplit split = boundary_ode_split(op, unit_point());
  CHECK(split.dim_plus() == 2);  // double root i, Jordan block
  CHECK((split.p_plus - CMatrix::Identity(2, 2)).norm() <= 1e-9);
  CHECK((p_plus_residue(op, unit_point()) - split.p_plus).norm() <= 1e-8);
}

TEST_CASE("real characteristic root raises the ellipticity error") {
  CHECK_THROWS_AS(boundary_ode_split(fixtures::wave_circle(), unit_point()),
                  NumericalError);
}

TEST_CASE("riesz projection closed forms") {
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(1, 1) = 1.0;
  Contour around_one{Complex(1, 0), 0.5, 64};
  CHECK((riesz_projection(diag, around_one) - diag).norm() <= 1e-12);

  // Riesz projector of a near-idempotent returns the idempotent itself
  CMatrix wobble = diag;
  wobble(0, 1) = 1e-9;
  CHECK((riesz_projection(wobble, around_one) - wobble).norm() <= 1e-8);

  CMatrix jordan(2, 2);
  jordan << 1, 1, 0, 1;
  CHECK((riesz_projection(jordan, around_one) - CMatrix::Identity(2, 2)).norm() <= 1e-10);

  CMatrix on_contour = CMatrix::Zero(2, 2);
  on_contour(0, 0) = 0.5;  // eigenvalue on the circle |z - 1| = 0.5
  on_contour(1, 1) = 1.0;
  CHECK_THROWS_AS(riesz_projection(on_contour, around_one), NumericalError);
}

TEST_CASE("approximate Calderon recursion") {
  FourierModeOperator d0 = FourierModeOperator::d0();
  const int trunc = 64;
  CalderonModes exact = calderon_modes(d0, trunc);
  AdaptedBoundaryOp a = adapted_boundary_operator(d0, trunc);
  std::vector<CMatrix> chi = chi_plus(a.a, a.modes, 0.5);

  SUBCASE("already-exact input is a fixed point") {
    RecursionInput input{exact.modes, exact.projectors, exact.projectors, 1};
    RecursionOutput out = approximate_calderon_recursion(input, 1);
    double worst = 0;
    for (std::size_t i = 0; i < out.projectors.size(); ++i)
      worst = std::max(worst, (out.projectors[i] - exact.projectors[i]).norm());
    CHECK(worst <= 1e-10);
  }

  SUBCASE("D_0 principal input reproduces P_C to O(1/n)") {
    RecursionInput input{exact.modes, chi, exact.projectors, 1};
    RecursionOutput out = approximate_calderon_recursion(input, 1);
    CHECK(out.max_idempotence_defect <= 1e-10);
    // chi^+ equals P_C here away from mode 0, so the difference is at floor
    CHECK(out.decay_slope <= -0.9);
  }

  SUBCASE("D_alpha: order -1 discrepancy with nonzero scaled limit") {
    FourierModeOperator da =
        FourierModeOperator::d_alpha(AlphaProfile{"cubic", 1.0});
    CalderonModes exact_a = calderon_modes(da, trunc);
    RecursionInput input{exact_a.modes, chi, exact_a.projectors, 1};
    RecursionOutput out = approximate_calderon_recursion(input, 1);
    CHECK(out.max_idempotence_defect <= 1e-10);
    CHECK(out.decay_slope <= -0.9);
    CHECK(out.decay_slope >= -1.4);  // genuinely order -1, not faster
    double top = (out.projectors.back() - exact_a.projectors.back()).norm();
    CHECK(trunc * top == doctest::Approx(0.25).epsilon(0.15));
  }

  SUBCASE("second-order model, two symbol levels matched") {
    FourierModeOperator lap = FourierModeOperator::laplace(1.0);
    CalderonModes exact_l = calderon_modes(lap, trunc);
    std::vector<CMatrix> principal = laplace_principal_modes(lap, trunc);
    RecursionInput input{exact_l.modes, principal, exact_l.projectors, 2};
    RecursionOutput one = approximate_calderon_recursion(input, 1);
    RecursionOutput two = approximate_calderon_recursion(input, 2);
    CHECK(one.max_idempotence_defect <= 1e-10);
    CHECK(two.max_idempotence_defect <= 1e-10);
    CHECK(one.decay_slope <= -0.9);
    CHECK(two.decay_slope <= -1.5);  // subtracting the order(-1) term helps
  }

  SUBCASE("closing spectral gap is detected") {
    std::vector<CMatrix> bad = chi;
    bad[trunc + 4] = 0.5 * CMatrix::Identity(2, 2);  // eigenvalue on the contour
    RecursionInput input{exact.modes, bad, exact.projectors, 1};
    CHECK_THROWS_AS(approximate_calderon_recursion(input, 1), NumericalError);
  }
}

TEST_CASE("outward jet conjugation reproduces the textbook Laplace matrix") {
  CollarOperator laplace = fixtures::laplace_circle();
  CMatrix conj = outward_jet_conjugation(2, 1);
  for (double t : {0.5, 1.0, 2.0}) {
    CospherePoint p{{0.0}, {t}};
    CMatrix display =
        conj * boundary_ode_split(laplace, p).p_plus * conj.inverse();
    CMatrix expected(2, 2);
    expected << 0.5, 0.5 / t, 0.5 * t, 0.5;
    CHECK((display - expected).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

#include <cmath>
#include <random>

#include "calderon/collar.hpp"
#include "calderon/errors.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/green.hpp"
#include "calderon/projector_field.hpp"
#include "doctest.h"

using namespace calderon;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("cosphere grid: circle") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 8);
  CHECK(grid.size() == 16);  // 8 base points x xi' in {+1,-1}
  for (double w : grid.weights) CHECK(w == doctest::Approx(kTwoPi / 8));
  CHECK(grid.total_weight() == doctest::Approx(2 * kTwoPi));
  CHECK(grid.component_count() == 2);
  CHECK_THROWS_AS(build_cosphere_grid(Geometry::kCircle, 1), InputError);
}

TEST_CASE("cosphere grid: torus measure") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kFlatTorus2d, 16);
  CHECK(grid.size() == 16 * 16 * 16);
  double expected = kTwoPi * kTwoPi * kTwoPi;
  CHECK(std::abs(grid.total_weight() - expected) <= 1e-8 * expected);
  for (const CospherePoint& p : grid.points)
    CHECK(std::abs(p.covector_norm() - 1.0) <= 1e-14);
}

TEST_CASE("eval_symbol basics") {
  SymbolMatrix s(1, 1, 1);
  s.add_term(0, 0, {1}, 1.0);  // xi
  CHECK(s.eval({1.0}, 3.0)(0, 0) == Complex(3.0, 0.0));

  SymbolMatrix lap(1, 1, 1);
  lap.add_term(0, 0, {2}, 1.0);  // |xi'|^2 in one variable
  CHECK(lap.eval({1.0}, 2.0)(0, 0) == Complex(4.0, 0.0));
}

TEST_CASE("mixed DN degrees scale as [[1,1/t],[t,1]]") {
  SymbolMatrix s(2, 2, 1);
  s.add_term(0, 0, {0}, 1.0);
  s.add_term(0, 1, {0}, 1.0, -1);  // |xi|^{-1}
  s.add_term(1, 0, {0}, 1.0, 1);   // |xi|
  s.add_term(1, 1, {0}, 1.0);
  for (double t : {0.5, 2.0, 10.0}) {
    CMatrix v = s.eval({1.0}, t);
    CHECK(std::abs(v(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(v(0, 1) - 1.0 / t) < 1e-14);
    CHECK(std::abs(v(1, 0) - t) < 1e-14);
    CHECK(std::abs(v(1, 1) - 1.0) < 1e-14);
  }
}

TEST_CASE("homogeneity property on random symbols") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 2);
    SymbolMatrix s(2, 2, dim);
    std::vector<std::vector<int>> degs(2, std::vector<int>(2));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        int deg = static_cast<int>(rng() % 4) - 1;
        degs[r][c] = deg;
        int poly = deg < 0 ? 0 : static_cast<int>(rng() % (deg + 1));
        std::vector<int> powers(dim, 0);
        powers[0] = poly;
        s.add_term(r, c, powers, Complex(coef(rng), coef(rng)), deg - poly);
      }
    std::vector<double> xi(dim, 0.0);
    xi[0] = 0.6;
    if (dim > 1) xi[1] = -0.8;
    CMatrix base = s.eval(xi);
    for (double t : {0.5, 2.0, 10.0}) {
      CMatrix scaled = s.eval(xi, t);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          double expected = std::pow(t, degs[r][c]);
          CHECK(std::abs(scaled(r, c) - expected * base(r, c)) <=
                1e-12 * expected * std::abs(base(r, c)) + 1e-15);
        }
    }
  }
}

TEST_CASE("dn_order_check: atilde patterns") {
  GreenMatrices g3 = green_matrices(fixtures::order3_scalar_circle());
  CHECK(dn_order_check(g3.sigma0_atilde, 0, {0, 1, 2}, {0, 1, 2}).pass);
  // sigma0_a maps weights 0..m-1 to the reversed weights
  CHECK(dn_order_check(g3.sigma0_a, 0, {2, 1, 0}, {0, 1, 2}).pass);

  SymbolMatrix id = SymbolMatrix::constant(CMatrix::Identity(2, 2), 1);
  CHECK(dn_order_check(id, 0, {0, 1}, {0, 1}).pass);
}

TEST_CASE("dn_order_check: row swap report") {
  // swap the two rows of the m=2 atilde of a fixture with a nonzero
  // subdiagonal; both touched entries land on the wrong diagonal
  SymbolMatrix swapped(2, 2, 1);
  swapped.add_term(0, 0, {1}, 2.0);  // was (1,0): degree 1
  swapped.add_term(0, 1, {0}, 1.0);
  swapped.add_term(1, 0, {0}, 1.0);
  DnVerdict verdict = dn_order_check(swapped, 0, {0, 1}, {0, 1});
  CHECK_FALSE(verdict.pass);
  CHECK(verdict.violations.size() == 2);
}

TEST_CASE("dn composition closes") {
  GreenMatrices g = green_matrices(fixtures::order3_scalar_circle());
  SymbolMatrix product = g.sigma0_a * g.sigma0_atilde;
  CHECK(dn_order_check(product, 0, {2, 1, 0}, {0, 1, 2}).pass);
}

TEST_CASE("interior ellipticity: pass and fail") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 8);

  EllipticityScanReport lap = interior_ellipticity(fixtures::laplace_circle(), grid, 16);
  CHECK(lap.pass);
  CHECK(lap.min_singular_value >= 0.5);

  EllipticityScanReport wave = interior_ellipticity(fixtures::wave_circle(), grid, 64);
  CHECK_FALSE(wave.pass);
  // witness near xi_n = xi': the minimizing direction is at 45 degrees
  double ratio = std::abs(wave.witness_xi_n) /
                 std::max(1e-14, std::abs(wave.witness.covector[0]));
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.2));

  CHECK(interior_ellipticity(fixtures::dirac2_circle(), grid, 16).pass);
  CHECK_THROWS_AS(interior_ellipticity(fixtures::laplace_circle(), grid, 4), InputError);
}

TEST_CASE("collar operator validation") {
  CollarOperator op = fixtures::dirac2_circle();
  CHECK(op.a0_condition() == doctest::Approx(1.0));

  CollarOperator bad = op;
  bad.coeffs[0] = SymbolMatrix(2, 2, 1);  // A_0 = 0
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("projector field invariants") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 4);
  ProjectorField good = fixtures::dirichlet_field(grid);
  CHECK_NOTHROW(good.validate(grid));

  ProjectorField skew = good;
  skew.values[0](0, 0) = 0.7;  // not idempotent
  CHECK_THROWS_AS(skew.validate(grid), NumericalError);

  ProjectorField jump = good;
  jump.values[1] = CMatrix::Identity(2, 2);  // rank jumps within a component
  CHECK_THROWS_AS(jump.validate(grid), NumericalError);
}

TEST_CASE("operator json round trip") {
  for (const CollarOperator& op : {fixtures::order3_rank2_circle(), fixtures::laplace_torus()}) {
    CollarOperator back = parse_operator_json(operator_to_json(op));
    CHECK(back.m == op.m);
    CHECK(back.geometry == op.geometry);
    CosphereGrid grid = build_cosphere_grid(op.geometry, 4);
    for (const CospherePoint& p : grid.points)
      for (int l = 0; l <= op.m; ++l)
        CHECK((back.coeffs[l].eval(p) - op.coeffs[l].eval(p)).norm() <= 1e-14);
  }
}

TEST_CASE("operator json diagnostics name the field") {
  std::string text = operator_to_json(fixtures::laplace_circle());
  // corrupt the powers length inside the first coefficient entry
  auto pos = text.find("\"powers\": [");
  REQUIRE(pos != std::string::npos);
  std::string broken = text;
  broken.insert(pos + 11, "1, ");
  try {
    parse_operator_json(broken);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("coeffs[") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_operator_json("{\"m\": 1}"), InputError);
  CHECK_THROWS_AS(parse_operator_json("not json"), InputError);
}

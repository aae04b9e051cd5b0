#include <cmath>
#include <random>

#include "calderon/disc.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/green.hpp"
#include "calderon/lopatinskii.hpp"
#include "doctest.h"

using namespace calderon;

TEST_CASE("P = p_plus is elliptic and A = 2p_plus - 1 is an involution") {
  CollarOperator dirac = fixtures::dirac2_circle();
  CosphereGrid grid = build_cosphere_grid(dirac.geometry, 8);
  ProjectorField aps = p_plus_field(dirac, grid);
  EllipticityReport rep = sl_check_symbol(dirac, aps, grid);
  CHECK(rep.elliptic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CMatrix p_plus = aps.values[i];
    CMatrix a = 2.0 * p_plus - identity_like(p_plus);
    CHECK((a * a - identity_like(a)).norm() <= 1e-9);
  }
}

TEST_CASE("Dirichlet and Neumann on Laplace-type are elliptic") {
  CollarOperator laplace = fixtures::laplace_circle();
  CosphereGrid grid = build_cosphere_grid(laplace.geometry, 8);
  for (auto field : {fixtures::dirichlet_field(grid), fixtures::neumann_field(grid)}) {
    EllipticityReport sym = sl_check_symbol(laplace, field, grid);
    EllipticityReport ode = sl_check_ode(laplace, field, grid);
    CHECK(sym.elliptic);
    CHECK(ode.elliptic);
  }
  // |det(p_plus - (1 - P_D))| = 1/2 at unit covectors
  CMatrix p_plus = p_plus_field(laplace, grid).values[0];
  CMatrix pd = fixtures::dirichlet_field(grid).values[0];
  CMatrix a = p_plus - (identity_like(p_plus) - pd);
  CHECK(std::abs(a.determinant()) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("full Dirichlet on a first-order pair is not elliptic") {
  CollarOperator dirac = fixtures::dirac2_circle();
  CosphereGrid grid = build_cosphere_grid(dirac.geometry, 8);
  ProjectorField full = fixtures::identity_field(grid, 2);
  EllipticityReport sym = sl_check_symbol(dirac, full, grid);
  EllipticityReport ode = sl_check_ode(dirac, full, grid);
  CHECK_FALSE(sym.elliptic);
  CHECK_FALSE(ode.elliptic);
  CHECK(sym.min_singular_value <= 1e-12);  // singular exactly on ker p_plus
}

TEST_CASE("symbol and ODE methods agree pointwise across fixtures") {
  struct Probe {
    CollarOperator op;
    ProjectorField field;
  };
  CollarOperator laplace = fixtures::laplace_circle();
  CollarOperator dirac = fixtures::dirac2_circle();
  CosphereGrid lgrid = build_cosphere_grid(laplace.geometry, 8);
  CosphereGrid dgrid = build_cosphere_grid(dirac.geometry, 8);
  std::vector<Probe> probes;
  probes.push_back({laplace, fixtures::dirichlet_field(lgrid)});
  probes.push_back({laplace, fixtures::neumann_field(lgrid)});
  probes.push_back({laplace, p_plus_field(laplace, lgrid)});
  probes.push_back({dirac, p_plus_field(dirac, dgrid)});
  probes.push_back({dirac, fixtures::identity_field(dgrid, 2)});
  probes.push_back({dirac, fixtures::zero_field(dgrid, 2)});
  for (const Probe& probe : probes) {
    const CosphereGrid& grid = probe.op.m == 2 ? lgrid : dgrid;
    EllipticityReport sym = sl_check_symbol(probe.op, probe.field, grid);
    EllipticityReport ode = sl_check_ode(probe.op, probe.field, grid);
    CHECK(sym.elliptic == ode.elliptic);
  }
}

TEST_CASE("regularity verdict equivalences") {
  CollarOperator laplace = fixtures::laplace_circle();
  CosphereGrid grid = build_cosphere_grid(laplace.geometry, 8);

  RegularityReport dirichlet =
      regularity_verdict(laplace, fixtures::dirichlet_field(grid), grid);
  CHECK(dirichlet.verdict == RegularityClass::kRegular);
  CHECK(dirichlet.regular);
  CHECK(dirichlet.fredholm);

  // Calderon complement condition: defined by the projector P_C itself
  RegularityReport complement =
      regularity_verdict(laplace, p_plus_field(laplace, grid), grid);
  CHECK(complement.verdict == RegularityClass::kRegular);

  CollarOperator dirac = fixtures::dirac2_circle();
  CosphereGrid dgrid = build_cosphere_grid(dirac.geometry, 8);
  RegularityReport degenerate =
      regularity_verdict(dirac, fixtures::identity_field(dgrid, 2), dgrid);
  CHECK(degenerate.verdict == RegularityClass::kNeither);
  CHECK_FALSE(degenerate.regular);
  CHECK_FALSE(degenerate.fredholm);
}

TEST_CASE("boundary decomposing checks") {
  CollarOperator laplace = fixtures::laplace_circle();
  CosphereGrid grid = build_cosphere_grid(laplace.geometry, 8);

  SUBCASE("Dirichlet fails at symbol level with the expected commutator") {
    BoundaryDecomposingReport rep =
        boundary_decomposing_check(laplace, fixtures::dirichlet_field(grid), grid);
    CHECK_FALSE(rep.pass);
    // [P_D, p_plus] has entries of magnitude 1/2 off the diagonal
    CHECK(rep.max_commutator_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  }

  SUBCASE("chi^+ on the first-order pair passes at symbol level") {
    CollarOperator dirac = fixtures::dirac2_circle();
    CosphereGrid dgrid = build_cosphere_grid(dirac.geometry, 8);
    BoundaryDecomposingReport rep =
        boundary_decomposing_check(dirac, p_plus_field(dirac, dgrid), dgrid);
    CHECK(rep.pass);
    CHECK(rep.max_commutator_norm <= 1e-10);
  }

  SUBCASE("Fourier tier: P_zeta passes, Dirichlet fails, chi^+ on D_alpha passes") {
    FourierModeOperator lap_model = FourierModeOperator::laplace(1.0);
    const int trunc = 48;
    CalderonModes pc = calderon_modes(lap_model, trunc);
    DtnModes dtn = dtn_modes(lap_model, trunc);

    FourierModeData zeta{pc.modes, pc.projectors, dtn.p_zeta};
    BoundaryDecomposingReport rep_zeta =
        boundary_decomposing_check(laplace, fixtures::dirichlet_field(grid), grid, zeta);
    CHECK(rep_zeta.pass);
    REQUIRE(rep_zeta.fourier_exponent.has_value());
    CHECK(*rep_zeta.fourier_exponent <= -2.0 + 0.1);

    std::vector<CMatrix> dirichlet_modes(pc.modes.size());
    CMatrix pd = CMatrix::Zero(2, 2);
    pd(0, 0) = 1.0;
    for (auto& m : dirichlet_modes) m = pd;
    FourierModeData dir{pc.modes, pc.projectors, dirichlet_modes};
    BoundaryDecomposingReport rep_dir =
        boundary_decomposing_check(laplace, fixtures::dirichlet_field(grid), grid, dir);
    CHECK_FALSE(rep_dir.pass);
    CHECK(*rep_dir.fourier_exponent >= -0.5);

    FourierModeOperator da = FourierModeOperator::d_alpha(AlphaProfile{"cubic", 1.0});
    CalderonModes pca = calderon_modes(da, trunc);
    AdaptedBoundaryOp a = adapted_boundary_operator(da, trunc);
    std::vector<CMatrix> chi = chi_plus(a.a, a.modes, 0.5);
    CollarOperator dirac = fixtures::dirac2_circle();
    CosphereGrid dgrid = build_cosphere_grid(dirac.geometry, 8);
    FourierModeData aps{pca.modes, pca.projectors, chi};
    BoundaryDecomposingReport rep_aps =
        boundary_decomposing_check(dirac, p_plus_field(dirac, dgrid), dgrid, aps);
    CHECK(rep_aps.pass);
    CHECK(*rep_aps.fourier_exponent <= -0.9);
  }
}

TEST_CASE("adjoint symmetry of the SL verdict") {
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 8);
  struct Probe {
    CollarOperator op;
    ProjectorField field;
    bool expect;
  };
  CollarOperator laplace = fixtures::laplace_circle();
  CollarOperator dirac = fixtures::dirac2_circle();
  std::vector<Probe> probes;
  probes.push_back({laplace, fixtures::dirichlet_field(grid), true});
  probes.push_back({laplace, fixtures::neumann_field(grid), true});
  probes.push_back({dirac, p_plus_field(dirac, grid), true});
  probes.push_back({dirac, fixtures::identity_field(grid, 2), false});
  for (const Probe& probe : probes) {
    CollarOperator dag = formal_adjoint_collar(probe.op);
    GreenMatrices g = green_matrices(probe.op);
    GreenMatrices gd = green_matrices(dag);
    ProjectorField pdag = adjoint_condition_symbol(g, probe.field, gd, grid);
    EllipticityReport forward = sl_check_symbol(probe.op, probe.field, grid);
    EllipticityReport backward = sl_check_ode(dag, pdag, grid);
    CHECK(forward.elliptic == probe.expect);
    CHECK(backward.elliptic == probe.expect);
  }
}

TEST_CASE("margins move continuously under small conjugations") {
  CollarOperator laplace = fixtures::laplace_circle();
  CosphereGrid grid = build_cosphere_grid(laplace.geometry, 8);
  ProjectorField base = fixtures::dirichlet_field(grid);
  EllipticityReport ref = sl_check_symbol(laplace, base, grid);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix r(2, 2);
    for (int i = 0; i < 4; ++i) r(i / 2, i % 2) = Complex(u(rng), u(rng));
    CMatrix s = CMatrix::Identity(2, 2) + 0.02 * r;
    CMatrix conj = s * base.values[0] * s.inverse();
    double delta = (conj - base.values[0]).norm();
    ProjectorField moved = constant_projector(grid, conj, 1e-6);
    EllipticityReport rep = sl_check_symbol(laplace, moved, grid);
    CHECK(std::abs(rep.min_singular_value - ref.min_singular_value) <= delta + 1e-12);
    if (ref.min_singular_value > delta + ref.tolerance) CHECK(rep.elliptic);
  }
}

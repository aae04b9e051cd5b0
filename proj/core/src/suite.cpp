#include "calderon/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "calderon/bessel.hpp"
#include "calderon/calderon_symbol.hpp"
#include "calderon/disc.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/green.hpp"
#include "calderon/lopatinskii.hpp"
#include "calderon/report.hpp"
#include "calderon/weyl.hpp"

namespace calderon {

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
  SuiteResult result;

  void run(int id, const std::string& name,
           const std::function<void(CriterionResult&)>& body) {
    CriterionResult c;
    c.id = id;
    c.name = name;
    auto t0 = Clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    result.criteria.push_back(c);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// p_plus of the Laplace fixture at tangential covector {t}, conjugated into
// the outward-jet display convention.
CMatrix laplace_display_matrix(const CollarOperator& laplace, double t) {
  CospherePoint p{{0.0}, {t}};
  CMatrix p_plus = boundary_ode_split(laplace, p).p_plus;
  CMatrix conj = outward_jet_conjugation(laplace.m, laplace.rank_in());
  return conj * p_plus * conj.inverse();
}

}  // namespace

std::string format_criterion_line(const CriterionResult& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name
     << "  measured=" << fmt(c.measured) << " threshold=" << fmt(c.threshold);
  if (!c.detail.empty()) os << "  (" << c.detail << ")";
  return os.str();
}

SuiteResult run_acceptance_suite(std::uint64_t seed, bool quick) {
  Runner runner;
  runner.result.seed = seed;
  auto t_start = Clock::now();

  const int grid_res = quick ? 16 : 64;  // 64 base points -> 128 grid points
  const int disc_trunc = quick ? 64 : 256;
  const int index_trunc = quick ? 64 : 128;
  const int eig_count = quick ? 600 : 2000;

  // 1. cross-method agreement of the two Calderon-symbol routes
  runner.run(1, "calderon symbol cross-method", [&](CriterionResult& c) {
    c.threshold = 1e-8;
    double worst = 0.0;
    int fixture_count = 0;
    for (const CollarOperator& op : fixtures::standard_fixtures()) {
      CosphereGrid grid = build_cosphere_grid(op.geometry, grid_res);
      for (const auto& rep : symbol_sweep(op, grid, true))
        worst = std::max(worst, rep.cross_method_residual);
      ++fixture_count;
    }
    c.measured = worst;
    c.pass = worst <= c.threshold;
    c.detail = std::to_string(fixture_count) + " fixtures x " +
               std::to_string(2 * grid_res) + " grid points";
  });

  // 2. textbook matrix regression for the Laplace-type fixture
  runner.run(2, "paper matrix regression (Laplace)", [&](CriterionResult& c) {
    c.threshold = 1e-9;
    CollarOperator laplace = fixtures::laplace_circle();
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      CMatrix display = laplace_display_matrix(laplace, t);
      CMatrix expected(2, 2);
      expected << 0.5, 0.5 / t, 0.5 * t, 0.5;
      worst = std::max(worst, (display - expected).cwiseAbs().maxCoeff());

      CMatrix pd = CMatrix::Zero(2, 2);
      pd(0, 0) = 1.0;
      CMatrix comm = pd * display - display * pd;
      CMatrix comm_expected(2, 2);
      comm_expected << 0.0, 0.5 / t, -0.5 * t, 0.0;
      worst = std::max(worst, (comm - comm_expected).cwiseAbs().maxCoeff());
    }
    c.measured = worst;
    c.pass = worst <= c.threshold;
    c.detail = "sigma0(P_C) and [P_D, P_C] after diag((-i)^j) conjugation";
  });

  // 3. adjoint duality p_+(D) = a^{-1} p_-(D^dag)^* a on all fixtures
  runner.run(3, "adjoint duality identity", [&](CriterionResult& c) {
    c.threshold = 1e-8;
    double worst = 0.0;
    for (const CollarOperator& op : fixtures::standard_fixtures()) {
      CollarOperator dag = formal_adjoint_collar(op);
      GreenMatrices g = green_matrices(op);
      CosphereGrid grid = build_cosphere_grid(op.geometry, quick ? 8 : 16);
      for (const CospherePoint& p : grid.points) {
        CMatrix a = g.eval_a(p);
        CMatrix p_plus = boundary_ode_split(op, p).p_plus;
        CMatrix p_minus_dag =
            identity_like(p_plus) - boundary_ode_split(dag, p).p_plus;
        CMatrix rhs = a.inverse() * p_minus_dag.adjoint() * a;
        worst = std::max(worst, (p_plus - rhs).norm());
      }
    }
    c.measured = worst;
    c.pass = worst <= c.threshold;
  });

  // 4. Shapiro-Lopatinskii verdicts, both methods
  runner.run(4, "SL and regularity verdicts", [&](CriterionResult& c) {
    CollarOperator laplace = fixtures::laplace_circle();
    CollarOperator dirac = fixtures::dirac2_circle();
    CosphereGrid lgrid = build_cosphere_grid(laplace.geometry, grid_res);
    CosphereGrid dgrid = build_cosphere_grid(dirac.geometry, grid_res);

    struct Case {
      const char* name;
      const CollarOperator* op;
      const CosphereGrid* grid;
      ProjectorField field;
      bool expect_elliptic;
    };
    std::vector<Case> cases;
    cases.push_back({"dirichlet", &laplace, &lgrid, fixtures::dirichlet_field(lgrid), true});
    cases.push_back({"neumann", &laplace, &lgrid, fixtures::neumann_field(lgrid), true});
    cases.push_back({"aps", &dirac, &dgrid, p_plus_field(dirac, dgrid), true});
    cases.push_back({"calderon_complement", &laplace, &lgrid,
                     p_plus_field(laplace, lgrid), true});
    cases.push_back({"rank_deficient", &dirac, &dgrid,
                     fixtures::identity_field(dgrid, 2), false});

    bool all_ok = true;
    double min_margin = 1e300;
    std::string failures;
    for (const Case& cs : cases) {
      RegularityReport rep = regularity_verdict(*cs.op, cs.field, *cs.grid);
      bool verdicts_agree =
          rep.symbol_report.elliptic == rep.ode_report.elliptic;
      bool ok = verdicts_agree && rep.sl_elliptic == cs.expect_elliptic &&
                rep.regular == cs.expect_elliptic && rep.fredholm == cs.expect_elliptic;
      if (cs.expect_elliptic)
        min_margin = std::min(min_margin, rep.symbol_report.min_singular_value);
      if (!ok) {
        all_ok = false;
        failures += std::string(" ") + cs.name;
      }
    }
    c.measured = min_margin;
    c.threshold = kEllipticityTol;
    c.pass = all_ok;
    c.detail = all_ok ? "dirichlet/neumann/aps/complement elliptic, counterexample not"
                      : ("failed:" + failures);
  });

  // 5. unit-disc case study
  runner.run(5, "unit-disc case study", [&](CriterionResult& c) {
    c.threshold = 1e-3;
    double worst_rel = 0.0;

    // P_C = chi^+(A) exactly per mode for D_0, |n| >= 1
    FourierModeOperator d0 = FourierModeOperator::d0();
    AdaptedBoundaryOp a = adapted_boundary_operator(d0, disc_trunc);
    std::vector<CMatrix> chi = chi_plus(a.a, a.modes, 0.5);
    CalderonModes pc = calderon_modes(d0, disc_trunc);
    double eq_residual = 0.0;
    for (std::size_t i = 0; i < pc.modes.size(); ++i) {
      if (pc.modes[i] == 0) continue;  // finite-rank mode-0 convention
      eq_residual = std::max(eq_residual, (pc.projectors[i] - chi[i]).norm());
    }
    bool eq_ok = eq_residual <= 1e-10;

    // alpha'(1) = 1: scaled difference converges to +-1/4 at (2,1)/(1,2)
    CaseStudyReport cs = d_alpha_case_study(AlphaProfile{"cubic", 1.0}, disc_trunc);
    double q = cs.alpha_slope / 4.0;
    worst_rel = std::max(worst_rel, std::abs(cs.limit_pos(1, 0).real() + q) / q);
    worst_rel = std::max(worst_rel, std::abs(cs.limit_neg(0, 1).real() - q) / q);
    worst_rel = std::max(worst_rel, std::abs(cs.limit_pos(0, 1)) / q);
    worst_rel = std::max(worst_rel, std::abs(cs.limit_neg(1, 0)) / q);

    // alpha'(1) = 0: scaled difference at the top mode below 1e-3
    CaseStudyReport flat_cs = d_alpha_case_study(AlphaProfile{"flat", 1.0}, disc_trunc);
    double flat_tail = flat_cs.scaled_tail.back().second;

    c.measured = std::max({worst_rel, flat_tail, eq_ok ? 0.0 : 1.0});
    c.pass = eq_ok && worst_rel <= 1e-3 && flat_tail <= 1e-3;
    c.detail = "chi+/P_C residual " + fmt(eq_residual) + ", limit rel err " +
               fmt(worst_rel) + ", flat tail " + fmt(flat_tail);
  });

  // 6. compactness failure witness
  runner.run(6, "compactness failure windows", [&](CriterionResult& c) {
    AlphaProfile profile{"cubic", 1.0};
    std::vector<int> starts = quick ? std::vector<int>{16, 32}
                                    : std::vector<int>{32, 64, 128};
    std::vector<double> bounds = compactness_failure_windows(profile, starts);
    double needed = 0.8 * (profile.boundary_slope() / 4.0);
    double worst = 1e300;
    for (double b : bounds) worst = std::min(worst, b);
    c.measured = worst;
    c.threshold = needed;
    c.pass = worst >= needed;
  });

  // 7. Fredholm index formula
  runner.run(7, "APS index formula", [&](CriterionResult& c) {
    FourierModeOperator d0 = FourierModeOperator::d0();
    bool ok = true;
    std::string detail;
    for (int k = -3; k <= 3; ++k) {
      RealizedIndexReport rep = realized_index(d0, k, index_trunc);
      if (rep.index != k || !rep.stabilized) {
        ok = false;
        detail += " K=" + std::to_string(k) + "->" + std::to_string(rep.index);
      }
    }
    c.measured = ok ? 0.0 : 1.0;
    c.threshold = 0.0;
    c.pass = ok;
    c.detail = ok ? "index == K for K in {-3..3}, stabilized" : detail;
  });

  // 8. graphical decompositions
  runner.run(8, "graphical decompositions", [&](CriterionResult& c) {
    c.threshold = 1e-8;
    int n = quick ? 24 : 48;
    double s_top = 1.5;  // m - 1/2 for the second-order model
    FourierModeOperator lap = FourierModeOperator::laplace(1.0);
    DtnModes dtn = dtn_modes(lap, n);

    TruncatedSubspace dir = coordinate_subspace(
        lap, n, s_top, [](int, int slot) { return slot == 1; });
    GraphicalDecomposition gd_dir = graphical_decomposition(lap, dir, dtn.p_zeta, n);

    TruncatedSubspace robin = robin_subspace(lap, n, 1.0, s_top);
    GraphicalDecomposition gd_robin = graphical_decomposition(lap, robin, dtn.p_zeta, n);

    FourierModeOperator d0 = FourierModeOperator::d0();
    AdaptedBoundaryOp a = adapted_boundary_operator(d0, n);
    std::vector<CMatrix> p_aps = chi_plus(a.a, a.modes, -0.5);
    TruncatedSubspace aps = aps_subspace(d0, n, 0, 0.5);
    GraphicalDecomposition gd_aps = graphical_decomposition(d0, aps, p_aps, n);

    double worst = std::max({gd_dir.reconstruction_gap, gd_dir.adjoint_gap,
                             gd_robin.reconstruction_gap, gd_robin.adjoint_gap,
                             gd_aps.reconstruction_gap, gd_aps.adjoint_gap});
    double g_aps = gd_aps.g_matrix.size() ? gd_aps.g_matrix.norm() : 0.0;
    c.measured = worst;
    c.pass = worst <= c.threshold && g_aps <= 1e-12 && gd_aps.dim_w_plus == 0;
    c.detail = "dirichlet/robin/aps gaps, aps g-norm " + fmt(g_aps);
  });

  // 9. Weyl law
  runner.run(9, "Weyl constants and spectra", [&](CriterionResult& c) {
    WeylInput disc = WeylInput::unit_disc_laplace();
    WeylConstantReport wc = weyl_constant(disc, 64);
    double cd_err = std::abs(wc.c_d - 4.0) / 4.0;

    std::vector<double> eigs = model_eigenvalues(disc, WeylBc::kDirichlet, eig_count);
    AsymptoticFit fit = asymptotic_fit(eigs, disc.m, disc.n);
    double fit_err = std::abs(fit.c_hat - 4.0) / 4.0;

    WeylInput interval = WeylInput::interval_laplace(M_PI);
    WeylConstantReport wci = weyl_constant(interval, 8);
    std::vector<double> ieigs = model_eigenvalues(interval, WeylBc::kDirichlet, 1000);
    AsymptoticFit ifit = asymptotic_fit(ieigs, interval.m, interval.n);
    double interval_err =
        std::max(std::abs(wci.c_d - 1.0), std::abs(ifit.c_hat - 1.0));

    c.measured = std::max({cd_err, fit_err / 20.0, interval_err / 5e-3});
    c.threshold = 1e-6;  // headline: quadrature vs closed form
    c.pass = cd_err <= 1e-6 && fit_err <= 0.02 && interval_err <= 5e-3;
    c.detail = "c_D err " + fmt(cd_err) + ", disc fit err " + fmt(fit_err) +
               ", interval err " + fmt(interval_err);
  });

  // 10. infinite-kernel growth at truncation
  runner.run(10, "max-kernel growth", [&](CriterionResult& c) {
    std::vector<Complex> lambdas{Complex(0, 0), Complex(1, 0), Complex(0, 1),
                                 Complex(2, -3)};
    int base = quick ? 12 : 24;
    bool ok = true;
    int min_growth = 1 << 30;
    for (const FourierModeOperator& model :
         {FourierModeOperator::d0(), FourierModeOperator::laplace(1.0)}) {
      for (Complex lambda : lambdas) {
        std::vector<int> dims = max_kernel_growth(model, lambda, {base, 2 * base});
        int growth = dims[1] - dims[0];
        min_growth = std::min(min_growth, growth);
        if (growth < base / 2) ok = false;
      }
    }
    c.measured = min_growth;
    c.threshold = base / 2.0;
    c.pass = ok;
  });

  // 11. Poincare constants
  runner.run(11, "Poincare / well-posedness", [&](CriterionResult& c) {
    int cells = quick ? 600 : 1600;
    FourierModeOperator lap = FourierModeOperator::laplace(1.0);
    PoincareReport lp = poincare_constant(lap, quick ? 16 : 32, seed, std::nullopt, cells);
    double j01 = bessel_j_zeros_upto(0, 4.0, {}).front();
    double expected = 1.0 + j01 * j01;
    double rel = std::abs(lp.sigma_min - expected) / expected;

    double spread = 0.0;
    for (auto& [nn, sg] : lp.per_truncation)
      spread = std::max(spread, std::abs(sg - lp.sigma_min) / lp.sigma_min);

    FourierModeOperator d0 = FourierModeOperator::d0();
    PoincareReport dp = poincare_constant(d0, quick ? 16 : 32, seed, std::nullopt, cells);
    double d0_spread = 0.0;
    for (auto& [nn, sg] : dp.per_truncation)
      d0_spread = std::max(d0_spread, std::abs(sg - dp.sigma_min) / dp.sigma_min);

    c.measured = rel;
    c.threshold = 0.01;
    c.pass = rel <= 0.01 && spread <= 0.02 && dp.sigma_min > 0 && d0_spread <= 0.02 &&
             lp.random_vectors_ok && dp.random_vectors_ok;
    c.detail = "1 + j01^2 rel err " + fmt(rel) + ", spreads " + fmt(spread) + "/" +
               fmt(d0_spread);
  });

  // 12. determinism
  runner.run(12, "byte-level determinism", [&](CriterionResult& c) {
    std::string first = determinism_probe_json(seed);
    std::string second = determinism_probe_json(seed);
    c.measured = first == second ? 0.0 : 1.0;
    c.threshold = 0.0;
    c.pass = first == second;
    c.detail = "two probe reports, " + std::to_string(first.size()) + " bytes";
  });

  runner.result.total_seconds =
      std::chrono::duration<double>(Clock::now() - t_start).count();
  runner.result.all_pass = true;
  for (const CriterionResult& c : runner.result.criteria)
    if (!c.pass) runner.result.all_pass = false;
  return runner.result;
}

}  // namespace calderon

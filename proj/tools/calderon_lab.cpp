// calderon-lab: command-line front end for the boundary-value-problem
// symbol laboratory. Exit codes: 0 on success (verdicts are results, not
// failures), 2 on malformed input, 3 on numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "calderon/calderon_symbol.hpp"
#include "calderon/disc.hpp"
#include "calderon/errors.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/green.hpp"
#include "calderon/lopatinskii.hpp"
#include "calderon/report.hpp"
#include "calderon/suite.hpp"
#include "calderon/weyl.hpp"
#include "json.hpp"

namespace {

using namespace calderon;
using nlohmann::json;

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json point_json(const CospherePoint& p) {
  return json{{"base", p.base_coords}, {"covector", p.covector}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(path, "cannot open output file");
  out << text << "\n";
}

struct GridSpec {
  Geometry geometry;
  int resolution;
};

GridSpec parse_grid(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InputError("--grid", "expected geometry:resolution, e.g. circle:64");
  return {geometry_from_string(text.substr(0, colon)),
          std::stoi(text.substr(colon + 1))};
}

std::map<std::string, double> parse_tol_overrides(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw InputError("--tol-override", "expected key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return out;
}

ProjectorField load_projector(const std::string& path, const CollarOperator& op,
                              const CosphereGrid& grid, double tol) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open projector file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path, std::string("JSON parse error: ") + e.what());
  }
  if (!j.contains("kind")) throw InputError(path, "missing field 'kind'");
  std::string kind = j["kind"].get<std::string>();
  int dim = op.rank_in() * op.m;
  if (kind == "builtin") {
    std::string name = j.value("name", "");
    if (name == "dirichlet") return fixtures::dirichlet_field(grid);
    if (name == "neumann") return fixtures::neumann_field(grid);
    if (name == "identity") return fixtures::identity_field(grid, dim);
    if (name == "zero") return fixtures::zero_field(grid, dim);
    if (name == "p_plus") return p_plus_field(op, grid, tol);
    throw InputError(path, "unknown builtin projector '" + name + "'");
  }
  if (kind == "constant") {
    if (!j.contains("matrix")) throw InputError(path, "missing field 'matrix'");
    const json& mj = j["matrix"];
    int rows = static_cast<int>(mj.size());
    if (rows != dim) throw InputError(path, "projector size does not match rank*m");
    CMatrix p(rows, rows);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(mj[r].size()) != rows)
        throw InputError(path, "projector matrix must be square");
      for (int c = 0; c < rows; ++c)
        p(r, c) = Complex(mj[r][c][0].get<double>(), mj[r][c][1].get<double>());
    }
    ProjectorField field = constant_projector(grid, p, tol);
    field.validate(grid);
    return field;
  }
  throw InputError(path, "kind must be 'builtin' or 'constant'");
}

json base_report() {
  json j;
  j["tool"] = tool_version();
  j["conventions"] = json::parse(convention_flags_json());
  return j;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_symbol(const std::string& op_path, const std::string& grid_spec,
               const std::string& method, const std::string& out_path) {
  CollarOperator op = load_operator_json(op_path);
  GridSpec gs = parse_grid(grid_spec);
  CosphereGrid grid = build_cosphere_grid(gs.geometry, gs.resolution);
  bool with_residue = method == "both" || method == "residue";

  auto reports = symbol_sweep(op, grid, with_residue);
  json j = base_report();
  j["operator"] = op.name;
  j["grid"] = {{"geometry", to_string(gs.geometry)}, {"resolution", gs.resolution}};
  j["method"] = method;
  json points = json::array();
  double worst = 0.0;
  for (const auto& rep : reports) {
    json pj;
    pj["point"] = point_json(rep.split.point);
    json roots = json::array();
    for (Complex z : rep.split.roots) roots.push_back(complex_json(z));
    pj["roots"] = roots;
    pj["real_axis_margin"] = rep.split.real_axis_margin;
    pj["dim_plus"] = rep.split.dim_plus();
    pj["p_plus"] = matrix_json(rep.split.p_plus);
    if (with_residue) {
      pj["p_plus_residue"] = matrix_json(rep.p_plus_residue_value);
      pj["cross_method_residual"] = rep.cross_method_residual;
      worst = std::max(worst, rep.cross_method_residual);
    }
    points.push_back(pj);
  }
  j["points"] = points;
  if (with_residue) j["max_cross_method_residual"] = worst;
  write_text(out_path, j.dump(2));
  std::cout << "wrote " << out_path;
  if (with_residue) std::cout << " (max cross-method residual " << worst << ")";
  std::cout << "\n";
  return 0;
}

int cmd_sl_check(const std::string& op_path, const std::string& proj_path,
                 const std::string& grid_spec, const std::string& out_path,
                 const std::map<std::string, double>& tols) {
  CollarOperator op = load_operator_json(op_path);
  GridSpec gs = parse_grid(grid_spec);
  CosphereGrid grid = build_cosphere_grid(gs.geometry, gs.resolution);
  double ptol = tols.count("projector_idempotence") ? tols.at("projector_idempotence")
                                                    : kProjectorTol;
  double etol = tols.count("ellipticity_margin") ? tols.at("ellipticity_margin")
                                                 : kEllipticityTol;
  ProjectorField field = load_projector(proj_path, op, grid, ptol);
  RegularityReport rep = regularity_verdict(op, field, grid, etol);

  json j = base_report();
  j["operator"] = op.name;
  j["verdict"] = rep.sl_elliptic ? "elliptic" : "not_elliptic";
  j["regular"] = rep.regular;
  j["fredholm"] = rep.fredholm;
  j["symbol_method"] = {{"min_singular_value", rep.symbol_report.min_singular_value},
                        {"tolerance", rep.symbol_report.tolerance},
                        {"witness", point_json(rep.symbol_report.witness)}};
  j["ode_method"] = {{"min_singular_value", rep.ode_report.min_singular_value},
                     {"tolerance", rep.ode_report.tolerance},
                     {"witness", point_json(rep.ode_report.witness)}};
  j["methods_agree"] = rep.symbol_report.elliptic == rep.ode_report.elliptic;
  write_text(out_path, j.dump(2));
  std::cout << "verdict: " << j["verdict"].get<std::string>() << " (margin "
            << rep.symbol_report.min_singular_value << ")\n";
  return 0;
}

int cmd_adjoint_bc(const std::string& op_path, const std::string& proj_path,
                   const std::string& grid_spec, const std::string& out_path,
                   const std::map<std::string, double>& tols) {
  CollarOperator op = load_operator_json(op_path);
  GridSpec gs = parse_grid(grid_spec);
  CosphereGrid grid = build_cosphere_grid(gs.geometry, gs.resolution);
  double ptol = tols.count("projector_idempotence") ? tols.at("projector_idempotence")
                                                    : kProjectorTol;
  ProjectorField field = load_projector(proj_path, op, grid, ptol);

  CollarOperator dag = formal_adjoint_collar(op);
  GreenMatrices g = green_matrices(op);
  GreenMatrices gd = green_matrices(dag);
  ProjectorField pdag = adjoint_condition_symbol(g, field, gd, grid);
  AdjointDualityReport duality = adjoint_duality_check(op, dag, grid);

  json j = base_report();
  j["operator"] = op.name;
  j["idempotence_defect"] = pdag.max_idempotence_defect();
  j["duality"] = {{"pass", duality.pass},
                  {"pairing_residual", duality.pairing_residual},
                  {"calderon_residual", duality.calderon_residual},
                  {"tolerance", duality.tolerance}};
  json values = json::array();
  for (std::size_t i = 0; i < pdag.size(); ++i) {
    values.push_back(
        {{"point", point_json(grid.points[i])}, {"p_dagger", matrix_json(pdag.values[i])}});
  }
  j["values"] = values;
  write_text(out_path, j.dump(2));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_disc(const std::string& model_name, const std::string& alpha_spec, int trunc,
             double lambda_shift, const std::string& report_path,
             const std::string& csv_path) {
  json j = base_report();
  j["model"] = model_name;
  j["trunc"] = trunc;

  std::string csv = "n,entry,re,im\n";
  if (model_name == "d0" || model_name == "d_alpha") {
    AlphaProfile profile =
        model_name == "d0" ? AlphaProfile{"cubic", 0.0} : AlphaProfile::parse(alpha_spec);
    FourierModeOperator model = model_name == "d0"
                                    ? FourierModeOperator::d0()
                                    : FourierModeOperator::d_alpha(profile);
    AdaptedBoundaryOp a = adapted_boundary_operator(model, trunc);
    std::vector<CMatrix> chi = chi_plus(a.a, a.modes, 0.5);
    CalderonModes pc = calderon_modes(model, trunc);

    double eq_residual = 0.0;
    for (std::size_t i = 0; i < pc.modes.size(); ++i) {
      if (pc.modes[i] == 0) continue;
      eq_residual = std::max(eq_residual, (pc.projectors[i] - chi[i]).norm());
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          Complex z = pc.projectors[i](r, c);
          csv += std::to_string(pc.modes[i]) + ",P_C[" + std::to_string(r) +
                 std::to_string(c) + "]," + std::to_string(z.real()) + "," +
                 std::to_string(z.imag()) + "\n";
        }
    }
    j["chi_plus_equality_residual"] = eq_residual;
    j["mode0_convention"] = pc.mode0_convention;
    j["min_transversality"] = pc.min_transversality;

    if (model_name == "d_alpha") {
      CaseStudyReport cs = d_alpha_case_study(profile, trunc);
      j["alpha"] = {{"shape", profile.shape},
                    {"scale", profile.scale},
                    {"boundary_slope", profile.boundary_slope()}};
      j["scaled_limit_pos"] = json::parse(matrix_json(cs.limit_pos).dump());
      j["scaled_limit_neg"] = json::parse(matrix_json(cs.limit_neg).dump());
      j["extrapolation_spread"] = cs.extrapolation_spread;
      json tail = json::array();
      for (auto& [n, v] : cs.scaled_tail) tail.push_back({{"n", n}, {"norm", v}});
      j["scaled_tail"] = tail;
    }
  } else if (model_name == "laplace") {
    FourierModeOperator model = FourierModeOperator::laplace(lambda_shift);
    DtnModes dtn = dtn_modes(model, trunc);
    CalderonModes pc = calderon_modes(model, trunc);
    j["lambda_shift"] = lambda_shift;
    j["min_transversality"] = pc.min_transversality;
    json modes = json::array();
    for (std::size_t i = 0; i < dtn.modes.size(); ++i) {
      modes.push_back({{"n", dtn.modes[i]}, {"lambda_dn", dtn.lambda_dn[i]}});
      csv += std::to_string(dtn.modes[i]) + ",Lambda_DN," +
             std::to_string(dtn.lambda_dn[i]) + ",0\n";
    }
    j["dtn"] = modes;
  } else {
    throw InputError("--model", "expected d0, d_alpha or laplace");
  }

  write_text(report_path, j.dump(2));
  if (!csv_path.empty()) write_text(csv_path, csv);
  std::cout << "wrote " << report_path << "\n";
  return 0;
}

int cmd_index(const std::string& model_name, int aps_cut, int trunc,
              const std::string& out_path) {
  if (model_name != "d0")
    throw InputError("--model", "index tier currently covers the d0 model");
  FourierModeOperator model = FourierModeOperator::d0();
  RealizedIndexReport rep = realized_index(model, aps_cut, trunc);

  json j = base_report();
  j["model"] = model_name;
  j["aps_cut"] = aps_cut;
  j["trunc"] = trunc;
  j["index"] = rep.index;
  j["dim_intersection"] = rep.pair.dim_intersection;
  j["codim_sum"] = rep.pair.codim_sum;
  j["dim_ker_min"] = rep.dim_ker_min;
  j["dim_ker_min_dagger"] = rep.dim_ker_min_dagger;
  j["stabilized"] = rep.stabilized;
  json st = json::array();
  for (auto& [nn, idx] : rep.stabilization) st.push_back({{"trunc", nn}, {"index", idx}});
  j["stabilization"] = st;
  if (!out_path.empty()) write_text(out_path, j.dump(2));
  std::cout << "index = " << rep.index << (rep.stabilized ? " (stabilized)" : " (WARNING: not stabilized)")
            << "\n";
  return 0;
}

int cmd_weyl(const std::string& manifold, const std::string& bc_name, int count,
             double robin_c, double length, const std::string& out_path,
             const std::string& csv_path) {
  WeylInput w;
  WeylManifold mf = weyl_manifold_from_string(manifold);
  switch (mf) {
    case WeylManifold::kInterval: w = WeylInput::interval_laplace(length); break;
    case WeylManifold::kRectangle: w = WeylInput::rectangle_laplace(M_PI, M_PI); break;
    case WeylManifold::kUnitDisc: w = WeylInput::unit_disc_laplace(); break;
  }
  WeylBc bc = weyl_bc_from_string(bc_name);
  WeylConstantReport wc = weyl_constant(w, 64);
  std::vector<double> eigs = model_eigenvalues(w, bc, count, robin_c);
  AsymptoticFit fit = asymptotic_fit(eigs, w.m, w.n);

  json j = base_report();
  j["manifold"] = manifold;
  j["bc"] = bc_name;
  j["count"] = count;
  j["c_d"] = wc.c_d;
  j["c_d_convergence"] = wc.convergence;
  j["min_symbol_eigenvalue"] = wc.min_symbol_eigenvalue;
  j["c_hat"] = fit.c_hat;
  j["window_medians"] = fit.window_medians;
  j["drift"] = fit.drift;
  if (!out_path.empty()) write_text(out_path, j.dump(2));
  if (!csv_path.empty()) {
    std::string csv = "k,lambda\n";
    for (std::size_t k = 0; k < eigs.size(); ++k)
      csv += std::to_string(k + 1) + "," + std::to_string(eigs[k]) + "\n";
    write_text(csv_path, csv);
  }
  std::cout << "c_D = " << wc.c_d << ", fitted c_hat = " << fit.c_hat << "\n";
  return 0;
}

int cmd_suite(std::uint64_t seed, bool quick, const std::string& out_path,
              const std::string& fixtures_dir) {
  if (!fixtures_dir.empty()) {
    for (const CollarOperator& op : fixtures::standard_fixtures())
      save_operator_json(op, fixtures_dir + "/" + op.name + ".json");
    save_operator_json(fixtures::laplace_torus(), fixtures_dir + "/laplace_torus.json");
    std::cout << "fixtures written to " << fixtures_dir << "\n";
  }
  SuiteResult result = run_acceptance_suite(seed, quick);
  for (const CriterionResult& c : result.criteria)
    std::cout << format_criterion_line(c) << "\n";
  std::cout << (result.all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << " ("
            << result.total_seconds << " s)\n";
  if (!out_path.empty()) write_text(out_path, suite_report_json(result, true));
  return result.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calderon-lab: Calderon projector symbols, boundary condition "
               "verdicts, disc case studies and Weyl constants"};
  app.require_subcommand(1);

  std::string op_path, proj_path, grid_spec = "circle:64", out_path, csv_path;
  std::string method = "both", model_name = "d0", alpha_spec = "cubic:1.0";
  std::string manifold = "disc", bc_name = "dirichlet", fixtures_dir;
  std::vector<std::string> tol_kvs;
  int trunc = 128, aps_cut = 0, count = 2000;
  double lambda_shift = 1.0, robin_c = 1.0, length = M_PI;
  std::uint64_t seed = 7;
  bool quick = false;

  CLI::App* symbol = app.add_subcommand("symbol", "per-point Calderon symbol data");
  symbol->add_option("--op", op_path)->required();
  symbol->add_option("--grid", grid_spec);
  symbol->add_option("--method", method)->check(CLI::IsMember({"both", "companion", "residue"}));
  symbol->add_option("--out", out_path)->required();

  CLI::App* sl = app.add_subcommand("sl-check", "Shapiro-Lopatinskii verdict");
  sl->add_option("--op", op_path)->required();
  sl->add_option("--proj", proj_path)->required();
  sl->add_option("--grid", grid_spec);
  sl->add_option("--json", out_path)->required();
  sl->add_option("--tol-override", tol_kvs);

  CLI::App* adj = app.add_subcommand("adjoint-bc", "adjoint boundary-condition symbol");
  adj->add_option("--op", op_path)->required();
  adj->add_option("--proj", proj_path)->required();
  adj->add_option("--grid", grid_spec);
  adj->add_option("--out", out_path)->required();
  adj->add_option("--tol-override", tol_kvs);

  CLI::App* disc = app.add_subcommand("disc", "exact Fourier-tier disc models");
  disc->add_option("--model", model_name);
  disc->add_option("--alpha-profile", alpha_spec);
  disc->add_option("--trunc", trunc);
  disc->add_option("--lambda-shift", lambda_shift);
  disc->add_option("--report", out_path)->required();
  disc->add_option("--csv", csv_path);

  CLI::App* index = app.add_subcommand("index", "realized Fredholm index");
  index->add_option("--model", model_name);
  index->add_option("--aps-cut", aps_cut);
  index->add_option("--trunc", trunc);
  index->add_option("--json", out_path);

  CLI::App* weyl = app.add_subcommand("weyl", "Weyl constants and model spectra");
  weyl->add_option("--manifold", manifold);
  weyl->add_option("--bc", bc_name);
  weyl->add_option("--count", count);
  weyl->add_option("--robin-c", robin_c);
  weyl->add_option("--length", length);
  weyl->add_option("--json", out_path);
  weyl->add_option("--csv", csv_path);

  CLI::App* suite = app.add_subcommand("suite", "full acceptance battery");
  suite->add_option("--seed", seed);
  suite->add_flag("--quick", quick);
  suite->add_option("--json", out_path);
  suite->add_option("--emit-fixtures", fixtures_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (symbol->parsed()) return cmd_symbol(op_path, grid_spec, method, out_path);
    if (sl->parsed())
      return cmd_sl_check(op_path, proj_path, grid_spec, out_path,
                          parse_tol_overrides(tol_kvs));
    if (adj->parsed())
      return cmd_adjoint_bc(op_path, proj_path, grid_spec, out_path,
                            parse_tol_overrides(tol_kvs));
    if (disc->parsed())
      return cmd_disc(model_name, alpha_spec, trunc, lambda_shift, out_path, csv_path);
    if (index->parsed()) return cmd_index(model_name, aps_cut, trunc, out_path);
    if (weyl->parsed())
      return cmd_weyl(manifold, bc_name, count, robin_c, length, out_path, csv_path);
    if (suite->parsed()) return cmd_suite(seed, quick, out_path, fixtures_dir);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

#include "calderon/report.hpp"

#include "calderon/calderon_symbol.hpp"
#include "calderon/disc.hpp"
#include "calderon/fixtures.hpp"
#include "calderon/lopatinskii.hpp"
#include "json.hpp"

namespace calderon {

using nlohmann::json;

std::string tool_version() { return "calderon-lab 0.1.0"; }

namespace {

json convention_flags() {
  json j;
  j["normal"] = "inward_unit_normal_product_measure";
  j["trace_coordinates"] = "Dt_jets";
  j["paper_display_conjugation"] = "diag((-i)^j)";
  j["disc_second_order_jets"] = "outward_radial";
  j["disc_first_order_slot1"] = "holomorphic";
  j["mode0_spectral_cut"] = 0.5;
  j["mode0_calderon"] = "szego_identity";
  j["exterior_complement"] = "riemann_sphere";
  return j;
}

}  // namespace

std::string convention_flags_json() { return convention_flags().dump(2); }

std::string suite_report_json(const SuiteResult& result, bool include_timings) {
  json j;
  j["tool"] = tool_version();
  j["seed"] = result.seed;
  j["conventions"] = convention_flags();
  j["all_pass"] = result.all_pass;
  json list = json::array();
  for (const CriterionResult& c : result.criteria) {
    json cj;
    cj["id"] = c.id;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["measured"] = c.measured;
    cj["threshold"] = c.threshold;
    cj["detail"] = c.detail;
    list.push_back(cj);
  }
  j["criteria"] = list;
  if (include_timings) {
    json meta;
    meta["total_seconds"] = result.total_seconds;
    json per = json::array();
    for (const CriterionResult& c : result.criteria) per.push_back(c.seconds);
    meta["criterion_seconds"] = per;
    j["metadata"] = meta;
  }
  return j.dump(2);
}

std::string determinism_probe_json(std::uint64_t seed) {
  json j;
  j["tool"] = tool_version();
  j["seed"] = seed;
  j["conventions"] = convention_flags();

  // a representative slice of every numerical layer, all seed-determined
  CollarOperator dirac = fixtures::dirac2_circle();
  CosphereGrid grid = build_cosphere_grid(Geometry::kCircle, 16);
  ProjectorField aps = p_plus_field(dirac, grid);
  EllipticityReport sym = sl_check_symbol(dirac, aps, grid);
  EllipticityReport ode = sl_check_ode(dirac, aps, grid);
  j["sl_symbol_margin"] = sym.min_singular_value;
  j["sl_ode_margin"] = ode.min_singular_value;

  FourierModeOperator d0 = FourierModeOperator::d0();
  PoincareReport poincare = poincare_constant(d0, 8, seed, std::nullopt, 400);
  j["poincare_sigma_min"] = poincare.sigma_min;
  j["poincare_random_ok"] = poincare.random_vectors_ok;

  CaseStudyReport cs = d_alpha_case_study(AlphaProfile{"cubic", 1.0}, 64);
  j["case_study_limit_pos_21_re"] = cs.limit_pos(1, 0).real();
  j["case_study_limit_neg_12_re"] = cs.limit_neg(0, 1).real();
  return j.dump(2);
}

}  // namespace calderon

#include <fstream>
#include <sstream>

#include "calderon/collar.hpp"
#include "calderon/errors.hpp"
#include "json.hpp"

namespace calderon {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(path, "complex values are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

SymbolMatrix parse_block(const json& j, int rows, int cols, int dim, int order,
                         const std::string& path) {
  SymbolMatrix block(rows, cols, dim);
  if (!j.is_array()) throw InputError(path, "entries must be an array");
  for (std::size_t e = 0; e < j.size(); ++e) {
    const json& entry = j[e];
    std::string epath = path + "[" + std::to_string(e) + "]";
    if (!entry.contains("row") || !entry.contains("col"))
      throw InputError(epath, "missing row/col");
    int r = entry["row"].get<int>();
    int c = entry["col"].get<int>();
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw InputError(epath, "row/col out of range");
    if (!entry.contains("monomials") || !entry["monomials"].is_array())
      throw InputError(epath, "missing monomials array");
    for (std::size_t t = 0; t < entry["monomials"].size(); ++t) {
      const json& mono = entry["monomials"][t];
      std::string mpath = epath + ".monomials[" + std::to_string(t) + "]";
      if (!mono.contains("powers") || !mono["powers"].is_array())
        throw InputError(mpath, "missing powers array");
      std::vector<int> powers;
      for (const json& p : mono["powers"]) {
        if (!p.is_number_integer()) throw InputError(mpath + ".powers", "powers must be integers");
        powers.push_back(p.get<int>());
      }
      if (static_cast<int>(powers.size()) != dim)
        throw InputError(mpath + ".powers",
                         "expected " + std::to_string(dim) + " powers for this geometry");
      if (!mono.contains("coef")) throw InputError(mpath, "missing coef");
      Complex coef = parse_complex(mono["coef"], mpath + ".coef");
      int total = 0;
      for (int p : powers) total += p;
      if (total != order)
        throw InputError(mpath, "monomial degree " + std::to_string(total) +
                                    " does not match coefficient order " +
                                    std::to_string(order));
      block.add_term(r, c, std::move(powers), coef);
    }
  }
  return block;
}

CMatrix parse_matrix(const json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw InputError(path, "matrix row count mismatch");
  CMatrix out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw InputError(path, "matrix column count mismatch");
    for (int c = 0; c < cols; ++c)
      out(r, c) = parse_complex(j[r][c], path + "[" + std::to_string(r) + "][" +
                                             std::to_string(c) + "]");
  }
  return out;
}

}  // namespace

CollarOperator parse_operator_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("operator file", std::string("JSON parse error: ") + e.what());
  }

  for (const char* key : {"m", "rank_e", "rank_f", "geometry", "coeffs"})
    if (!j.contains(key)) throw InputError("operator file", std::string("missing field '") + key + "'");

  CollarOperator op;
  if (!j["m"].is_number_integer() || j["m"].get<int>() < 1)
    throw InputError("m", "must be a positive integer");
  op.m = j["m"].get<int>();
  int rank_e = j["rank_e"].get<int>();
  int rank_f = j["rank_f"].get<int>();
  if (rank_e < 1 || rank_f < 1) throw InputError("rank_e/rank_f", "must be positive");
  op.geometry = geometry_from_string(j["geometry"].get<std::string>());
  op.bundle_in = GradedBundle(rank_e, op.m);
  op.bundle_out = GradedBundle(rank_f, op.m);
  if (j.contains("name")) op.name = j["name"].get<std::string>();

  int dim = boundary_dim(op.geometry);
  op.coeffs.assign(op.m + 1, SymbolMatrix(rank_f, rank_e, dim));
  op.dnormal.assign(op.m + 1, std::nullopt);
  op.zeroth.assign(op.m + 1, std::nullopt);

  std::vector<bool> seen(op.m + 1, false);
  if (!j["coeffs"].is_array()) throw InputError("coeffs", "must be an array");
  for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
    const json& cj = j["coeffs"][i];
    std::string path = "coeffs[" + std::to_string(i) + "]";
    if (!cj.contains("l")) throw InputError(path, "missing l");
    int l = cj["l"].get<int>();
    if (l < 0 || l > op.m) throw InputError(path + ".l", "l out of range 0..m");
    if (seen[l]) throw InputError(path + ".l", "duplicate coefficient l");
    seen[l] = true;
    if (!cj.contains("entries")) throw InputError(path, "missing entries");
    op.coeffs[l] = parse_block(cj["entries"], rank_f, rank_e, dim, l, path + ".entries");
    if (cj.contains("dnormal"))
      op.dnormal[l] = parse_block(cj["dnormal"], rank_f, rank_e, dim, l, path + ".dnormal");
    if (cj.contains("zeroth"))
      op.zeroth[l] = parse_matrix(cj["zeroth"], rank_f, rank_e, path + ".zeroth");
  }
  if (!seen[0]) throw InputError("coeffs", "the l = 0 coefficient (A_0) is required");

  op.validate();
  return op;
}

CollarOperator load_operator_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open operator file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_operator_json(buf.str());
}

namespace {
json block_to_json(const SymbolMatrix& s) {
  json entries = json::array();
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) {
      if (s.at(r, c).empty()) continue;
      json monos = json::array();
      for (const Monomial& m : s.at(r, c).monomials)
        monos.push_back({{"powers", m.powers}, {"coef", {m.coef.real(), m.coef.imag()}}});
      entries.push_back({{"row", r}, {"col", c}, {"monomials", monos}});
    }
  return entries;
}
}  // namespace

std::string operator_to_json(const CollarOperator& op) {
  json j;
  j["name"] = op.name;
  j["m"] = op.m;
  j["rank_e"] = op.rank_in();
  j["rank_f"] = op.rank_out();
  j["geometry"] = to_string(op.geometry);
  json coeffs = json::array();
  for (int l = 0; l <= op.m; ++l) {
    json cj;
    cj["l"] = l;
    cj["entries"] = block_to_json(op.coeffs[l]);
    if (op.dnormal[l]) cj["dnormal"] = block_to_json(*op.dnormal[l]);
    if (op.zeroth[l]) {
      const CMatrix& z = *op.zeroth[l];
      json rows = json::array();
      for (int r = 0; r < z.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < z.cols(); ++c) row.push_back({z(r, c).real(), z(r, c).imag()});
        rows.push_back(row);
      }
      cj["zeroth"] = rows;
    }
    coeffs.push_back(cj);
  }
  j["coeffs"] = coeffs;
  return j.dump(2);
}

void save_operator_json(const CollarOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path, "cannot write operator file");
  out << operator_to_json(op) << "\n";
}

}  // namespace calderon

#include "calderon/projector_field.hpp"

#include <cmath>

#include "calderon/errors.hpp"

namespace calderon {

double ProjectorField::max_idempotence_defect() const {
  double worst = 0.0;
  for (const CMatrix& p : values) worst = std::max(worst, (p * p - p).norm());
  return worst;
}

std::vector<int> ProjectorField::ranks() const {
  std::vector<int> out;
  out.reserve(values.size());
  for (const CMatrix& p : values)
    out.push_back(static_cast<int>(std::lround(p.trace().real())));
  return out;
}

void ProjectorField::validate(const CosphereGrid& grid) const {
  if (values.size() != grid.size())
    throw InputError("ProjectorField", "value count does not match grid");
  double defect = max_idempotence_defect();
  if (defect > tolerance)
    throw NumericalError("symbol-core", "projector_field",
                         "idempotence defect " + std::to_string(defect) +
                             " exceeds tolerance");
  std::vector<int> rk = ranks();
  std::vector<int> per_component(grid.component_count(), -1);
  for (std::size_t i = 0; i < rk.size(); ++i) {
    int c = grid.component[i];
    if (per_component[c] == -1) per_component[c] = rk[i];
    if (per_component[c] != rk[i])
      throw NumericalError("symbol-core", "projector_field",
                           "rank not constant on grid component " + std::to_string(c));
  }
}

ProjectorField constant_projector(const CosphereGrid& grid, const CMatrix& p,
                                  double tolerance) {
  ProjectorField field;
  field.tolerance = tolerance;
  field.values.assign(grid.size(), p);
  return field;
}

}  // namespace calderon

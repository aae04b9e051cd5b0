#pragma once

#include <string>
#include <vector>

#include "calderon/errors.hpp"

namespace calderon {

/// Supported boundary geometries. The theory is local and symbolic, so a
/// small set of model geometries covers every computation in the lab.
enum class Geometry {
  kCircle,          // boundary S^1, cosphere = two circles (xi' = +-1)
  kFlatTorus2d,     // boundary T^2, cosphere = T^2 x S^1
  kIntervalPoints,  // boundary of an interval: two points, no covector
};

Geometry geometry_from_string(const std::string& name);
std::string to_string(Geometry g);

/// Dimension of the boundary (number of tangential covector components).
int boundary_dim(Geometry g);

/// Total measure of the cosphere bundle S*Sigma for the geometry.
double cosphere_measure(Geometry g);

struct CospherePoint {
  std::vector<double> base_coords;  // chart coordinates on Sigma
  std::vector<double> covector;     // unit tangential covector xi'

  double covector_norm() const;
};

struct CosphereGrid {
  Geometry descriptor = Geometry::kCircle;
  std::vector<CospherePoint> points;
  std::vector<double> weights;
  std::vector<int> component;  // connected component id per point

  std::size_t size() const { return points.size(); }
  double total_weight() const;
  int component_count() const;
};

/// Quadrature grid covering S*Sigma. Trapezoid rule on circle factors,
/// product rules otherwise; all weights positive.
CosphereGrid build_cosphere_grid(Geometry descriptor, int resolution);

}  // namespace calderon

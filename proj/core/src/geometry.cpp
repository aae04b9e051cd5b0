#include "calderon/geometry.hpp"

#include <cmath>
#include <numeric>

namespace calderon {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Geometry geometry_from_string(const std::string& name) {
  if (name == "circle") return Geometry::kCircle;
  if (name == "flat_torus_2d") return Geometry::kFlatTorus2d;
  if (name == "interval_points") return Geometry::kIntervalPoints;
  throw InputError("geometry", "unsupported geometry '" + name +
                                   "' (expected circle, flat_torus_2d, interval_points)");
}

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::kCircle: return "circle";
    case Geometry::kFlatTorus2d: return "flat_torus_2d";
    case Geometry::kIntervalPoints: return "interval_points";
  }
  return "?";
}

int boundary_dim(Geometry g) {
  switch (g) {
    case Geometry::kCircle: return 1;
    case Geometry::kFlatTorus2d: return 2;
    case Geometry::kIntervalPoints: return 0;
  }
  return 0;
}

double cosphere_measure(Geometry g) {
  switch (g) {
    case Geometry::kCircle: return 2.0 * kTwoPi;           // two copies of S^1
    case Geometry::kFlatTorus2d: return kTwoPi * kTwoPi * kTwoPi;  // T^2 x S^1
    case Geometry::kIntervalPoints: return 2.0;            // counting measure
  }
  return 0.0;
}

double CospherePoint::covector_norm() const {
  double s = 0;
  for (double c : covector) s += c * c;
  return std::sqrt(s);
}

double CosphereGrid::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

int CosphereGrid::component_count() const {
  int m = -1;
  for (int c : component) m = std::max(m, c);
  return m + 1;
}

CosphereGrid build_cosphere_grid(Geometry descriptor, int resolution) {
  if (resolution < 2)
    throw InputError("build_cosphere_grid", "resolution below minimum (need >= 2)");

  CosphereGrid grid;
  grid.descriptor = descriptor;

  switch (descriptor) {
    case Geometry::kCircle: {
      // S*S^1 = S^1 x {+1,-1}; the two fibers are the connected components.
      double w = kTwoPi / resolution;
      for (int s = 0; s < 2; ++s) {
        double xi = s == 0 ? 1.0 : -1.0;
        for (int k = 0; k < resolution; ++k) {
          grid.points.push_back({{kTwoPi * k / resolution}, {xi}});
          grid.weights.push_back(w);
          grid.component.push_back(s);
        }
      }
      break;
    }
    case Geometry::kFlatTorus2d: {
      // base T^2 sampled resolution^2, fiber S^1 sampled resolution times.
      double wb = (kTwoPi / resolution) * (kTwoPi / resolution);
      double wf = kTwoPi / resolution;
      for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j)
          for (int k = 0; k < resolution; ++k) {
            double phi = kTwoPi * k / resolution;
            grid.points.push_back({{kTwoPi * i / resolution, kTwoPi * j / resolution},
                                   {std::cos(phi), std::sin(phi)}});
            grid.weights.push_back(wb * wf);
            grid.component.push_back(0);
          }
      break;
    }
    case Geometry::kIntervalPoints: {
      // Two endpoints, empty covector, unit counting weights. Only used as
      // plumbing (e.g. Weyl fixtures); no cosphere analysis happens here.
      for (int e = 0; e < 2; ++e) {
        grid.points.push_back({{static_cast<double>(e)}, {}});
        grid.weights.push_back(1.0);
        grid.component.push_back(e);
      }
      break;
    }
  }
  return grid;
}

}  // namespace calderon

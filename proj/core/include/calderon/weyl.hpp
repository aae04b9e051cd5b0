#pragma once

#include <string>
#include <vector>

#include "calderon/disc.hpp"
#include "calderon/symbol.hpp"
#include "calderon/types.hpp"

namespace calderon {

enum class WeylManifold { kInterval, kRectangle, kUnitDisc };
enum class WeylBc { kDirichlet, kNeumann, kRobin };

WeylManifold weyl_manifold_from_string(const std::string& s);
WeylBc weyl_bc_from_string(const std::string& s);

/// Positive-symbol eigenvalue problem data. `sigma` is the interior
/// principal symbol as a matrix of homogeneous polynomials in the full
/// covector (dim = n); it must be positive definite on the unit cosphere.
struct WeylInput {
  WeylManifold manifold = WeylManifold::kUnitDisc;
  double length = M_PI;  // interval
  double a = M_PI, b = M_PI;  // rectangle
  int n = 2;  // dimension
  int m = 2;  // order
  SymbolMatrix sigma;

  double volume() const;
  static WeylInput unit_disc_laplace();
  static WeylInput interval_laplace(double length);
  static WeylInput rectangle_laplace(double a, double b);
};

struct WeylConstantReport {
  double c_d = 0.0;
  double min_symbol_eigenvalue = 0.0;
  double convergence = 0.0;  // relative change on the last resolution doubling
  int resolution = 0;
};

/// c_D = ((1/(n (2 pi)^n)) int_{S*M} Tr(sigma^{-n/m}))^{-m/n} by direction
/// quadrature, resolution-doubled until the relative change is < 1e-6.
WeylConstantReport weyl_constant(const WeylInput& w, int quadrature_resolution);

/// Sorted eigenvalues of the model realizations: closed forms on the
/// interval/rectangle, Bessel zero-finding on the disc (with multiplicity 2
/// for nonzero angular modes), each verified against its transcendental
/// characteristic to 1e-10.
std::vector<double> model_eigenvalues(const WeylInput& w, WeylBc bc, int count,
                                      double robin_c = 1.0);

struct AsymptoticFit {
  double c_hat = 0.0;
  std::vector<double> window_medians;
  double drift = 0.0;  // max relative deviation of window medians from c_hat
};

/// Median of lambda_k / k^{m/n} over the top half of the list; quartile
/// windows document the drift.
AsymptoticFit asymptotic_fit(const std::vector<double>& eigs, int m, int n);

struct SingularValueFit {
  double predicted = 0.0;
  double fitted = 0.0;
  double rel_error = 0.0;
  int pooled_count = 0;
};

enum class RealizationFixture { kD0Aps, kLaplaceDirichlet };

/// Pools the per-mode singular values of the realized disc operator (exact
/// transcendental spectra, residual-verified) over |n| <= trunc and fits
/// mu_k ~ sqrt(c) k^{m/n} against the symbol prediction.
SingularValueFit singular_value_fit(RealizationFixture fixture, int trunc,
                                    double lambda_shift = 1.0);

}  // namespace calderon

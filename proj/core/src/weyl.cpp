#include "calderon/weyl.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "calderon/bessel.hpp"
#include "calderon/errors.hpp"

namespace calderon {

WeylManifold weyl_manifold_from_string(const std::string& s) {
  if (s == "interval") return WeylManifold::kInterval;
  if (s == "rectangle") return WeylManifold::kRectangle;
  if (s == "disc" || s == "unit_disc") return WeylManifold::kUnitDisc;
  throw InputError("weyl", "unknown manifold '" + s + "'");
}

WeylBc weyl_bc_from_string(const std::string& s) {
  if (s == "dirichlet") return WeylBc::kDirichlet;
  if (s == "neumann") return WeylBc::kNeumann;
  if (s == "robin") return WeylBc::kRobin;
  throw InputError("weyl", "unknown boundary condition '" + s + "'");
}

double WeylInput::volume() const {
  switch (manifold) {
    case WeylManifold::kInterval: return length;
    case WeylManifold::kRectangle: return a * b;
    case WeylManifold::kUnitDisc: return M_PI;
  }
  return 0;
}

WeylInput WeylInput::unit_disc_laplace() {
  WeylInput w;
  w.manifold = WeylManifold::kUnitDisc;
  w.n = 2;
  w.m = 2;
  w.sigma = SymbolMatrix(1, 1, 2);
  w.sigma.add_term(0, 0, {2, 0}, 1.0);
  w.sigma.add_term(0, 0, {0, 2}, 1.0);
  return w;
}

WeylInput WeylInput::interval_laplace(double length) {
  WeylInput w;
  w.manifold = WeylManifold::kInterval;
  w.length = length;
  w.n = 1;
  w.m = 2;
  w.sigma = SymbolMatrix(1, 1, 1);
  w.sigma.add_term(0, 0, {2}, 1.0);
  return w;
}

WeylInput WeylInput::rectangle_laplace(double a, double b) {
  WeylInput w = unit_disc_laplace();
  w.manifold = WeylManifold::kRectangle;
  w.a = a;
  w.b = b;
  return w;
}

namespace {

// Tr(sigma(xi)^{-n/m}) for Hermitian positive sigma(xi); also tracks the
// smallest eigenvalue seen.
double trace_power(const SymbolMatrix& sigma, const std::vector<double>& xi, double expo,
                   double* min_eig) {
  CMatrix s = sigma.eval(xi);
  CMatrix herm = 0.5 * (s + s.adjoint());
  if ((s - herm).norm() > 1e-10 * std::max(1.0, s.norm()))
    throw InputError("weyl_constant", "symbol is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  double tr = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    *min_eig = std::min(*min_eig, ev);
    if (ev <= 0)
      throw NumericalError("weyl", "weyl_constant", "symbol is not positive definite");
    tr += std::pow(ev, expo);
  }
  return tr;
}

double direction_integral(const WeylInput& w, int resolution, double* min_eig) {
  double expo = -static_cast<double>(w.n) / w.m;
  if (w.n == 1) {
    double acc = 0;
    for (double xi : {1.0, -1.0}) acc += trace_power(w.sigma, {xi}, expo, min_eig);
    return acc;  // counting measure on S^0
  }
  double acc = 0;
  for (int k = 0; k < resolution; ++k) {
    double phi = 2.0 * M_PI * k / resolution;
    acc += trace_power(w.sigma, {std::cos(phi), std::sin(phi)}, expo, min_eig);
  }
  return acc * (2.0 * M_PI / resolution);
}

}  // namespace

WeylConstantReport weyl_constant(const WeylInput& w, int quadrature_resolution) {
  WeylConstantReport report;
  report.min_symbol_eigenvalue = std::numeric_limits<double>::infinity();
  int res = std::max(8, quadrature_resolution);
  double prev = std::numeric_limits<double>::quiet_NaN();
  double integral = 0;
  for (int iter = 0; iter < 8; ++iter) {
    double smallest = std::numeric_limits<double>::infinity();
    integral = direction_integral(w, res, &smallest) * w.volume();
    report.min_symbol_eigenvalue = std::min(report.min_symbol_eigenvalue, smallest);
    if (iter > 0) {
      report.convergence = std::abs(integral - prev) / std::max(1e-300, std::abs(integral));
      if (report.convergence < 1e-6) break;
    }
    prev = integral;
    res *= 2;
  }
  report.resolution = res;
  double pref = integral / (w.n * std::pow(2.0 * M_PI, w.n));
  report.c_d = std::pow(pref, -static_cast<double>(w.m) / w.n);
  return report;
}

namespace {

void verify_disc_residual(int n, double root, WeylBc bc, double robin_c) {
  double value;
  switch (bc) {
    case WeylBc::kDirichlet: value = bessel_j(n, root); break;
    case WeylBc::kNeumann: value = root * bessel_j_prime(n, root); break;
    case WeylBc::kRobin:
      value = robin_c * bessel_j(n, root) + root * bessel_j_prime(n, root);
      break;
  }
  if (std::abs(value) > 1e-10)
    throw NumericalError("weyl", "model_eigenvalues",
                         "characteristic residual " + std::to_string(value) +
                             " at angular mode " + std::to_string(n));
}

std::vector<double> disc_eigenvalues(WeylBc bc, int count, double robin_c) {
  // enough zeros to fill `count` entries: N(x^2) ~ x^2/4 plus padding
  double x_max = std::sqrt(4.0 * count) + 30.0;
  std::vector<double> eigs;
  if (bc == WeylBc::kNeumann) eigs.push_back(0.0);  // constant eigenfunction

  std::vector<double> below;
  for (int n = 0;; ++n) {
    std::vector<double> dirichlet_row = bessel_j_zeros_upto(n, x_max, below);
    if (dirichlet_row.empty()) break;
    std::vector<double> roots;
    switch (bc) {
      case WeylBc::kDirichlet: roots = dirichlet_row; break;
      case WeylBc::kNeumann:
        roots = robin_char_roots_upto(n, 0.0, x_max, dirichlet_row);
        break;
      case WeylBc::kRobin:
        roots = robin_char_roots_upto(n, robin_c, x_max, dirichlet_row);
        break;
    }
    for (double x : roots) {
      verify_disc_residual(n, x, bc, robin_c);
      eigs.push_back(x * x);
      if (n > 0) eigs.push_back(x * x);  // e^{+-i n theta} multiplicity
    }
    below = dirichlet_row;
  }
  std::sort(eigs.begin(), eigs.end());
  if (static_cast<int>(eigs.size()) < count)
    throw NumericalError("weyl", "model_eigenvalues", "zero table came up short");
  eigs.resize(count);
  return eigs;
}

std::vector<double> interval_eigenvalues(double length, WeylBc bc, int count,
                                         double robin_c) {
  std::vector<double> eigs;
  switch (bc) {
    case WeylBc::kDirichlet:
      for (int k = 1; k <= count; ++k) eigs.push_back(std::pow(k * M_PI / length, 2));
      break;
    case WeylBc::kNeumann:
      for (int k = 0; k < count; ++k) eigs.push_back(std::pow(k * M_PI / length, 2));
      break;
    case WeylBc::kRobin: {
      // u'' + k^2 u = 0 on [0, L], u'(0) = c u(0), u'(L) = -c u(L):
      // (k^2 - c^2) sin(kL) = 2 c k cos(kL)
      auto chi = [length, robin_c](double k) {
        return (k * k - robin_c * robin_c) * std::sin(k * length) -
               2.0 * robin_c * k * std::cos(k * length);
      };
      double step = 1e-3 * M_PI / length;
      double prev = chi(step / 2);
      for (double k = step; static_cast<int>(eigs.size()) < count; k += step) {
        double cur = chi(k + step / 2);
        if (prev * cur < 0) {
          double lo = k - step / 2, hi = k + step / 2;
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (chi(lo) * chi(mid) <= 0 ? hi : lo) = mid;
          }
          double root = 0.5 * (lo + hi);
          eigs.push_back(root * root);
        }
        prev = cur;
      }
      break;
    }
  }
  return eigs;
}

std::vector<double> rectangle_eigenvalues(double a, double b, WeylBc bc, int count) {
  std::vector<double> eigs;
  int pmax = static_cast<int>(std::sqrt(4.0 * count) * std::max(a, b) / M_PI) + 4;
  int start = bc == WeylBc::kDirichlet ? 1 : 0;
  for (int p = start; p <= pmax; ++p)
    for (int q = start; q <= pmax; ++q)
      eigs.push_back(std::pow(p * M_PI / a, 2) + std::pow(q * M_PI / b, 2));
  std::sort(eigs.begin(), eigs.end());
  if (static_cast<int>(eigs.size()) < count)
    throw NumericalError("weyl", "model_eigenvalues", "lattice table came up short");
  eigs.resize(count);
  return eigs;
}

}  // namespace

std::vector<double> model_eigenvalues(const WeylInput& w, WeylBc bc, int count,
                                      double robin_c) {
  if (count < 1) throw InputError("model_eigenvalues", "count must be >= 1");
  switch (w.manifold) {
    case WeylManifold::kInterval:
      return interval_eigenvalues(w.length, bc, count, robin_c);
    case WeylManifold::kRectangle:
      if (bc == WeylBc::kRobin)
        throw InputError("model_eigenvalues", "rectangle Robin spectra not supported");
      return rectangle_eigenvalues(w.a, w.b, bc, count);
    case WeylManifold::kUnitDisc:
      return disc_eigenvalues(bc, count, robin_c);
  }
  return {};
}

namespace {
double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}
}  // namespace

AsymptoticFit asymptotic_fit(const std::vector<double>& eigs, int m, int n) {
  if (eigs.size() < 500)
    throw InputError("asymptotic_fit", "need at least 500 eigenvalues");
  double expo = static_cast<double>(m) / n;
  auto ratios = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> r;
    for (std::size_t k = lo; k < hi; ++k)
      r.push_back(eigs[k] / std::pow(static_cast<double>(k + 1), expo));
    return r;
  };
  AsymptoticFit fit;
  fit.c_hat = median(ratios(eigs.size() / 2, eigs.size()));
  for (int q = 0; q < 4; ++q) {
    std::size_t lo = eigs.size() / 2 + q * eigs.size() / 8;
    std::size_t hi = std::min(eigs.size(), lo + eigs.size() / 8);
    fit.window_medians.push_back(median(ratios(lo, hi)));
  }
  for (double wmed : fit.window_medians)
    fit.drift = std::max(fit.drift, std::abs(wmed - fit.c_hat) / fit.c_hat);
  return fit;
}

SingularValueFit singular_value_fit(RealizationFixture fixture, int trunc,
                                    double lambda_shift) {
  SingularValueFit out;
  std::vector<double> mu;
  // Pooling all modes with zeros below 0.8*trunc keeps the list complete:
  // j_{n,1} > n, so no contribution from outside the truncation is missed.
  double x_max = 0.8 * trunc;

  std::vector<double> below;
  switch (fixture) {
    case RealizationFixture::kD0Aps: {
      // per mode pair +-n (n >= 1): two Dirichlet components and two
      // Robin(c = n) components -- the free trace of the generalized APS
      // condition satisfies f'(1) + n f(1) = 0 through the adjoint
      // condition; mode 0 is full Dirichlet on both components.
      for (int n = 0; n <= trunc; ++n) {
        std::vector<double> drow = bessel_j_zeros_upto(n, x_max, below);
        if (drow.empty()) break;
        if (n == 0) {
          for (double x : drow) {
            mu.push_back(x);
            mu.push_back(x);
          }
        } else {
          auto rrow = robin_char_roots_upto(n, static_cast<double>(n), x_max, drow);
          for (double x : drow) {
            mu.push_back(x);
            mu.push_back(x);
          }
          for (double x : rrow) {
            mu.push_back(x);
            mu.push_back(x);
          }
        }
        below = drow;
      }
      out.predicted = std::sqrt(2.0);  // sqrt(c_{D^dag D}), sigma* sigma = |xi|^2 I_2
      break;
    }
    case RealizationFixture::kLaplaceDirichlet: {
      for (int n = 0; n <= trunc; ++n) {
        std::vector<double> drow = bessel_j_zeros_upto(n, x_max, below);
        if (drow.empty()) break;
        int mult = n == 0 ? 1 : 2;
        for (double x : drow)
          for (int i = 0; i < mult; ++i) mu.push_back(x * x + lambda_shift);
        below = drow;
      }
      out.predicted = 4.0;  // sqrt(c_{D^dag D}) with sigma* sigma = |xi|^4
      break;
    }
  }
  std::sort(mu.begin(), mu.end());
  out.pooled_count = static_cast<int>(mu.size());

  double expo = fixture == RealizationFixture::kD0Aps ? 0.5 : 1.0;
  std::vector<double> ratios;
  for (std::size_t k = mu.size() / 2; k < mu.size(); ++k)
    ratios.push_back(mu[k] / std::pow(static_cast<double>(k + 1), expo));
  out.fitted = median(ratios);
  out.rel_error = std::abs(out.fitted - out.predicted) / out.predicted;
  return out;
}

}  // namespace calderon

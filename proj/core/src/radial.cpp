#include "calderon/radial.hpp"

#include <cmath>
#include <limits>

#include "calderon/errors.hpp"

namespace calderon {

namespace {

CVector rk4_run(const std::function<CVector(double, const CVector&)>& rhs, CVector y,
                double s0, double s1, int steps) {
  double h = (s1 - s0) / steps;
  double s = s0;
  for (int i = 0; i < steps; ++i) {
    CVector k1 = rhs(s, y);
    CVector k2 = rhs(s + h / 2, y + (h / 2) * k1);
    CVector k3 = rhs(s + h / 2, y + (h / 2) * k2);
    CVector k4 = rhs(s + h, y + h * k3);
    y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    s += h;
  }
  return y;
}

}  // namespace

CVector rk4_richardson(const std::function<CVector(double, const CVector&)>& rhs,
                       CVector y0, double s0, double s1, int steps, double tol,
                       const char* op_name, double* error_out) {
  CVector coarse = rk4_run(rhs, y0, s0, s1, steps);
  CVector fine = rk4_run(rhs, y0, s0, s1, 2 * steps);
  double scale = std::max(1.0, fine.norm());
  double err = (fine - coarse).norm() / scale;
  if (err > tol) {
    // one retry at 4x before giving up
    CVector finer = rk4_run(rhs, y0, s0, s1, 4 * steps);
    err = (finer - fine).norm() / std::max(1.0, finer.norm());
    fine = finer;
    if (err > tol)
      throw NumericalError("disc-lab", op_name,
                           "radial integrator failed to converge (residual " +
                               std::to_string(err) + ")");
  }
  if (error_out) *error_out = err;
  return fine;
}

Complex interior_log_dtn(int n, Complex q, double eps, int base_steps) {
  int na = std::abs(n);
  // v' (in s = log r) = n^2 - v^2 + q e^{2s}; regular seed v(eps) from the
  // Frobenius expansion u = r^|n| (1 + q r^2 / (4(|n|+1)) + ...)
  Complex v_seed = static_cast<double>(na) + q * eps * eps / (2.0 * (na + 1));
  auto rhs = [na, q](double s, const CVector& y) {
    CVector out(1);
    double r2 = std::exp(2 * s);
    out(0) = static_cast<double>(na) * na - y(0) * y(0) + q * r2;
    return out;
  };
  CVector y0(1);
  y0(0) = v_seed;
  int steps = base_steps + 8 * na;
  CVector y = rk4_richardson(rhs, y0, std::log(eps), 0.0, steps, 1e-10, "interior_log_dtn");
  return y(0);
}

double exterior_log_dtn(int n, double q, double r_max, int base_steps) {
  if (q <= 0)
    throw InputError("exterior_log_dtn", "needs q > 0 (use -|n| in the q = 0 case)");
  int na = std::abs(n);
  double s_max = std::log(r_max);
  // decaying branch seed v ~ -sqrt(n^2 + q r^2) - 1/2 at large r (next order
  // of the K-Bessel expansion); backward integration contracts seed error.
  double z = std::sqrt(na * static_cast<double>(na) + q * r_max * r_max);
  CVector y0(1);
  y0(0) = Complex(-z - 0.5, 0.0);
  auto rhs = [na, q](double s, const CVector& y) {
    CVector out(1);
    double r2 = std::exp(2 * s);
    out(0) = static_cast<double>(na) * na - y(0) * y(0) + q * r2;
    return out;
  };
  int steps = base_steps + 8 * na + static_cast<int>(4 * std::sqrt(q) * r_max);
  CVector y = rk4_richardson(rhs, y0, s_max, 0.0, steps, 1e-10, "exterior_log_dtn");
  return y(0).real();
}

Tridiag radial_fd_operator(int n, double shift, int cells, double robin_c) {
  if (cells < 8) throw InputError("radial_fd_operator", "too few cells");
  double h = 1.0 / cells;
  Tridiag t;
  t.diag.resize(cells);
  t.off.resize(cells - 1);
  // cell centers r_i = (i + 1/2) h; flux form with face radii r_{i+1/2};
  // symmetrized in the measure r dr: entries of diag(sqrt(r)) A diag(1/sqrt(r)).
  auto rc = [h](int i) { return (i + 0.5) * h; };
  auto rf = [h](int i) { return (i + 1.0) * h; };  // face between i and i+1
  for (int i = 0; i < cells; ++i) {
    double left = i == 0 ? 0.0 : rf(i - 1);  // zero-flux face at r = 0
    double right = rf(i);
    double diag_flux = (left + right) / (h * h * rc(i));
    if (i == cells - 1) {
      // ghost elimination at r = 1: u' (1) + c u(1) = 0 gives
      // u_ghost = u_last (1 - c h/2)/(1 + c h/2); Dirichlet is the c -> inf
      // limit u_ghost = -u_last.
      double factor;
      if (std::isinf(robin_c)) {
        factor = -1.0;
      } else {
        factor = (1.0 - robin_c * h / 2) / (1.0 + robin_c * h / 2);
      }
      // right face flux uses (u_ghost - u_last)/h = u_last (factor - 1)/h
      diag_flux = left / (h * h * rc(i)) + right * (1.0 - factor) / (h * h * rc(i));
    }
    t.diag[i] = diag_flux + (n * static_cast<double>(n)) / (rc(i) * rc(i)) + shift;
    if (i + 1 < cells) {
      // symmetrized off-diagonal: -r_f / (h^2 sqrt(r_i r_{i+1}))
      t.off[i] = -rf(i) / (h * h * std::sqrt(rc(i) * rc(i + 1)));
    }
  }
  return t;
}

RVector radial_fd_apply(const Tridiag& t, const RVector& u) {
  int n = static_cast<int>(t.diag.size());
  RVector out(n);
  for (int i = 0; i < n; ++i) {
    double v = t.diag[i] * u(i);
    if (i > 0) v += t.off[i - 1] * u(i - 1);
    if (i + 1 < n) v += t.off[i] * u(i + 1);
    out(i) = v;
  }
  return out;
}

namespace {

// Thomas solve of (T - sigma I) x = b for symmetric tridiagonal T.
RVector shifted_thomas(const Tridiag& t, double sigma, const RVector& b) {
  int n = static_cast<int>(t.diag.size());
  std::vector<double> c(n), d(n);
  RVector x(n);
  double denom = t.diag[0] - sigma;
  c[0] = (n > 1 ? t.off[0] : 0.0) / denom;
  d[0] = b(0) / denom;
  for (int i = 1; i < n; ++i) {
    double m = t.diag[i] - sigma - t.off[i - 1] * c[i - 1];
    c[i] = (i + 1 < n ? t.off[i] : 0.0) / m;
    d[i] = (b(i) - t.off[i - 1] * d[i - 1]) / m;
  }
  x(n - 1) = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x(i) = d[i] - c[i] * x(i + 1);
  return x;
}

}  // namespace

double tridiag_smallest_eigenvalue(const Tridiag& t, double tol) {
  int n = static_cast<int>(t.diag.size());
  // Gershgorin lower bound keeps the shift below the spectrum.
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double radius = 0;
    if (i > 0) radius += std::abs(t.off[i - 1]);
    if (i + 1 < n) radius += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - radius);
  }
  double sigma = lo - 1.0;
  RVector v = RVector::Ones(n).normalized();
  double lambda = 0, lambda_prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    v = shifted_thomas(t, sigma, v);
    v.normalize();
    RVector av = radial_fd_apply(t, v);
    lambda = v.dot(av);
    if (std::abs(lambda - lambda_prev) < tol * std::max(1.0, std::abs(lambda))) break;
    lambda_prev = lambda;
    if (it > 4) sigma = lambda - 1e-4 * std::max(1.0, std::abs(lambda));
  }
  return lambda;
}

}  // namespace calderon

#include "calderon/bessel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "calderon/errors.hpp"

namespace calderon {

std::vector<double> bessel_j_row(int n_max, double x) {
  if (n_max < 0) throw InputError("bessel_j_row", "n_max must be >= 0");
  if (x < 0) throw InputError("bessel_j_row", "x must be >= 0");
  std::vector<double> out(n_max + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  // start high enough that the downward recurrence has converged onto the
  // minimal solution by the time it reaches n_max
  int start = n_max + static_cast<int>(x) + 52 +
              static_cast<int>(1.5 * std::cbrt(std::max(1.0, x)));
  if (start % 2) ++start;

  double jp = 0.0;     // J_{k+1}
  double jc = 1e-300;  // J_k, arbitrary tiny seed
  double norm = 0.0;   // accumulates J_0 + 2 sum_{even k>0} J_k
  for (int k = start; k >= 1; --k) {
    double jm = (2.0 * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 <= n_max) out[k - 1] = jc;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * jc;
    if (std::abs(jc) > 1e250) {  // rescale to dodge overflow
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      for (double& v : out) v *= 1e-250;
    }
  }
  for (double& v : out) v /= norm;
  return out;
}

double bessel_j(int n, double x) { return bessel_j_row(n, x)[n]; }

double bessel_j_prime(int n, double x) {
  if (n == 0) return -bessel_j(1, x);
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  std::vector<double> row = bessel_j_row(n + 1, x);
  return 0.5 * (row[n - 1] - row[n + 1]);
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0)
    throw NumericalError("weyl", "bessel_zero", "bracket without sign change");
  for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> bessel_j_zeros_upto(int n, double x_max,
                                        const std::vector<double>& row_below) {
  std::vector<double> zeros;
  auto f = [n](double x) { return bessel_j(n, x); };

  if (n == 0) {
    // McMahon: j_{0,k} ~ b - 1/(8b) with b = (k - 1/4) pi
    for (int k = 1;; ++k) {
      double b = (k - 0.25) * M_PI;
      double seed = b - 1.0 / (8.0 * b);
      if (seed - 0.6 > x_max) break;
      double lo = seed - 0.6, hi = seed + 0.6;
      while (f(lo) * f(hi) > 0) {
        lo -= 0.2;
        hi += 0.2;
        if (hi - lo > M_PI)
          throw NumericalError("weyl", "bessel_zero",
                               "failed to bracket J_0 zero near " + std::to_string(seed));
      }
      double z = bisect(f, lo, hi);
      if (z > x_max) break;
      zeros.push_back(z);
    }
    return zeros;
  }

  // interlacing: j_{n,k} lies in (j_{n-1,k}, j_{n-1,k+1})
  if (row_below.empty()) return zeros;
  for (std::size_t k = 0; k + 1 < row_below.size(); ++k) {
    double lo = row_below[k], hi = row_below[k + 1];
    if (lo > x_max) break;
    if (f(lo) * f(hi) > 0) continue;  // tail interval past x_max can be signless
    double z = bisect(f, lo, hi);
    if (z <= x_max) zeros.push_back(z);
  }
  return zeros;
}

std::vector<double> robin_char_roots_upto(int n, double c, double x_max,
                                          const std::vector<double>& dirichlet_row) {
  auto g = [n, c](double x) { return c * bessel_j(n, x) + x * bessel_j_prime(n, x); };
  std::vector<double> roots;

  // At most one root of the Robin characteristic sits in (0, j_{n,1}) and in
  // each interval between consecutive Dirichlet zeros (c >= 0); scan them.
  std::vector<double> knots;
  knots.push_back(1e-6);
  for (double z : dirichlet_row) knots.push_back(z);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = knots[i] + 1e-9, hi = knots[i + 1] - 1e-9;
    if (lo > x_max) break;
    if (lo >= hi) continue;
    if (g(lo) * g(hi) > 0) continue;
    double z = bisect(g, lo, hi);
    if (z <= x_max && z > 1e-8) roots.push_back(z);
  }
  return roots;
}

double modified_i_log_derivative(int n, double x) {
  if (x == 0.0) return static_cast<double>(n);
  int tail = n + 48 + static_cast<int>(x);
  auto ratio = [x, tail](int k) {
    // r_k = I_{k+1}/I_k by descending continued fraction (Gautschi)
    double r = x / (2.0 * (tail + 1));
    for (int j = tail - 1; j >= k; --j) r = x / (2.0 * (j + 1) + x * r);
    return r;
  };
  double r_n = ratio(n);  // I_{n+1}/I_n
  if (n == 0) return x * r_n;  // I_0' = I_1
  double r_nm1 = ratio(n - 1);
  // I_n' = (I_{n-1} + I_{n+1})/2
  return 0.5 * x * (1.0 / r_nm1 + r_n);
}

namespace {

// K_0, K_1 for real x > 0: series + Wronskian below x = 2, Hankel-type
// asymptotics above.
std::pair<double, double> k0_k1(double t) {
  if (t <= 2.0) {
    double i0 = 1, i1 = t / 2;
    double term = 1;
    double sum0 = 0, hk = 0;
    double tt = t * t / 4;
    for (int k = 1; k < 42; ++k) {
      term *= tt / (static_cast<double>(k) * k);
      hk += 1.0 / k;
      i0 += term;
      sum0 += term * hk;
      i1 += term * t / (2.0 * (k + 1));
    }
    const double gamma = 0.57721566490153286060651209;
    double K0 = -(std::log(t / 2) + gamma) * i0 + sum0;
    double K1 = (1.0 / t - i1 * K0) / i0;  // Wronskian I_0 K_1 + I_1 K_0 = 1/t
    return {K0, K1};
  }
  auto asymp = [t](double mu) {
    double s = 1.0, term = 1.0;
    for (int k = 1; k < 18; ++k) {
      term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * t * k);
      s += term;
      if (std::abs(term) < 1e-17) break;
    }
    return std::sqrt(M_PI / (2 * t)) * std::exp(-t) * s;
  };
  return {asymp(0.0), asymp(4.0)};
}

}  // namespace

double modified_k_log_derivative(int n, double x) {
  if (x <= 0.0) throw InputError("modified_k_log_derivative", "x must be > 0");
  auto [K0, K1] = k0_k1(x);
  if (n == 0) return -x * K1 / K0;  // K_0' = -K_1
  // rho_k = K_{k+1}/K_k grows with k; forward recurrence is stable
  double rho = K1 / K0;
  for (int k = 1; k <= n - 1; ++k) rho = 2.0 * k / x + 1.0 / rho;
  double rho_nm1 = rho;                          // K_n/K_{n-1}
  double rho_n = 2.0 * n / x + 1.0 / rho_nm1;    // K_{n+1}/K_n
  return -0.5 * x * (1.0 / rho_nm1 + rho_n);     // K_n' = -(K_{n-1}+K_{n+1})/2
}

}  // namespace calderon

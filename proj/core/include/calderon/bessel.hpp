#pragma once

#include <vector>

namespace calderon {

/// J_0(x)..J_{n_max}(x) by Miller's backward recurrence with the
/// J_0 + 2 sum J_{2k} = 1 normalization. Accurate to ~1e-13 on the ranges
/// used here (x up to a few hundred, n up to a few hundred).
std::vector<double> bessel_j_row(int n_max, double x);

double bessel_j(int n, double x);
double bessel_j_prime(int n, double x);

/// Positive zeros of J_n up to x_max, ascending, refined to ~1e-12 by
/// bisection inside interlacing brackets. `row_below` must be the zeros of
/// J_{n-1} (pass {} for n = 0, where McMahon seeds are used).
std::vector<double> bessel_j_zeros_upto(int n, double x_max,
                                        const std::vector<double>& row_below);

/// Positive roots of c*J_n(x) + x*J_n'(x) up to x_max (Neumann for c = 0).
/// `dirichlet_row` are the zeros of J_n up to (at least) x_max.
std::vector<double> robin_char_roots_upto(int n, double c, double x_max,
                                          const std::vector<double>& dirichlet_row);

/// x * I_n'(x) / I_n(x), the interior Dirichlet-to-Neumann value of the
/// modified Bessel equation; stable continued-fraction evaluation.
double modified_i_log_derivative(int n, double x);

/// x * K_n'(x) / K_n(x) (exterior decaying solution), by stable forward
/// recurrence on ratios.
double modified_k_log_derivative(int n, double x);

}  // namespace calderon

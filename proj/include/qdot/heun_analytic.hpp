#pragma once

// Exact polynomial solutions of the biconfluent Heun form of the radial
// equation. With x = sqrt(omega) r and
//
//     u(r) = r^{l+1/2} exp(-omega r^2 / 2) y(x),
//
// y solves  x y'' + (1 + alpha - 2x^2) y' + (-delta/2 + (gamma - alpha - 2) x) y = 0
// with alpha = 2l, gamma = eta/omega, delta = 2/sqrt(omega). Writing
// y = sum_p A_p / ((1+alpha)_p p!) x^p, the series terminates at degree n when
// gamma - alpha - 2 = 2n and A_{n+1}(t) = 0, t = 1/sqrt(omega).

#include "qdot/radial_model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace qdot::heun {

using BigInt = boost::multiprecision::cpp_int;

/// Largest degree n accepted by the exact recurrence.
inline constexpr int max_degree = 20;

/// A_p as an exact integer polynomial in t = 1/sqrt(omega); coeffs[k] multiplies t^k.
struct CoefficientPolynomial {
    std::vector<BigInt> coeffs;

    int degree() const;
    long double evaluate(long double t) const;
};

/// A_0 .. A_{n+1} for the terminating case gamma - alpha - 2 = 2n:
///     A_{p+2} = t A_{p+1} - (2n - 2p)(p+1)(p+alpha+1) A_p,  A_0 = 1, A_1 = t.
/// Throws ArgumentError for n < 1, l < 0 or n > max_degree.
std::vector<CoefficientPolynomial> recurrence_coefficients(int n, int l);

struct AdmissibleRoots {
    std::vector<double> roots; ///< positive roots of A_{n+1}, ascending
    bool asymptotic = false;   ///< t = 0 is a root (omega -> infinity)
};

/// Positive roots t of A_{n+1}(t) = 0, each to absolute accuracy tol.
/// Roots are isolated with a Sturm sequence of the even part in s = t^2 using
/// exact rational arithmetic, then bisected on exact signs.
AdmissibleRoots admissible_roots(int n, int l, double tol = 1e-12);

/// eta_{nl} = 2 (n + l + 1) omega.
double quantized_energy(int n, int l, double omega);

struct HeunSolution {
    int n = 0;
    int l = 0;
    double t = 0.0; ///< admissible root 1/sqrt(omega)
    double omega = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::vector<double> y_coeffs; ///< y as a polynomial in r, y_coeffs[0] = 1

    double gaussian_exponent() const { return 0.5 * omega; }
    double y(double r) const;
    double u(double r) const;
};

/// Solution for the root_index-th positive admissible root (ascending order).
HeunSolution build_solution(int n, int l, std::size_t root_index);

/// Solution at an explicit root t of A_{n+1}; t is trusted, not checked.
HeunSolution solution_at_root(int n, int l, double t);

/// u(r) = r^{l+1/2} exp(-omega r^2/2) y(r) sampled on grid and normalized.
RadialWaveFunction sample_u(const HeunSolution& solution, std::span<const double> grid);

/// Power-series coefficients c_p of y(x) in powers of x (c_0 = 1) from
///     c_{p+2} (p+2)(p+2+alpha) = -delta' c_{p+1} - (shift - 2p) c_p,
/// shift = gamma - alpha - 2. Returns c_0 .. c_{count-1}.
std::vector<double> series_coefficients(double alpha, double shift, double delta_prime, int count);

/// Non-interacting limit: y(x) = n! Gamma(1+l) / Gamma(1+l+n) L_n^{l}(x^2), the
/// solution for gamma - alpha - 2 = 4n with the delta term dropped. Returned in
/// powers of x (degree 2n, odd entries zero).
std::vector<double> laguerre_asymptotic(int n, int l);

} // namespace qdot::heun

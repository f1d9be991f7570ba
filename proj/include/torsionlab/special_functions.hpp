/**
 * @file special_functions.hpp
 * @brief Closed-form oracles: Dedekind eta, Jacobi theta_1, the Kronecker-type
 *        holomorphic torsion of a complex torus, Hurwitz determinants, and the
 *        incomplete-gamma / exponential-integral kernels used by the exact
 *        Epstein continuation.
 *
 * Conventions (fixed once, validated numerically elsewhere):
 *  - q = e^{2 pi i tau}, principal branch q^{1/24} = e^{pi i tau / 12}.
 *  - theta1_product implements the bilateral product
 *        theta1(w,tau) = -eta(tau) e^{pi i (w + tau/6)}
 *                        prod_{k=-inf}^{inf} (1 - e^{2 pi i (|k| tau - eps_k w)}),
 *    eps_k = sign(k + 1/2), truncated symmetrically (k paired with -1-k) so that
 *    oddness in w is preserved at every truncation order.  This normalization
 *    equals (-i) times the classical sine series; moduli agree, which is all the
 *    torsion formula consumes.
 *  - theta1_series is an independent bilateral exponential series in the same
 *    normalization; theta1_classical is the textbook sine series.
 */
#pragma once

#include <complex>
#include <vector>

namespace torsionlab {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Dedekind eta(tau) = q^{1/24} prod_{k>=1} (1 - q^k), Im tau > 0.
/// Truncates when |q|^k < 1e-18 (hard cap 500 factors).
cplx dedekind_eta(cplx tau);

/// The bilateral product form of theta_1 (normative; see file header).
cplx theta1_product(cplx w, cplx tau);

/// Independent series oracle in the same normalization as theta1_product.
cplx theta1_series(cplx w, cplx tau);

/// Textbook normalization: 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi w).
cplx theta1_classical(cplx w, cplx tau);

/// Kronecker-type holomorphic torsion of the complex torus with modulus tau
/// and character (u, v):
///     tau0(u, v, tau) = | e^{pi i v^2 tau} theta1(u - tau v, tau) / eta(tau) |.
/// Requires a nontrivial character ((u,v) != (0,0) mod 1); throws otherwise,
/// since the cohomology does not vanish and the closed form does not apply.
double kronecker_torsion(double u, double v, cplx tau);

/// log of kronecker_torsion (the scale the spectral pipeline works in).
double log_kronecker_torsion(double u, double v, cplx tau);

/// Exponential integral E1(x), x > 0.  Power series for x <= 1 (30 terms),
/// modified Lentz continued fraction for x > 1 (<= 80 iterations).
double exp_int_e1(double x);

/// Upper incomplete gamma Gamma(k2/2, x) for half-integer order k2/2, k2 >= 1.
/// Closed forms through k2 = 4, upward recurrence Gamma(s+1,x) = s Gamma(s,x)
/// + x^s e^{-x} beyond.
double inc_gamma_half(int k2, double x);

/// log Det' of the circle sequence {4 pi^2 (m+a)^2 : m in Z} at unit
/// circumference, zero eigenvalue removed.  For a in (0,1): 2 log(2 sin pi a)
/// (the zeta(0)-bookkeeping makes this scale-free).  For integer a the zero
/// mode is removed and the regularized value is exactly 0 (Det' = 1 at unit
/// circumference; metric scaling is applied by the caller through zeta(0)).
double hurwitz_logdet(double a);

/// Same sequence at circumference L: {4 pi^2 (m+a)^2 / L^2}.  For a in (0,1)
/// the value is scale-free (zeta(0) = 0): 2 log(2 sin pi a).  For integer a
/// the removed zero mode shifts zeta(0) to -1 and the value becomes 2 log L.
double hurwitz_logdet(double a, double circumference);

/// Hurwitz zeta(s, a), a > 0, continued by Euler-Maclaurin.  Valid away from
/// s = 1; used only as an independent numeric oracle in tests.
double hurwitz_zeta(double s, double a);

}  // namespace torsionlab

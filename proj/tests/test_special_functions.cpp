/**
 * @file  test_special_functions.cpp
 * @brief Oracles: Dedekind eta, Jacobi theta_1, the Kronecker torsion closed
 *        form, Hurwitz zeta / circle log-determinants, E_1, and half-integer
 *        incomplete gamma.
 *
 * Mathematical basis:
 *   eta(i)      = Gamma(1/4) / (2 pi^{3/4})            (Chowla-Selberg)
 *   eta(tau+1)  = e^{i pi/12} eta(tau)
 *   eta(-1/tau) = sqrt(-i tau) eta(tau)
 *   theta_1(z|tau): odd in z, zero at z = 0, and its product and q-series
 *   representations agree identically; theta_1'(0) = 2 pi eta(tau)^3.
 *   zeta_H(0, a)  = 1/2 - a,   zeta_H(-1, a) = -(a^2 - a + 1/6)/2,
 *   zeta_H(2, 1/4) = pi^2 + 8 G   (G = Catalan).
 *   Circle determinant: logdet' over the family (2 pi (m+a)/L)^2 equals
 *   2 log(2 sin pi a) for non-integral a (independent of L, since the family
 *   zeta vanishes at 0) and 2 log L for integral a (zero mode removed).
 *
 * Tolerances are stated per check; frozen decimal targets carry >= 15
 * significant digits.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "torsionlab/special_functions.hpp"

using namespace torsionlab;
using std::abs;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCatalan = 0.91596559417721901505;
const cplx kI(0.0, 1.0);
}  // namespace

TEST_CASE("eta(i) equals the Chowla-Selberg closed form to 1e-13") {
  const cplx eta_i = dedekind_eta(cplx(0.0, 1.0));
  const double closed = std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75));
  CHECK(abs(eta_i.imag()) < 1e-15);
  CHECK(abs(eta_i.real() - closed) < 1e-13);
  CHECK(abs(eta_i.real() - 0.76822542232605658) < 1e-13);
}

TEST_CASE("eta transforms under T and S to 1e-12") {
  const cplx tau(0.3, 1.1);
  // T: eta(tau+1) = e^{i pi / 12} eta(tau)
  const cplx lhs_t = dedekind_eta(tau + 1.0);
  const cplx rhs_t = std::exp(kI * kPi / 12.0) * dedekind_eta(tau);
  CHECK(abs(lhs_t - rhs_t) < 1e-12);
  // S: eta(-1/tau) = sqrt(-i tau) eta(tau)
  const cplx lhs_s = dedekind_eta(-1.0 / tau);
  const cplx rhs_s = std::sqrt(-kI * tau) * dedekind_eta(tau);
  CHECK(abs(lhs_s - rhs_s) < 1e-12);
}

TEST_CASE("theta_1 is odd with a simple zero of slope 2 pi eta^3") {
  const cplx tau(0.15, 1.3);
  for (const cplx z : {cplx(0.21, 0.0), cplx(0.1, 0.07), cplx(-0.4, 0.2)}) {
    CHECK(abs(theta1_series(-z, tau) + theta1_series(z, tau)) < 1e-13);
  }
  CHECK(abs(theta1_series(cplx(0.0, 0.0), tau)) < 1e-14);
  // theta_1(z)/z -> theta_1'(0) = 2 pi eta(tau)^3 as z -> 0.
  const cplx z(1e-5, 0.0);
  const cplx slope = theta1_series(z, tau) / z;
  const cplx eta3 = std::pow(dedekind_eta(tau), 3.0);
  CHECK(abs(slope - 2.0 * kPi * eta3) / abs(2.0 * kPi * eta3) < 1e-8);
}

TEST_CASE("theta_1 product and series agree on a 25-point grid to 1e-10") {
  const cplx zs[5] = {cplx(0.13, 0.07), cplx(0.25, 0.0), cplx(0.4, 0.2),
                      cplx(-0.3, 0.11), cplx(0.05, -0.03)};
  const cplx taus[5] = {cplx(0.0, 1.0), cplx(0.5, 1.0), cplx(-0.3, 0.8),
                        cplx(0.1, 2.0), cplx(-0.45, 1.3)};
  for (const cplx& tau : taus)
    for (const cplx& z : zs) {
      const cplx a = theta1_product(z, tau);
      const cplx b = theta1_series(z, tau);
      CHECK(abs(a - b) <= 1e-10 * std::max(1.0, abs(b)));
    }
}

TEST_CASE("theta_1 series convention is -i times the classical sine series") {
  const cplx tau(0.2, 0.9);
  const cplx z(0.3, 0.12);
  CHECK(abs(theta1_series(z, tau) + kI * theta1_classical(z, tau)) < 1e-13);
}

TEST_CASE("Kronecker torsion closed form hits frozen targets to 1e-12") {
  CHECK(abs(log_kronecker_torsion(0.5, 0.0, cplx(0.0, 1.0)) -
            0.17328679513998632) < 1e-12);
  CHECK(abs(log_kronecker_torsion(0.25, 0.25, cplx(0.0, 1.0)) -
            0.086643397569993164) < 1e-12);
  CHECK(abs(log_kronecker_torsion(0.5, 0.0, cplx(0.5, 1.0)) -
            0.16581698948018063) < 1e-12);
  CHECK(abs(kronecker_torsion(0.5, 0.0, cplx(0.0, 1.0)) -
            std::exp(0.17328679513998632)) < 1e-12);
}

TEST_CASE("Kronecker torsion is periodic in the character to 1e-9") {
  const cplx tau(0.3, 1.2);
  const double base = log_kronecker_torsion(0.3, 0.14, tau);
  CHECK(abs(log_kronecker_torsion(1.3, 0.14, tau) - base) < 1e-9);
  CHECK(abs(log_kronecker_torsion(0.3, 1.14, tau) - base) < 1e-9);
}

TEST_CASE("E_1 matches frozen references and the large-x asymptotics") {
  CHECK(abs(exp_int_e1(1.0) - 0.21938393439552028) < 1e-14);
  CHECK(abs(exp_int_e1(0.5) - 0.55977359477616081) < 1e-14);
  // E_1(x) = e^{-x}/x (1 - 1/x + 2/x^2 - ...) for large x
  const double x = 40.0;
  const double asym =
      std::exp(-x) / x * (1.0 - 1.0 / x + 2.0 / (x * x) - 6.0 / (x * x * x));
  CHECK(abs(exp_int_e1(x) - asym) < 1e-4 * asym);
  // monotone decreasing
  CHECK(exp_int_e1(2.0) < exp_int_e1(1.0));
}

TEST_CASE("half-integer upper incomplete gamma: closed forms and recurrence") {
  for (const double x : {0.1, 0.7, 2.5, 9.0}) {
    // Gamma(1, x) = e^{-x}
    CHECK(abs(inc_gamma_half(2, x) - std::exp(-x)) < 1e-14);
    // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
    CHECK(abs(inc_gamma_half(1, x) - std::sqrt(kPi) * std::erfc(std::sqrt(x)))
          < 1e-13);
    // Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}  for s = k/2
    for (const int k2 : {1, 2, 3, 4, 5}) {
      const double s = 0.5 * k2;
      const double lhs = inc_gamma_half(k2 + 2, x);
      const double rhs = s * inc_gamma_half(k2, x) + std::pow(x, s) * std::exp(-x);
      CHECK(abs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("Hurwitz zeta: exact values at s = 0, -1 and at s = 2, a = 1/4") {
  for (const double a : {0.125, 0.25, 0.5, 0.9}) {
    CHECK(abs(hurwitz_zeta(0.0, a) - (0.5 - a)) < 1e-13);
    CHECK(abs(hurwitz_zeta(-1.0, a) + 0.5 * (a * a - a + 1.0 / 6.0)) < 1e-13);
  }
  CHECK(abs(hurwitz_zeta(2.0, 0.25) - (kPi * kPi + 8.0 * kCatalan)) < 1e-11);
}

TEST_CASE("circle logdet: 2 log(2 sin pi a), L-independent for non-integral a") {
  CHECK(abs(hurwitz_logdet(0.25) - std::log(2.0)) < 1e-13);
  CHECK(abs(hurwitz_logdet(0.5) - 2.0 * std::log(2.0)) < 1e-13);
  for (const double a : {0.1, 0.25, 0.37}) {
    const double expect = 2.0 * std::log(2.0 * std::sin(kPi * a));
    CHECK(abs(hurwitz_logdet(a) - expect) < 1e-12);
    for (const double length : {0.5, 1.0, 3.0})
      CHECK(abs(hurwitz_logdet(a, length) - expect) < 1e-12);
  }
  // Integral a: zero mode removed, logdet' = 2 log L.
  CHECK(abs(hurwitz_logdet(0.0, 1.0)) < 1e-13);
  CHECK(abs(hurwitz_logdet(0.0, 3.0) - 2.0 * std::log(3.0)) < 1e-13);
  CHECK(abs(hurwitz_logdet(2.0, 0.5) - 2.0 * std::log(0.5)) < 1e-13);
}

TEST_CASE("circle logdet agrees with a finite-difference zeta derivative") {
  // Independent oracle: logdet = -zeta'(0) with
  //   zeta(s) = (L/2pi)^{2s} [zeta_H(2s, a) + zeta_H(2s, 1-a)],
  // differentiated by a central difference at s = 0 (O(h^2), h = 1e-5).
  const double a = 0.31, length = 1.7, h = 1e-5;
  const auto zeta = [&](double s) {
    return std::pow(length / (2.0 * kPi), 2.0 * s) *
           (hurwitz_zeta(2.0 * s, a) + hurwitz_zeta(2.0 * s, 1.0 - a));
  };
  const double fd = -(zeta(h) - zeta(-h)) / (2.0 * h);
  CHECK(abs(hurwitz_logdet(a, length) - fd) < 1e-8);
}

/**
 * @file special_functions.cpp
 * @brief Implementations of the modular-form and determinant oracles.
 */
#include "torsionlab/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace torsionlab {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr cplx kI{0.0, 1.0};
constexpr double kQTruncation = 1e-18;
constexpr int kMaxFactors = 500;

void require_upper_half(cplx tau, const char* who) {
  if (!(tau.imag() > 0.0))
    throw std::domain_error(std::string(who) + ": Im tau must be positive");
}
}  // namespace

cplx dedekind_eta(cplx tau) {
  require_upper_half(tau, "dedekind_eta");
  const cplx q = std::exp(2.0 * kPi * kI * tau);
  const double absq = std::abs(q);
  cplx prod = 1.0;
  double qk = absq;
  for (int k = 1; k <= kMaxFactors && qk >= kQTruncation; ++k, qk *= absq)
    prod *= 1.0 - std::pow(q, k);
  // principal branch of q^{1/24} = e^{pi i tau / 12}
  return std::exp(kPi * kI * tau / 12.0) * prod;
}

cplx theta1_product(cplx w, cplx tau) {
  require_upper_half(tau, "theta1_product");
  const double absq = std::abs(std::exp(2.0 * kPi * kI * tau));
  // Symmetric truncation: the index pair (k, -1-k), k >= 0, contributes the
  // factors (1 - e^{2 pi i (k tau - w)}) (eps = +1) and
  // (1 - e^{2 pi i ((k+1) tau + w)}) (eps = -1).  Pairing preserves the odd
  // symmetry theta1(-w) = -theta1(w) at every finite order.
  cplx prod = 1.0;
  double qk = 1.0;  // |q|^k
  for (int k = 0; k < kMaxFactors; ++k, qk *= absq) {
    prod *= 1.0 - std::exp(2.0 * kPi * kI * (static_cast<double>(k) * tau - w));
    prod *= 1.0 - std::exp(2.0 * kPi * kI * (static_cast<double>(k + 1) * tau + w));
    if (qk < kQTruncation && k > 0) break;
  }
  return -dedekind_eta(tau) * std::exp(kPi * kI * (w + tau / 6.0)) * prod;
}

cplx theta1_classical(cplx w, cplx tau) {
  require_upper_half(tau, "theta1_classical");
  const cplx qh = std::exp(kPi * kI * tau);  // nome e^{pi i tau}
  const double absqh = std::abs(qh);
  cplx sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k < kMaxFactors; ++k, sign = -sign) {
    const double e = (k + 0.5) * (k + 0.5);
    if (std::pow(absqh, e) < kQTruncation && k > 0) break;
    sum += sign * std::pow(qh, e) * std::sin((2 * k + 1) * kPi * w);
  }
  return 2.0 * sum;
}

cplx theta1_series(cplx w, cplx tau) {
  // Independent series in the product normalization (= -i times classical).
  return -kI * theta1_classical(w, tau);
}

double log_kronecker_torsion(double u, double v, cplx tau) {
  require_upper_half(tau, "kronecker_torsion");
  const double uf = u - std::floor(u), vf = v - std::floor(v);
  if (std::min(uf, 1.0 - uf) < 1e-14 && std::min(vf, 1.0 - vf) < 1e-14)
    throw std::domain_error(
        "kronecker_torsion: trivial character (u,v)=(0,0); cohomology is "
        "nonvanishing and the closed form does not apply");
  const cplx val = std::exp(kPi * kI * (v * v) * tau) *
                   theta1_product(cplx(u) - tau * v, tau) / dedekind_eta(tau);
  return std::log(std::abs(val));
}

double kronecker_torsion(double u, double v, cplx tau) {
  return std::exp(log_kronecker_torsion(u, v, tau));
}

double exp_int_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_int_e1: requires x > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= -x / k;
      sum -= term / k;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Modified Lentz continued fraction:
  // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...))))
  double b = x + 1.0;
  double c = b, d = 0.0, f = b;
  for (int i = 1; i <= 80; ++i) {
    const double a = -static_cast<double>(i) * i;
    b = x + 2.0 * i + 1.0;
    d = b + a * d;
    if (std::abs(d) < 1e-300) d = 1e-300;
    d = 1.0 / d;
    c = b + a / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x) / f;
}

double inc_gamma_half(int k2, double x) {
  if (k2 < 1) throw std::domain_error("inc_gamma_half: order must be >= 1/2");
  const double sqpi = std::sqrt(kPi);
  switch (k2) {
    case 1: return sqpi * std::erfc(std::sqrt(x));
    case 2: return std::exp(-x);
    case 3: return 0.5 * sqpi * std::erfc(std::sqrt(x)) +
                   std::sqrt(x) * std::exp(-x);
    case 4: return (1.0 + x) * std::exp(-x);
    default: {
      // Gamma(s+1, x) = s Gamma(s, x) + x^s e^{-x}
      const double s = 0.5 * (k2 - 2);
      return s * inc_gamma_half(k2 - 2, x) + std::pow(x, s) * std::exp(-x);
    }
  }
}

double hurwitz_logdet(double a) {
  const double frac = a - std::floor(a);
  if (std::min(frac, 1.0 - frac) < 1e-15) return 0.0;  // zero mode removed
  return 2.0 * std::log(2.0 * std::sin(kPi * frac));
}

double hurwitz_logdet(double a, double circumference) {
  if (!(circumference > 0.0))
    throw std::domain_error("hurwitz_logdet: circumference must be positive");
  const double frac = a - std::floor(a);
  if (std::min(frac, 1.0 - frac) < 1e-15)
    return 2.0 * std::log(circumference);
  return 2.0 * std::log(2.0 * std::sin(kPi * frac));
}

double hurwitz_zeta(double s, double a) {
  if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: requires a > 0");
  if (std::abs(s - 1.0) < 1e-12)
    throw std::domain_error("hurwitz_zeta: pole at s = 1");
  // Euler-Maclaurin: sum_{k<N} (k+a)^{-s} + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
  //                  + sum_j B_{2j}/(2j)! * (s)_{2j-1} (N+a)^{-s-2j+1}
  constexpr int N = 24;
  static const double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                5.0 / 66, -691.0 / 2730, 7.0 / 6};
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(k + a, -s);
  const double Na = N + a;
  sum += std::pow(Na, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Na, -s);
  double rising = s;  // (s)_{2j-1} built incrementally
  double fact = 2.0;  // (2j)!
  double powNa = std::pow(Na, -s - 1.0);
  for (int j = 1; j <= 7; ++j) {
    sum += bern[j - 1] / fact * rising * powNa;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    powNa /= Na * Na;
  }
  return sum;
}

}  // namespace torsionlab

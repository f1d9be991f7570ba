/**
 * @file rational.hpp
 * @brief Exact rational arithmetic for the ghost-exponent ledger.
 *
 * The partition-ledger bookkeeping compares products of determinant factors
 * whose exponents are small rationals (multiples of 1/2).  Floating point
 * would blur exactly the distinction the ledger exists to record, so the
 * exponents are kept as gcd-normalized int64 fractions p/q with q > 0 and
 * serialized as the string "p/q".
 */
#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace torsionlab {

/// Exact fraction p/q, always normalized: gcd(|p|,q) = 1, q > 0, 0 = 0/1.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t p, std::int64_t q = 1) : num_(p), den_(q) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }

  bool is_zero() const { return num_ == 0; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Canonical serialization "p/q" (always includes the denominator).
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p/q" or a bare integer "p".
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)),
                    std::stoll(s.substr(slash + 1)));
  }

private:
  void normalize() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace torsionlab

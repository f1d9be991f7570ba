/**
 * @file  test_rational.cpp
 * @brief Exact rational arithmetic used by the partition-function ledger.
 *
 * Mathematical basis:
 *   Q is a field; every value has a unique representative p/q with q > 0 and
 *   gcd(|p|, q) = 1.  The ledger only ever adds, subtracts, and compares
 *   half-integer multiplicities, so correctness here is what makes the
 *   "exact rational bookkeeping" claim of the partition tests meaningful.
 *
 * All checks are exact (integer) — no tolerances.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "torsionlab/rational.hpp"

using torsionlab::Rational;

TEST_CASE("canonical form: reduced, positive denominator") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(1, -2));
  CHECK(Rational(1, -2).num() == -1);
  CHECK(Rational(1, -2).den() == 2);
  CHECK(Rational(0, -7).num() == 0);
  CHECK(Rational(0, -7).den() == 1);
  CHECK(Rational(42).den() == 1);
}

TEST_CASE("field arithmetic") {
  // 1/2 + 1/3 = 5/6, 1/2 - 1/3 = 1/6, (2/3)(9/4) = 3/2, (1/2)/(3/4) = 2/3
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(3, 4) == Rational(2, 3));

  Rational acc(0);
  acc += Rational(-3, 2);
  acc -= Rational(1, 2);
  CHECK(acc == Rational(-2));
  CHECK(acc.is_zero() == false);
  CHECK((acc + Rational(2)).is_zero());
}

TEST_CASE("ordering is the rational order, not lexicographic") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(!(Rational(2, 4) < Rational(1, 2)));
  CHECK(Rational(7, 5) != Rational(7, 6));
}

TEST_CASE("string form p/q round-trips through parse") {
  CHECK(Rational(5, 6).str() == "5/6");
  CHECK(Rational(-7, 3).str() == "-7/3");
  CHECK(Rational(4).str() == "4");
  for (const char* s : {"5/6", "-7/3", "4", "0", "-3/2"}) {
    const Rational r = Rational::parse(s);
    CHECK(r.str() == s);
    CHECK(Rational::parse(r.str()) == r);
  }
  std::ostringstream os;
  os << Rational(-1, 2);
  CHECK(os.str() == "-1/2");
}

TEST_CASE("to_double matches the quotient") {
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5).epsilon(0));
  CHECK(Rational(-3, 8).to_double() == -0.375);
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

/**
 * @file  test_geometry.cpp
 * @brief Flat tori, complex tori, characters, metric deformation paths, and
 *        the variation operator alpha = Gamma^{-1} dGamma/ds.
 *
 * Mathematical basis:
 *   For a Gram matrix G:  volume = sqrt(det G),  scale = (det G)^{1/n},
 *   |xi|_*^2 = xi^T G^{-1} xi,  theta_gap = min_{k != 0} k^T G k.
 *   A complex torus C / (Z + tau Z) with area scale a has period Gram
 *       G = (a / Im tau) [[|tau|^2, Re tau], [Re tau, 1]]
 *   (first generator = tau-period).
 *   Path families: conformal G(s) = e^{2s} G0 (d/ds log vol = n),
 *   diagonal-stretch and shear are det-preserving by construction.
 *   On the conformal path the orthonormal-frame variation operator is
 *   exactly (n - 2k) id on Lambda^k.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "torsionlab/exterior.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/special_functions.hpp"  // for the cplx alias

using namespace torsionlab;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {
MatrixXd gram2(double a, double b, double c, double d) {
  MatrixXd g(2, 2);
  g << a, b, c, d;
  return g;
}

/// Runs f, returns the message of the expected exception ("" if none thrown).
template <typename E, typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  } catch (...) {
  }
  return {};
}
}  // namespace

TEST_CASE("FlatTorus invariants: volume, scale, dual norm, theta gap") {
  const FlatTorus t(gram2(2, 1, 1, 2), "hex-ish");
  CHECK(t.n() == 2);
  CHECK(t.name() == "hex-ish");
  CHECK(t.volume() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(t.scale() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // G^{-1} = [[2,-1],[-1,2]]/3: dual norm of dx^1 is 2/3.
  VectorXd e1(2);
  e1 << 1.0, 0.0;
  CHECK(t.dual_norm_sq(e1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // min k^T G k over k in Z^2 \ 0 is 2, attained at (1,0) and (1,-1).
  CHECK(t.theta_gap() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((t.gram_inv() * t.gram() - MatrixXd::Identity(2, 2))
            .lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("FlatTorus rejects bad Gram matrices, naming the geometry") {
  const std::string msg = thrown_message<std::invalid_argument>(
      [] { FlatTorus(gram2(1, 0, 0, -1), "bad"); });
  CHECK(msg.find("geometry 'bad'") != std::string::npos);
  CHECK(msg.find("positive-definite") != std::string::npos);
  CHECK_THROWS_AS(FlatTorus(MatrixXd::Zero(2, 3), "rect"),
                  std::invalid_argument);
  // asymmetric beyond 1e-14 is rejected too
  CHECK_THROWS_AS(FlatTorus(gram2(1, 0.1, 0.2, 1), "skew"),
                  std::invalid_argument);
}

TEST_CASE("ComplexTorus period Gram and the square-lattice special case") {
  const ComplexTorus sq(cplx(0.0, 1.0));
  CHECK((sq.real_torus().gram() - MatrixXd::Identity(2, 2))
            .lpNorm<Eigen::Infinity>() < 1e-15);
  const ComplexTorus t(cplx(0.5, 1.0), 2.0, 0.25, 0.125);
  const MatrixXd g = t.real_torus().gram();
  // (a / Im tau) [[|tau|^2, Re tau], [Re tau, 1]] with a = 2, tau = 1/2 + i
  CHECK(g(0, 0) == doctest::Approx(2.0 * 1.25).epsilon(1e-15));
  CHECK(g(0, 1) == doctest::Approx(2.0 * 0.5).epsilon(1e-15));
  CHECK(g(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(t.real_torus().volume() == doctest::Approx(2.0).epsilon(1e-14));
  const Character chi = t.real_character();
  REQUIRE(chi.n() == 2);
  CHECK(chi.u()(0) == 0.25);
  CHECK(chi.u()(1) == 0.125);
  CHECK_THROWS_AS(ComplexTorus(cplx(0.5, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ComplexTorus(cplx(0.0, 1.0), -2.0), std::invalid_argument);
}

TEST_CASE("Character triviality detection") {
  VectorXd u(2);
  u << 0.0, 0.0;
  CHECK(Character(u).trivial());
  u << 0.25, 0.0;
  CHECK(!Character(u).trivial());
}

TEST_CASE("metric paths: family semantics and determinant behaviour") {
  const FlatTorus base(gram2(2, 1, 1, 2), "base");

  const MetricPath conf(base, MetricPath::Kind::Conformal);
  CHECK((conf.gram_at(0.3) - std::exp(0.6) * base.gram())
            .lpNorm<Eigen::Infinity>() < 1e-13);
  CHECK((conf.gram_derivative_at(0.3) - 2.0 * conf.gram_at(0.3))
            .lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(conf.log_volume_derivative_at(0.45) ==
        doctest::Approx(2.0).epsilon(1e-12));  // = n

  const MetricPath diag(base, MetricPath::Kind::DiagonalStretch);
  const MetricPath shear(base, MetricPath::Kind::Shear);
  for (const double s : {-0.5, -0.2, 0.4}) {
    CHECK(diag.gram_at(s).determinant() ==
          doctest::Approx(base.gram().determinant()).epsilon(1e-12));
    CHECK(shear.gram_at(s).determinant() ==
          doctest::Approx(base.gram().determinant()).epsilon(1e-12));
    CHECK(std::abs(diag.log_volume_derivative_at(s)) < 1e-12);
    CHECK(std::abs(shear.log_volume_derivative_at(s)) < 1e-12);
  }
  CHECK((MetricPath(base, MetricPath::Kind::Constant).gram_at(0.7) -
         base.gram())
            .lpNorm<Eigen::Infinity>() == 0.0);

  // gram_derivative_at is the exact derivative (O(h^2) difference check)
  const double h = 1e-5;
  for (const MetricPath* p : {&diag, &shear}) {
    const MatrixXd fd = (p->gram_at(0.2 + h) - p->gram_at(0.2 - h)) / (2 * h);
    CHECK((p->gram_derivative_at(0.2) - fd).lpNorm<Eigen::Infinity>() < 1e-9);
  }

  CHECK(MetricPath::parse_kind("conformal") == MetricPath::Kind::Conformal);
  CHECK(MetricPath::parse_kind("diagonal-stretch") ==
        MetricPath::Kind::DiagonalStretch);
  CHECK(MetricPath::parse_kind("shear") == MetricPath::Kind::Shear);
  CHECK(thrown_message<std::invalid_argument>([] {
          MetricPath::parse_kind("twisty");
        }).find("unknown metric path family") != std::string::npos);
}

TEST_CASE("alpha on the conformal path is exactly (n - 2k) per degree") {
  const int n = 3;
  const FlatTorus base(MatrixXd::Identity(n, n) * 1.3, "t3");
  const Exterior ext(n);
  const MetricPath conf(base, MetricPath::Kind::Conformal);
  for (const double s : {0.0, 0.35}) {
    const MatrixXd alpha = alpha_operator_onb(conf, s, ext);
    for (int i = 0; i < ext.dim(); ++i) {
      for (int j = 0; j < ext.dim(); ++j) {
        const double expect =
            (i == j) ? double(n - 2 * ext.degree_of_index(i)) : 0.0;
        CHECK(std::abs(alpha(i, j) - expect) < 1e-11);
      }
    }
  }
}

TEST_CASE("alpha_onb matches M^{-1/2} dM/ds M^{-1/2} by finite differences") {
  const FlatTorus base(gram2(2, 1, 1, 2), "base");
  const Exterior ext(2);
  const MetricPath shear(base, MetricPath::Kind::Shear);
  const double s = 0.15, h = 1e-5;

  const MatrixXd m0 = ext.gram(shear.gram_at(s));
  const MatrixXd dm =
      (ext.gram(shear.gram_at(s + h)) - ext.gram(shear.gram_at(s - h))) /
      (2 * h);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m0);
  const MatrixXd pinv = es.operatorInverseSqrt();
  const MatrixXd expect = pinv * dm * pinv;
  const MatrixXd alpha = alpha_operator_onb(shear, s, ext);
  CHECK((alpha - expect).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((alpha - alpha.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
}

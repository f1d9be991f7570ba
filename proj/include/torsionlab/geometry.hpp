/**
 * @file geometry.hpp
 * @brief Flat tori R^n/Z^n with metric data, unitary characters of Z^n,
 *        complex-torus moduli, mode enumeration, and one-parameter metric
 *        deformations with their derivative operator alpha.
 *
 * The lattice is fixed to Z^n; general lattices are absorbed into the Gram
 * matrix G (change of basis).  Fourier modes of the character-twisted bundle
 * are the shifted lattice vectors xi_m = m + u with squared dual length
 * |xi|^2 = xi^T G^{-1} xi.  Mode lists are always ordered lexicographically
 * so that every downstream reduction is bit-reproducible.
 */
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "torsionlab/exterior.hpp"

namespace torsionlab {

/// Flat torus R^n/Z^n with metric G_ij dx^i dx^j.  Immutable after
/// construction; validates symmetry (1e-14) and positive-definiteness.
class FlatTorus {
 public:
  explicit FlatTorus(Eigen::MatrixXd gram, std::string name = "torus");

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& gram_inv() const { return gram_inv_; }
  double volume() const { return volume_; }           // sqrt(det G)
  double scale() const { return scale_; }             // (det G)^{1/n}

  /// xi^T G^{-1} xi  (the squared dual norm of the one-form sum xi_j dx^j).
  double dual_norm_sq(const Eigen::VectorXd& xi) const;

  /// min_{k in Z^n \ 0} k^T G k.  Controls the exponentially small remainder
  /// of the Poisson-resummed heat trace: the flat small-t behaviour of the
  /// mode sum is accurate up to O(e^{-theta_gap/(4t)}).
  double theta_gap() const;

 private:
  int n_;
  std::string name_;
  Eigen::MatrixXd gram_, gram_inv_;
  double volume_, scale_;
};

/// Unitary character of pi_1 = Z^n: rho(m) = exp(2 pi i m.u), u in [0,1)^n.
class Character {
 public:
  Character() = default;
  explicit Character(Eigen::VectorXd u);

  int n() const { return static_cast<int>(u_.size()); }
  const Eigen::VectorXd& u() const { return u_; }
  bool trivial() const;

 private:
  Eigen::VectorXd u_;
};

/// Complex torus C/(Z + tau Z) with a flat Hermitian area scale and a
/// character (u,v) of the period lattice: chi(m,n) = exp(2 pi i (m u + n v)).
/// Convention (fixed once): the FIRST lattice generator is the tau-period, so
/// the real Gram of the period lattice is
///     G = (area_scale / Im tau) [[|tau|^2, Re tau], [Re tau, 1]].
/// With this pairing the spectral Dolbeault torsion equals the closed form
/// kronecker_torsion(u, v, tau) at the same arguments.
struct ComplexTorus {
  std::complex<double> tau;
  double area_scale = 1.0;
  double u = 0.0, v = 0.0;

  ComplexTorus(std::complex<double> tau_, double area_scale_ = 1.0,
               double u_ = 0.0, double v_ = 0.0);

  FlatTorus real_torus() const;
  Character real_character() const;
};

/// All integer vectors m with dual_norm_sq(m + u) <= cutoff, in lexicographic
/// order.  Completeness is guaranteed by the ellipsoid bounding box
/// |(m+u)_i| <= sqrt(cutoff * G_ii).  Throws a resource error if the count
/// would exceed max_modes.
std::vector<Eigen::VectorXi> enumerate_modes(const FlatTorus& torus,
                                             const Character& chi,
                                             double cutoff,
                                             std::size_t max_modes = 80000000);

/// Hodge inner product Gram matrix on Lambda^k, including the sqrt(det G)
/// volume factor (the degree-k diagonal block of Exterior::gram).
Eigen::MatrixXd lambda_inner_product(const FlatTorus& torus, int degree);

/// One-parameter family of metrics G(s) with closed-form derivative.
/// Families: "conformal"  G(s) = e^{2s} G0;
///           "diagonal-stretch"  G(s) = S G0 S, S = diag(e^{s d_i}) with a
///               trace-free default direction d = (1,-1,0,...);
///           "shear"  G(s) = S^T G0 S, S = I + s N, N strictly upper
///               triangular (default N_{12} = 1); det-preserving.
class MetricPath {
 public:
  enum class Kind { Conformal, DiagonalStretch, Shear, Constant };

  MetricPath(FlatTorus base, Kind kind, Eigen::VectorXd params = {});
  static Kind parse_kind(const std::string& name);
  static std::string kind_name(Kind kind);

  const FlatTorus& base() const { return base_; }
  Kind kind() const { return kind_; }

  Eigen::MatrixXd gram_at(double s) const;
  Eigen::MatrixXd gram_derivative_at(double s) const;
  FlatTorus torus_at(double s) const;

  /// The conformal weight d/ds log sqrt(det G(s)) at s (used by complex-kind
  /// specs, whose compatible flat metric deformations are area scalings).
  double log_volume_derivative_at(double s) const;

 private:
  FlatTorus base_;
  Kind kind_;
  Eigen::VectorXd params_;
};

/// alpha(s) = Gamma(s)^{-1} dGamma/ds on the full exterior algebra, where
/// Gamma(s) relates the deformed to the base inner product.  Because
/// Gamma(s) = M(G0)^{-1} M(G(s)), alpha = M(G(s))^{-1} dM/ds independently of
/// the base point.  Block-diagonal in degree, self-adjoint w.r.t. M(G(s)).
Eigen::MatrixXd alpha_operator(const MetricPath& path, double s,
                               const Exterior& ext);

/// The same operator expressed in the orthonormal frame of M(G(s)):
/// alpha_onb = M^{-1/2} dM/ds M^{-1/2} (symmetric).  For the conformal path
/// this is exactly (n - 2k) Id on Lambda^k.
Eigen::MatrixXd alpha_operator_onb(const MetricPath& path, double s,
                                   const Exterior& ext);

}  // namespace torsionlab

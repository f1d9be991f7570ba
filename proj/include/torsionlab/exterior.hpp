/**
 * @file exterior.hpp
 * @brief Exterior algebra Lambda(R^n) as bitmask tables: wedge signs, left
 *        exterior multiplication, and the metric Gram matrix on forms.
 *
 * Basis elements of Lambda are index sets I subseteq {1..n} stored as bit
 * masks (bit i-1 <=> dx^i present), enumerated in (degree, value) order so
 * that form degree is a contiguous block structure.  The inner product on
 * k-forms induced by a metric G on the base is
 *     <dx^I, dx^J> = det( (G^{-1})[I, J] ) * sqrt(det G),
 * i.e. the minor of G^{-1} on rows I and columns J, times the volume factor.
 */
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace torsionlab {

/// Sign of e_I wedge e_J relative to e_{I cup J} (sorted), 0 if I and J meet.
/// Equals (-1)^{# inversions in the concatenation (I ascending, J ascending)}.
int wedge_sign(std::uint32_t I, std::uint32_t J);

/// Precomputed basis tables for Lambda(R^n), n <= 16.
class Exterior {
 public:
  explicit Exterior(int n);

  int n() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<std::uint32_t>& masks() const { return masks_; }
  int index_of(std::uint32_t mask) const { return pos_[mask]; }
  int degree_of_index(int idx) const { return degree_[idx]; }

  /// Matrix of left exterior multiplication e_I wedge (entries in {-1,0,+1}).
  Eigen::MatrixXd eps(std::uint32_t I) const;

  /// Gram matrix of the basis {dx^I} under the metric-induced inner product
  /// including the volume factor sqrt(det G); block-diagonal in degree, SPD.
  Eigen::MatrixXd gram(const Eigen::MatrixXd& G) const;

  /// Directional derivative of gram(G) along a symmetric perturbation dG,
  /// computed exactly: d(det S) = sum_j det(S with column j <- dS column j),
  /// dG^{-1} = -G^{-1} dG G^{-1}, d sqrt(det G) = sqrt(det G) tr(G^{-1}dG)/2.
  Eigen::MatrixXd gram_derivative(const Eigen::MatrixXd& G,
                                  const Eigen::MatrixXd& dG) const;

 private:
  int n_;
  int dim_;
  std::vector<std::uint32_t> masks_;
  std::vector<int> pos_;
  std::vector<int> degree_;
};

}  // namespace torsionlab

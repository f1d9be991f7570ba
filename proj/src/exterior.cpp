/**
 * @file exterior.cpp
 * @brief Exterior algebra tables: signs, wedge operators, metric Grams.
 */
#include "torsionlab/exterior.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace torsionlab {

int wedge_sign(std::uint32_t I, std::uint32_t J) {
  if (I & J) return 0;
  int inversions = 0;
  for (std::uint32_t rest = I; rest; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    inversions += std::popcount(J & ((1u << i) - 1u));
  }
  return (inversions & 1) ? -1 : +1;
}

Exterior::Exterior(int n) : n_(n), dim_(1 << n) {
  if (n < 1 || n > 16) throw std::invalid_argument("Exterior: need 1 <= n <= 16");
  masks_.resize(dim_);
  for (int m = 0; m < dim_; ++m) masks_[m] = static_cast<std::uint32_t>(m);
  std::sort(masks_.begin(), masks_.end(),
            [](std::uint32_t a, std::uint32_t b) {
              const int pa = std::popcount(a), pb = std::popcount(b);
              return pa != pb ? pa < pb : a < b;
            });
  pos_.resize(dim_);
  degree_.resize(dim_);
  for (int i = 0; i < dim_; ++i) {
    pos_[masks_[i]] = i;
    degree_[i] = std::popcount(masks_[i]);
  }
}

Eigen::MatrixXd Exterior::eps(std::uint32_t I) const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const std::uint32_t J : masks_) {
    const int s = wedge_sign(I, J);
    if (s) E(pos_[I | J], pos_[J]) = s;
  }
  return E;
}

namespace {

// Minor of A on the (ascending) index lists rows/cols.
double minor_det(const Eigen::MatrixXd& A, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd S(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) S(a, b) = A(rows[a], cols[b]);
  return S.determinant();
}

// d(det S) along dS via column replacement (exact; robust for singular S).
double minor_det_derivative(const Eigen::MatrixXd& A, const Eigen::MatrixXd& dA,
                            const std::vector<int>& rows,
                            const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 0.0;
  Eigen::MatrixXd S(k, k), dS(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      S(a, b) = A(rows[a], cols[b]);
      dS(a, b) = dA(rows[a], cols[b]);
    }
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    Eigen::MatrixXd T = S;
    T.col(j) = dS.col(j);
    total += T.determinant();
  }
  return total;
}

std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (std::uint32_t rest = mask; rest; rest &= rest - 1)
    out.push_back(std::countr_zero(rest));
  return out;
}

}  // namespace

Eigen::MatrixXd Exterior::gram(const Eigen::MatrixXd& G) const {
  const Eigen::MatrixXd Ginv = G.inverse();
  const double vol = std::sqrt(G.determinant());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    const auto rows = mask_indices(masks_[a]);
    for (int b = 0; b < dim_; ++b) {
      if (degree_[a] != degree_[b]) continue;
      M(a, b) = minor_det(Ginv, rows, mask_indices(masks_[b])) * vol;
    }
  }
  return M;
}

Eigen::MatrixXd Exterior::gram_derivative(const Eigen::MatrixXd& G,
                                          const Eigen::MatrixXd& dG) const {
  const Eigen::MatrixXd Ginv = G.inverse();
  const Eigen::MatrixXd dGinv = -Ginv * dG * Ginv;
  const double vol = std::sqrt(G.determinant());
  const double dvol = 0.5 * vol * (Ginv * dG).trace();
  Eigen::MatrixXd dM = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    const auto rows = mask_indices(masks_[a]);
    for (int b = 0; b < dim_; ++b) {
      if (degree_[a] != degree_[b]) continue;
      const auto cols = mask_indices(masks_[b]);
      dM(a, b) = minor_det_derivative(Ginv, dGinv, rows, cols) * vol +
                 minor_det(Ginv, rows, cols) * dvol;
    }
  }
  return dM;
}

}  // namespace torsionlab

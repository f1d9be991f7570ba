/**
 * @file geometry.cpp
 * @brief Tori, characters, mode enumeration, metric paths.
 */
#include "torsionlab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace torsionlab {

FlatTorus::FlatTorus(Eigen::MatrixXd gram, std::string name)
    : n_(static_cast<int>(gram.rows())), name_(std::move(name)),
      gram_(std::move(gram)) {
  if (n_ < 1 || gram_.cols() != n_)
    throw std::invalid_argument("geometry '" + name_ + "': Gram matrix must be square");
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("geometry '" + name_ +
                                "': Gram matrix not symmetric within 1e-14");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("geometry '" + name_ +
                                "': Gram matrix is not positive-definite");
  gram_inv_ = gram_.inverse();
  volume_ = std::sqrt(gram_.determinant());
  scale_ = std::pow(gram_.determinant(), 1.0 / n_);
}

double FlatTorus::dual_norm_sq(const Eigen::VectorXd& xi) const {
  return xi.dot(gram_inv_ * xi);
}

double FlatTorus::theta_gap() const {
  // Search a box guaranteed to contain the minimizer of k^T G k: any k with
  // some |k_i| > sqrt(gap_candidate / lambda_min(G)) has k^T G k above the
  // best candidate already found among unit vectors.
  double best = gram_.diagonal().minCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
  const double lmin = es.eigenvalues().minCoeff();
  const int bound = static_cast<int>(std::floor(std::sqrt(best / lmin))) + 1;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(n_, -bound);
  while (true) {
    if (k.squaredNorm() > 0) {
      const Eigen::VectorXd kd = k.cast<double>();
      best = std::min(best, kd.dot(gram_ * kd));
    }
    int i = n_ - 1;
    while (i >= 0 && k[i] == bound) { k[i] = -bound; --i; }
    if (i < 0) break;
    ++k[i];
  }
  return best;
}

Character::Character(Eigen::VectorXd u) : u_(std::move(u)) {
  for (int i = 0; i < u_.size(); ++i) {
    u_[i] -= std::floor(u_[i]);     // wrap into [0,1)
    if (u_[i] >= 1.0) u_[i] = 0.0;  // guard the 1.0-epsilon wrap
  }
}

bool Character::trivial() const {
  for (int i = 0; i < u_.size(); ++i)
    if (std::min(u_[i], 1.0 - u_[i]) > 1e-14) return false;
  return true;
}

ComplexTorus::ComplexTorus(std::complex<double> tau_, double area_scale_,
                           double u_, double v_)
    : tau(tau_), area_scale(area_scale_), u(u_), v(v_) {
  if (!(tau.imag() > 0.0))
    throw std::invalid_argument("ComplexTorus: Im tau must be positive");
  if (!(area_scale > 0.0))
    throw std::invalid_argument("ComplexTorus: area_scale must be positive");
}

FlatTorus ComplexTorus::real_torus() const {
  Eigen::MatrixXd G(2, 2);
  const double c = area_scale / tau.imag();
  G << c * std::norm(tau), c * tau.real(), c * tau.real(), c;
  return FlatTorus(std::move(G), "complex-torus");
}

Character ComplexTorus::real_character() const {
  Eigen::VectorXd w(2);
  w << u, v;
  return Character(std::move(w));
}

std::vector<Eigen::VectorXi> enumerate_modes(const FlatTorus& torus,
                                             const Character& chi,
                                             double cutoff,
                                             std::size_t max_modes) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("enumerate_modes: cutoff must be > 0");
  const int n = torus.n();
  if (chi.n() != n) throw std::invalid_argument("enumerate_modes: character dimension mismatch");
  // Ellipsoid bounding box: for x^T G^{-1} x <= c, max |x_i| = sqrt(c G_ii).
  std::vector<int> lo(n), hi(n);
  std::size_t box = 1;
  for (int i = 0; i < n; ++i) {
    const double half = std::sqrt(cutoff * torus.gram()(i, i));
    lo[i] = static_cast<int>(std::ceil(-half - chi.u()[i]));
    hi[i] = static_cast<int>(std::floor(half - chi.u()[i]));
    if (hi[i] < lo[i]) return {};
    box *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    if (box > max_modes)
      throw std::length_error("enumerate_modes: mode count exceeds configured limit");
  }
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi m(n);
  Eigen::VectorXd xi(n);
  for (int i = 0; i < n; ++i) m[i] = lo[i];
  while (true) {
    for (int i = 0; i < n; ++i) xi[i] = m[i] + chi.u()[i];
    if (torus.dual_norm_sq(xi) <= cutoff) out.push_back(m);
    int i = n - 1;
    while (i >= 0 && m[i] == hi[i]) { m[i] = lo[i]; --i; }
    if (i < 0) break;
    ++m[i];
  }
  // Box iteration with the last index fastest is already lexicographic.
  return out;
}

Eigen::MatrixXd lambda_inner_product(const FlatTorus& torus, int degree) {
  const int n = torus.n();
  if (degree < 0 || degree > n)
    throw std::invalid_argument("lambda_inner_product: degree out of range");
  Exterior ext(n);
  const Eigen::MatrixXd M = ext.gram(torus.gram());
  // Collect the contiguous degree-k block.
  int start = 0;
  while (start < ext.dim() && ext.degree_of_index(start) != degree) ++start;
  int len = 0;
  while (start + len < ext.dim() && ext.degree_of_index(start + len) == degree) ++len;
  return M.block(start, start, len, len);
}

MetricPath::MetricPath(FlatTorus base, Kind kind, Eigen::VectorXd params)
    : base_(std::move(base)), kind_(kind), params_(std::move(params)) {
  const int n = base_.n();
  if (kind_ == Kind::DiagonalStretch && params_.size() == 0) {
    params_ = Eigen::VectorXd::Zero(n);
    params_[0] = 1.0;
    if (n > 1) params_[1] = -1.0;  // trace-free: det-preserving default
  }
  if (kind_ == Kind::Shear && params_.size() == 0) {
    params_ = Eigen::VectorXd::Zero(2);
    params_ << 0, 1;  // row 0, column 1 of the unipotent generator
  }
}

MetricPath::Kind MetricPath::parse_kind(const std::string& name) {
  if (name == "conformal") return Kind::Conformal;
  if (name == "diagonal-stretch") return Kind::DiagonalStretch;
  if (name == "shear") return Kind::Shear;
  if (name == "constant") return Kind::Constant;
  throw std::invalid_argument("unknown metric path family '" + name +
                              "' (known: conformal, diagonal-stretch, shear, constant)");
}

std::string MetricPath::kind_name(Kind kind) {
  switch (kind) {
    case Kind::Conformal: return "conformal";
    case Kind::DiagonalStretch: return "diagonal-stretch";
    case Kind::Shear: return "shear";
    case Kind::Constant: return "constant";
  }
  return "?";
}

Eigen::MatrixXd MetricPath::gram_at(double s) const {
  const int n = base_.n();
  const Eigen::MatrixXd& G0 = base_.gram();
  switch (kind_) {
    case Kind::Conformal:
      return std::exp(2.0 * s) * G0;
    case Kind::DiagonalStretch: {
      const Eigen::VectorXd d = (s * params_).array().exp();
      return d.asDiagonal() * G0 * d.asDiagonal();
    }
    case Kind::Shear: {
      Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
      const int i = static_cast<int>(params_[0]), j = static_cast<int>(params_[1]);
      S(i, j) = s;
      return S.transpose() * G0 * S;
    }
    case Kind::Constant:
      return G0;
  }
  return G0;
}

Eigen::MatrixXd MetricPath::gram_derivative_at(double s) const {
  const int n = base_.n();
  const Eigen::MatrixXd& G0 = base_.gram();
  switch (kind_) {
    case Kind::Conformal:
      return 2.0 * std::exp(2.0 * s) * G0;
    case Kind::DiagonalStretch: {
      const Eigen::VectorXd d = (s * params_).array().exp();
      const Eigen::VectorXd dd = params_.array() * d.array();
      return dd.asDiagonal() * G0 * d.asDiagonal() +
             Eigen::MatrixXd(d.asDiagonal() * G0 * dd.asDiagonal());
    }
    case Kind::Shear: {
      Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
      Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
      const int i = static_cast<int>(params_[0]), j = static_cast<int>(params_[1]);
      S(i, j) = s;
      N(i, j) = 1.0;
      return N.transpose() * G0 * S + S.transpose() * G0 * N;
    }
    case Kind::Constant:
      return Eigen::MatrixXd::Zero(n, n);
  }
  return Eigen::MatrixXd::Zero(n, n);
}

FlatTorus MetricPath::torus_at(double s) const {
  return FlatTorus(gram_at(s), base_.name());
}

double MetricPath::log_volume_derivative_at(double s) const {
  // d/ds log sqrt(det G) = tr(G^{-1} dG) / 2
  const Eigen::MatrixXd G = gram_at(s);
  return 0.5 * (G.inverse() * gram_derivative_at(s)).trace();
}

Eigen::MatrixXd alpha_operator(const MetricPath& path, double s,
                               const Exterior& ext) {
  const Eigen::MatrixXd G = path.gram_at(s);
  const Eigen::MatrixXd M = ext.gram(G);
  const Eigen::MatrixXd dM = ext.gram_derivative(G, path.gram_derivative_at(s));
  return M.llt().solve(dM);
}

Eigen::MatrixXd alpha_operator_onb(const MetricPath& path, double s,
                                   const Exterior& ext) {
  const Eigen::MatrixXd G = path.gram_at(s);
  const Eigen::MatrixXd M = ext.gram(G);
  const Eigen::MatrixXd dM = ext.gram_derivative(G, path.gram_derivative_at(s));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::MatrixXd Minvsqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  Eigen::MatrixXd a = Minvsqrt * dM * Minvsqrt;
  return 0.5 * (a + a.transpose());  // symmetrize against roundoff
}

}  // namespace torsionlab

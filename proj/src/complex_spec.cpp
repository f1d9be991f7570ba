/**
 * @file complex_spec.cpp
 * @brief Construction of per-mode matrices for Z2-graded complexes.
 */
#include "torsionlab/complex_spec.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

/// A (x) id_r with basis index = (index into A) * r + bundle index.
Eigen::MatrixXd kron_with_identity(const Eigen::MatrixXd& a, int r) {
  const auto rows = a.rows(), cols = a.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows * r, cols * r);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (a(i, j) == 0.0) continue;
      for (int k = 0; k < r; ++k) out(i * r + k, j * r + k) = a(i, j);
    }
  return out;
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  Eigen::MatrixXcd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

ConstantForm ConstantForm::scalar(
    int n, const std::vector<std::pair<std::uint32_t, cplx>>& components) {
  std::vector<FormTerm> terms;
  terms.reserve(components.size());
  for (const auto& [mask, c] : components) {
    FormTerm t;
    t.mask = mask;
    t.coeff = Eigen::MatrixXcd::Constant(1, 1, c);
    t.parity = 0;
    terms.push_back(std::move(t));
  }
  return ConstantForm(n, 1, std::move(terms));
}

ConstantForm::ConstantForm(int n, int r, std::vector<FormTerm> terms)
    : n_(n), r_(r), terms_(std::move(terms)) {
  if (n_ < 1 || n_ > 16) throw std::invalid_argument("ConstantForm: n out of range");
  if (r_ < 1) throw std::invalid_argument("ConstantForm: bundle rank must be >= 1");
  for (const auto& t : terms_) {
    if (t.mask >= (1u << n_))
      throw std::invalid_argument("ConstantForm: index set outside {1..n}");
    if (t.coeff.rows() != r_ || t.coeff.cols() != r_)
      throw std::invalid_argument("ConstantForm: coefficient must be r x r");
    if (!t.coeff.allFinite())
      throw std::invalid_argument("ConstantForm: non-finite coefficient");
    const int deg_par = std::popcount(t.mask) & 1;
    if (form_parity_ < 0)
      form_parity_ = deg_par;
    else if (form_parity_ != deg_par)
      throw std::invalid_argument(
          "ConstantForm: mixed form-degree parity across terms");
  }
}

std::vector<int> SuperconnectionData::fpar() const {
  std::vector<int> p(static_cast<std::size_t>(r0 + r1), 0);
  for (int i = 0; i < r1; ++i) p[static_cast<std::size_t>(r0 + i)] = 1;
  return p;
}

Eigen::MatrixXcd wedge_matrix(const ConstantForm& form, const Exterior& ext) {
  const int r = form.r();
  const Eigen::Index d = static_cast<Eigen::Index>(ext.dim()) * r;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& term : form.terms()) {
    for (int ji = 0; ji < ext.dim(); ++ji) {
      const std::uint32_t J = ext.masks()[static_cast<std::size_t>(ji)];
      const int s = wedge_sign(term.mask, J);
      if (s == 0) continue;
      const int sgn = ((term.parity * std::popcount(J)) & 1) ? -s : s;
      const Eigen::Index row0 =
          static_cast<Eigen::Index>(ext.index_of(term.mask | J)) * r;
      const Eigen::Index col0 = static_cast<Eigen::Index>(ji) * r;
      out.block(row0, col0, r, r) += static_cast<double>(sgn) * term.coeff;
    }
  }
  return out;
}

ComplexSpec ComplexSpec::de_rham(FlatTorus torus, Character chi,
                                 ConstantForm flux, std::string id) {
  if (flux.r() != 1)
    throw std::invalid_argument("de_rham: flux must be scalar-valued");
  return ComplexSpec(Kind::TwistedDeRham, std::move(torus), std::move(chi),
                     std::move(flux), {0}, std::move(id));
}

ComplexSpec ComplexSpec::de_rham(FlatTorus torus, Character chi, std::string id) {
  const int n = torus.n();
  return de_rham(std::move(torus), std::move(chi), ConstantForm(n, 1, {}),
                 std::move(id));
}

ComplexSpec ComplexSpec::superconnection(FlatTorus torus, Character chi,
                                         SuperconnectionData data,
                                         std::string id) {
  if (data.r0 < 0 || data.r1 < 0 || data.r0 + data.r1 < 1)
    throw std::invalid_argument("superconnection: invalid graded ranks");
  if (data.a.r() != data.r0 + data.r1)
    throw std::invalid_argument("superconnection: form rank != r0 + r1");
  return ComplexSpec(Kind::Superconnection, std::move(torus), std::move(chi),
                     std::move(data.a), data.fpar(), std::move(id));
}

ComplexSpec::ComplexSpec(Kind kind, FlatTorus torus, Character chi,
                         ConstantForm form, std::vector<int> fpar, std::string id)
    : kind_(kind), id_(std::move(id)), torus_(std::move(torus)),
      chi_(std::move(chi)), form_(std::move(form)), fpar_(std::move(fpar)) {
  const int n = torus_.n();
  if (chi_.n() != n)
    throw std::invalid_argument("ComplexSpec: character dimension mismatch");
  if (form_.n() != n)
    throw std::invalid_argument("ComplexSpec: form dimension mismatch");
  r_ = static_cast<int>(fpar_.size());
  if (r_ != form_.r())
    throw std::invalid_argument("ComplexSpec: bundle rank mismatch");
  for (int p : fpar_)
    if (p != 0 && p != 1)
      throw std::invalid_argument("ComplexSpec: bundle parities must be 0/1");

  // Every term must be odd for the total grading, and its coefficient must
  // genuinely carry the declared bundle parity.
  for (const auto& t : form_.terms()) {
    if (((std::popcount(t.mask) + t.parity) & 1) != 1)
      throw std::invalid_argument(
          "ComplexSpec: term " + std::to_string(t.mask) +
          " is even for the total grading; D must be odd");
    for (int a = 0; a < r_; ++a)
      for (int b = 0; b < r_; ++b)
        if (t.coeff(a, b) != 0.0 &&
            ((fpar_[static_cast<std::size_t>(a)] ^
              fpar_[static_cast<std::size_t>(b)]) != t.parity))
          throw std::invalid_argument(
              "ComplexSpec: coefficient block structure contradicts the "
              "declared bundle parity");
  }

  ext_ = std::make_shared<Exterior>(n);
  total_dim_ = ext_->dim() * r_;
  i0_.reserve(static_cast<std::size_t>(total_dim_) / 2);
  i1_.reserve(static_cast<std::size_t>(total_dim_) / 2);
  for (int mi = 0; mi < ext_->dim(); ++mi) {
    const int deg = std::popcount(ext_->masks()[static_cast<std::size_t>(mi)]);
    for (int a = 0; a < r_; ++a) {
      const int par = (deg + fpar_[static_cast<std::size_t>(a)]) & 1;
      (par == 0 ? i0_ : i1_).push_back(mi * r_ + a);
    }
  }

  b_ref_ = wedge_matrix(form_, *ext_);

  m_full_ = kron_with_identity(ext_->gram(torus_.gram()), r_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_full_);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("ComplexSpec: Hodge metric not positive");
  const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
  p_ = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  p_inv_ = es.eigenvectors() * sq.cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();

  b_onb_ = p_ * b_ref_ * p_inv_;
  k_onb_.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd kj =
        p_ * kron_with_identity(ext_->eps(1u << j), r_) * p_inv_;
    k_onb_.push_back(kj.cast<cplx>());
  }

  const Eigen::MatrixXcd bh = b_onb_ + b_onb_.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb(bh);
  const_norm_ = esb.eigenvalues().cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd curvature = b_ref_ * b_ref_;
  flatness_.residual = curvature.cwiseAbs().maxCoeff();
  const double bscale = b_ref_.cwiseAbs().maxCoeff();
  flatness_.passed = flatness_.residual <= 1e-12 * (1.0 + bscale * bscale);
}

Eigen::MatrixXcd ComplexSpec::mode_full(const Eigen::VectorXd& xi) const {
  Eigen::MatrixXcd d = b_onb_;
  for (int j = 0; j < n(); ++j)
    d.noalias() += cplx(0.0, 2.0 * kPi * xi[j]) * k_onb_[static_cast<std::size_t>(j)];
  return d;
}

ModeOperator ComplexSpec::build_mode_operator(const Eigen::VectorXi& m) const {
  if (!flat()) {
    std::ostringstream msg;
    msg << "build_mode_operator: spec '" << id_
        << "' is not flat (curvature residual " << flatness_.residual
        << "); D^2 != 0, construction refused";
    throw std::domain_error(msg.str());
  }
  if (m.size() != n())
    throw std::invalid_argument("build_mode_operator: mode dimension mismatch");
  const Eigen::VectorXd xi = m.cast<double>() + chi_.u();
  const Eigen::MatrixXcd d = mode_full(xi);
  ModeOperator op;
  op.m = m;
  op.d0 = submatrix(d, i1_, i0_);
  op.d1 = submatrix(d, i0_, i1_);
  op.dim_even = dim_even();
  op.dim_odd = dim_odd();
  return op;
}

double ComplexSpec::kernel_bound_radius(double margin) const {
  return (const_norm_ + margin) / (2.0 * kPi);
}

ComplexSpec ComplexSpec::with_metric(FlatTorus new_torus) const {
  if (new_torus.n() != n())
    throw std::invalid_argument("with_metric: dimension mismatch");
  return ComplexSpec(kind_, std::move(new_torus), chi_, form_, fpar_, id_);
}

ComplexSpec ComplexSpec::with_character(Character new_chi) const {
  if (new_chi.n() != n())
    throw std::invalid_argument("with_character: dimension mismatch");
  return ComplexSpec(kind_, torus_, std::move(new_chi), form_, fpar_, id_);
}

ComplexSpec ComplexSpec::direct_sum(const ComplexSpec& other) const {
  if (other.n() != n() ||
      (other.torus_.gram() - torus_.gram()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("direct_sum: geometries differ");
  if ((other.chi_.u() - chi_.u()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument(
        "direct_sum: characters differ; sum the torsion values instead");
  const int rs = r_ + other.r_;
  std::vector<FormTerm> terms;
  terms.reserve(form_.terms().size() + other.form_.terms().size());
  for (const auto& t : form_.terms()) {
    FormTerm e;
    e.mask = t.mask;
    e.parity = t.parity;
    e.coeff = Eigen::MatrixXcd::Zero(rs, rs);
    e.coeff.topLeftCorner(r_, r_) = t.coeff;
    terms.push_back(std::move(e));
  }
  for (const auto& t : other.form_.terms()) {
    FormTerm e;
    e.mask = t.mask;
    e.parity = t.parity;
    e.coeff = Eigen::MatrixXcd::Zero(rs, rs);
    e.coeff.bottomRightCorner(other.r_, other.r_) = t.coeff;
    terms.push_back(std::move(e));
  }
  std::vector<int> fp = fpar_;
  fp.insert(fp.end(), other.fpar_.begin(), other.fpar_.end());
  return ComplexSpec(Kind::Superconnection, torus_, chi_,
                     ConstantForm(n(), rs, std::move(terms)), std::move(fp),
                     id_ + "+" + other.id_);
}

ComplexSpec ComplexSpec::scaled_flux(double eps) const {
  std::vector<FormTerm> terms = form_.terms();
  for (auto& t : terms) t.coeff *= eps;
  return ComplexSpec(kind_, torus_, chi_, ConstantForm(n(), r_, std::move(terms)),
                     fpar_, id_);
}

Eigen::MatrixXd ComplexSpec::alpha_onb_full(const MetricPath& path, double s) const {
  const Eigen::MatrixXd gs = path.gram_at(s);
  if ((gs - torus_.gram()).cwiseAbs().maxCoeff() >
      1e-10 * (1.0 + torus_.gram().cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "alpha_onb_full: spec metric does not sit on the path at s");
  return kron_with_identity(alpha_operator_onb(path, s, *ext_), r_);
}

Eigen::MatrixXd ComplexSpec::conformal_alpha_full() const {
  Eigen::VectorXd diag(total_dim_);
  for (int mi = 0; mi < ext_->dim(); ++mi) {
    const int k = std::popcount(ext_->masks()[static_cast<std::size_t>(mi)]);
    for (int a = 0; a < r_; ++a)
      diag[mi * r_ + a] = static_cast<double>(n() - 2 * k);
  }
  return diag.asDiagonal();
}

FlatnessReport check_flatness(const ComplexSpec& spec) { return spec.flatness(); }

}  // namespace torsionlab

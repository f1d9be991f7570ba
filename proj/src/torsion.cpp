/**
 * @file torsion.cpp
 * @brief Torsion assembly, comparison suites, sweeps, and the gauge /
 *        partition-function machinery declared in torsion.hpp.
 */
#include "torsionlab/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "torsionlab/spectral.hpp"

namespace torsionlab {

namespace {

std::string harmonic_note(const BettiData& betti) {
  std::ostringstream os;
  os << "nontrivial harmonic spaces (b0 = " << betti.b0 << ", b1 = "
     << betti.b1 << "); log tau is the coordinate of the canonical "
     << "determinant-line element in the L2 harmonic basis";
  return os.str();
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("regression: degenerate abscissa");
  return sxy / sxx;
}

void require_acyclic(const BettiData& betti, const std::string& id,
                     const char* op) {
  if (betti.b0 == 0 && betti.b1 == 0) return;
  std::ostringstream os;
  os << op << ": spec '" << id << "' is not acyclic (b0 = " << betti.b0
     << ", b1 = " << betti.b1 << "); a single-spec sweep would have to "
     << "transport a harmonic basis along the path, which is out of scope -- "
     << "sweep an acyclic complex or compare two twists in relative mode";
  throw std::invalid_argument(os.str());
}

[[noreturn]] void refuse_even_dimensional(const std::string& id, int n) {
  std::ostringstream os;
  os << "metric_sweep: spec '" << id << "' lives in even dimension n = " << n
     << ", where log tau is genuinely metric-dependent (the conformal "
     << "anomaly -1/2 Str(alpha e^{-tL})|_{t^0} does not vanish); "
     << "use a relative sweep of two character twists instead";
  throw std::invalid_argument(os.str());
}

SweepResult finish_sweep(SweepResult result, double tolerance) {
  std::vector<double> vals;
  vals.reserve(result.rows.size());
  for (const auto& row : result.rows) vals.push_back(row.log_tau);
  result.max_deviation = spread(vals);
  result.tolerance = tolerance;
  result.passed = result.max_deviation < tolerance;
  return result;
}

}  // namespace

TorsionValue analytic_torsion(const ComplexSpec& spec, ZetaMethod method,
                              const ZetaOptions& opt) {
  const BettiData betti = betti_numbers(spec);

  TorsionValue value;
  value.b0 = betti.b0;
  value.b1 = betti.b1;
  value.acyclic = (betti.b0 == 0 && betti.b1 == 0);
  if (!value.acyclic) value.basis_note = harmonic_note(betti);

  if (method == ZetaMethod::Exact) {
    value.grade0 = logdet_partial(spec, 0, method, opt);
    value.grade1 = logdet_partial(spec, 1, method, opt);
  } else {
    // One spectral table feeds both grades (and the exact cross-check when
    // the method is Auto and a closed form exists).
    const SpectrumTable table =
        build_spectrum_table(spec, default_radius(spec, opt.whi_factor),
                             opt.threads);
    value.grade0 = logdet_partial(spec, 0, method, opt, &table);
    value.grade1 = logdet_partial(spec, 1, method, opt, &table);
  }
  value.log_tau =
      0.5 * (value.grade0.log_det_prime - value.grade1.log_det_prime);
  value.err = 0.5 * (value.grade0.err + value.grade1.err);
  return value;
}

TorsionValue analytic_torsion(const DolbeaultSpec& spec, ZetaMethod method,
                              const ZetaOptions& opt) {
  const BettiData betti = dolbeault_betti(spec);

  TorsionValue value;
  value.b0 = betti.b0;
  value.b1 = betti.b1;
  value.acyclic = (betti.b0 == 0 && betti.b1 == 0);
  if (!value.acyclic) value.basis_note = harmonic_note(betti);

  value.grade0 = dolbeault_logdet(spec, 0, method, opt);
  value.grade1 = dolbeault_logdet(spec, 1, method, opt);
  value.log_tau =
      0.5 * (value.grade0.log_det_prime - value.grade1.log_det_prime);
  value.err = 0.5 * (value.grade0.err + value.grade1.err);
  return value;
}

RelativeTorsion relative_torsion(const ComplexSpec& spec,
                                 const Character& rho1, const Character& rho2,
                                 ZetaMethod method, const ZetaOptions& opt) {
  RelativeTorsion rel;
  rel.first = analytic_torsion(spec.with_character(rho1), method, opt);
  rel.second = analytic_torsion(spec.with_character(rho2), method, opt);
  rel.log_ratio = rel.first.log_tau - rel.second.log_tau;
  rel.err = rel.first.err + rel.second.err;
  return rel;
}

RelativeTorsion relative_torsion(const DolbeaultSpec& spec,
                                 std::pair<double, double> rho1,
                                 std::pair<double, double> rho2,
                                 ZetaMethod method, const ZetaOptions& opt) {
  DolbeaultSpec first = spec, second = spec;
  first.torus.u = rho1.first;
  first.torus.v = rho1.second;
  second.torus.u = rho2.first;
  second.torus.v = rho2.second;

  RelativeTorsion rel;
  rel.first = analytic_torsion(first, method, opt);
  rel.second = analytic_torsion(second, method, opt);
  rel.log_ratio = rel.first.log_tau - rel.second.log_tau;
  rel.err = rel.first.err + rel.second.err;
  return rel;
}

DirectSumReport direct_sum_check(const ComplexSpec& a, const ComplexSpec& b,
                                 double tolerance, ZetaMethod method,
                                 const ZetaOptions& opt) {
  // The block sum always runs on the heat path: it is the side without a
  // closed form, so the comparison stays a genuine two-path test.
  const TorsionValue sum =
      analytic_torsion(a.direct_sum(b), ZetaMethod::HeatTrace, opt);
  const TorsionValue ta = analytic_torsion(a, method, opt);
  const TorsionValue tb = analytic_torsion(b, method, opt);

  DirectSumReport report;
  report.lhs = sum.log_tau;
  report.rhs = ta.log_tau + tb.log_tau;
  report.deviation = std::abs(report.lhs - report.rhs);
  report.err = sum.err + ta.err + tb.err;
  report.bettis_add =
      (sum.b0 == ta.b0 + tb.b0) && (sum.b1 == ta.b1 + tb.b1);
  report.tolerance = tolerance;
  report.passed = report.deviation < tolerance && report.bettis_add;
  return report;
}

CoveringReport covering_check(double u, int fold, double tolerance,
                              ZetaMethod method, const ZetaOptions& opt) {
  if (fold < 1)
    throw std::invalid_argument("covering_check: fold must be >= 1");

  // The fold-sheeted covering circle has circumference `fold`.
  Eigen::MatrixXd cover_gram(1, 1), base_gram(1, 1);
  cover_gram(0, 0) = static_cast<double>(fold) * fold;
  base_gram(0, 0) = 1.0;
  const FlatTorus cover(cover_gram, "circle-cover");
  const FlatTorus base(base_gram, "circle");

  Eigen::VectorXd uu(1);
  uu(0) = u;
  const ComplexSpec top =
      ComplexSpec::de_rham(cover, Character(uu), "covering-top");

  CoveringReport report;
  report.fold = fold;
  report.lhs = analytic_torsion(top, method, opt).log_tau;
  for (int k = 0; k < fold; ++k) {
    Eigen::VectorXd uk(1);
    uk(0) = (u + k) / fold;
    const ComplexSpec sheet =
        ComplexSpec::de_rham(base, Character(uk), "covering-sheet");
    report.rhs += analytic_torsion(sheet, method, opt).log_tau;
  }
  report.deviation = std::abs(report.lhs - report.rhs);
  report.tolerance = tolerance;
  report.passed = report.deviation < tolerance;
  return report;
}

ProductReport product_check(const ComplexSpec& s1, const ComplexSpec& s2,
                            const ZetaOptions& opt) {
  if (s1.kind() != ComplexSpec::Kind::TwistedDeRham || !s1.form().empty() ||
      s2.kind() != ComplexSpec::Kind::TwistedDeRham || !s2.form().empty())
    throw std::invalid_argument(
        "product_check: both factors must be flux-free de Rham complexes "
        "(the product of twisted complexes is not again constant-coefficient "
        "in this representation)");

  const int n1 = s1.n(), n2 = s2.n();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  gram.topLeftCorner(n1, n1) = s1.torus().gram();
  gram.bottomRightCorner(n2, n2) = s2.torus().gram();
  Eigen::VectorXd u(n1 + n2);
  u.head(n1) = s1.chi().u();
  u.tail(n2) = s2.chi().u();
  const ComplexSpec product = ComplexSpec::de_rham(
      FlatTorus(gram, s1.torus().name() + "x" + s2.torus().name()),
      Character(u), s1.id() + "*" + s2.id());

  const TorsionValue tp = analytic_torsion(product, ZetaMethod::Auto, opt);
  const TorsionValue t1 = analytic_torsion(s1, ZetaMethod::Auto, opt);
  const TorsionValue t2 = analytic_torsion(s2, ZetaMethod::Auto, opt);

  ProductReport report;
  report.chi1 = betti_numbers(s1).chi;
  report.chi2 = betti_numbers(s2).chi;
  report.log_tau_product = tp.log_tau;
  report.predicted = static_cast<double>(report.chi2) * t1.log_tau +
                     static_cast<double>(report.chi1) * t2.log_tau;
  report.deviation = std::abs(report.log_tau_product - report.predicted);
  report.err = tp.err + std::abs(static_cast<double>(report.chi2)) * t1.err +
               std::abs(static_cast<double>(report.chi1)) * t2.err;
  report.passed = report.deviation < 2.0 * report.err;
  return report;
}

SymbolicProductLedger product_exponents(long chi1, long chi2) {
  SymbolicProductLedger ledger;
  ledger.chi1 = chi1;
  ledger.chi2 = chi2;
  ledger.exponent_tau1 = chi2;
  ledger.exponent_tau2 = chi1;
  return ledger;
}

SweepResult metric_sweep(const ComplexSpec& spec, const MetricPath& path,
                         const std::vector<double>& samples, double tolerance,
                         ZetaMethod method, const ZetaOptions& opt) {
  if (spec.n() % 2 == 0) refuse_even_dimensional(spec.id(), spec.n());
  require_acyclic(betti_numbers(spec), spec.id(), "metric_sweep");
  if (samples.empty())
    throw std::invalid_argument("metric_sweep: no sample points");

  SweepResult result;
  result.suite = "metric-sweep";
  result.spec_id = spec.id();
  result.note = MetricPath::kind_name(path.kind());
  for (const double s : samples) {
    const TorsionValue t =
        analytic_torsion(spec.with_metric(path.torus_at(s)), method, opt);
    result.rows.push_back({s, t.log_tau, t.err});
  }
  return finish_sweep(std::move(result), tolerance);
}

SweepResult metric_sweep(const DolbeaultSpec& spec, const MetricPath&,
                         const std::vector<double>&, double, ZetaMethod,
                         const ZetaOptions&) {
  refuse_even_dimensional(spec.id, 2);
}

SweepResult relative_metric_sweep(const ComplexSpec& spec,
                                  const Character& rho1, const Character& rho2,
                                  const MetricPath& path,
                                  const std::vector<double>& samples,
                                  double tolerance, ZetaMethod method,
                                  const ZetaOptions& opt) {
  if (samples.empty())
    throw std::invalid_argument("relative_metric_sweep: no sample points");
  require_acyclic(betti_numbers(spec.with_character(rho1)),
                  spec.id() + "@rho1", "relative_metric_sweep");
  require_acyclic(betti_numbers(spec.with_character(rho2)),
                  spec.id() + "@rho2", "relative_metric_sweep");

  SweepResult result;
  result.suite = "relative-metric-sweep";
  result.spec_id = spec.id();
  result.note = MetricPath::kind_name(path.kind());
  std::vector<double> first_vals, second_vals;
  for (const double s : samples) {
    const ComplexSpec at_s = spec.with_metric(path.torus_at(s));
    const RelativeTorsion rel =
        relative_torsion(at_s, rho1, rho2, method, opt);
    result.rows.push_back({s, rel.log_ratio, rel.err});
    first_vals.push_back(rel.first.log_tau);
    second_vals.push_back(rel.second.log_tau);
  }
  result.individual_spread = std::max(spread(first_vals), spread(second_vals));
  return finish_sweep(std::move(result), tolerance);
}

SweepResult relative_metric_sweep(const DolbeaultSpec& spec,
                                  std::pair<double, double> rho1,
                                  std::pair<double, double> rho2,
                                  const MetricPath& path,
                                  const std::vector<double>& samples,
                                  double tolerance, ZetaMethod method,
                                  const ZetaOptions& opt) {
  if (samples.empty())
    throw std::invalid_argument("relative_metric_sweep: no sample points");

  SweepResult result;
  result.suite = "relative-metric-sweep";
  result.spec_id = spec.id;
  result.note = MetricPath::kind_name(path.kind());
  std::vector<double> first_vals, second_vals;
  for (const double s : samples) {
    const DolbeaultSpec at_s = dolbeault_at(spec, path, s);
    const RelativeTorsion rel =
        relative_torsion(at_s, rho1, rho2, method, opt);
    result.rows.push_back({s, rel.log_ratio, rel.err});
    first_vals.push_back(rel.first.log_tau);
    second_vals.push_back(rel.second.log_tau);
  }
  result.individual_spread = std::max(spread(first_vals), spread(second_vals));
  return finish_sweep(std::move(result), tolerance);
}

AnomalyReport anomaly_check(const ComplexSpec& spec, const MetricPath& path,
                            double s0, double h, double tolerance,
                            const ZetaOptions& opt) {
  require_acyclic(betti_numbers(spec), spec.id(), "anomaly_check");
  if (!(h > 0.0)) throw std::invalid_argument("anomaly_check: need h > 0");

  const auto tau_at = [&](double s) {
    return analytic_torsion(spec.with_metric(path.torus_at(s)),
                            ZetaMethod::HeatTrace, opt)
        .log_tau;
  };
  // Richardson-extrapolated central difference: error O(h^4).
  const auto central = [&](double step) {
    return (tau_at(s0 + step) - tau_at(s0 - step)) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);

  AnomalyReport report;
  report.fd_slope = (4.0 * fine - coarse) / 3.0;

  // Variation formula: d/ds log tau = -1/2 Str(alpha e^{-tL})|_{t^0} with
  // alpha = M^{-1} dM/ds in the orthonormal frame of G(s0).  The harmonic
  // correction Str(alpha Q) vanishes because the spec is acyclic.
  const ComplexSpec at_s0 = spec.with_metric(path.torus_at(s0));
  const Eigen::MatrixXcd alpha =
      at_s0.alpha_onb_full(path, s0).cast<cplx>();
  const double c0 =
      weighted_str_c0(at_s0, alpha, opt.whi_factor, opt.kextra, opt.threads);
  report.fitted_slope = -0.5 * c0;

  const double denom = std::max(
      {std::abs(report.fd_slope), std::abs(report.fitted_slope), 1e-12});
  report.rel_deviation = std::abs(report.fd_slope - report.fitted_slope) / denom;
  report.tolerance = tolerance;
  report.passed = report.rel_deviation < tolerance;
  return report;
}

ComplexSpec gauge_conjugated(const ComplexSpec& spec, const ConstantForm& beta,
                             double s) {
  const int n = spec.n();
  const int r = spec.r();
  if (beta.n() != n)
    throw std::invalid_argument("gauge_conjugated: form dimension mismatch");
  if (!beta.empty() && beta.form_parity() != 0)
    throw std::invalid_argument(
        "gauge_conjugated: the gauge form must have even degree (odd forms "
        "would mix into the momentum term)");
  if (beta.r() != 1 && beta.r() != r)
    throw std::invalid_argument(
        "gauge_conjugated: coefficient rank must be 1 (scalar) or the bundle "
        "rank");

  std::vector<FormTerm> embedded;
  for (const FormTerm& term : beta.terms()) {
    if (term.mask == 0u)
      throw std::invalid_argument(
          "gauge_conjugated: a degree-0 component makes eps(beta) "
          "non-nilpotent, so the exponential series would not terminate");
    if (term.parity != 0)
      throw std::invalid_argument(
          "gauge_conjugated: coefficients must preserve the bundle grading "
          "(parity-0 endomorphisms)");
    FormTerm t;
    t.mask = term.mask;
    t.parity = 0;
    t.coeff = (beta.r() == r)
                  ? term.coeff
                  : Eigen::MatrixXcd(term.coeff(0, 0) *
                                     Eigen::MatrixXcd::Identity(r, r));
    embedded.push_back(std::move(t));
  }
  if (embedded.empty() || s == 0.0) return spec;

  const Exterior& ext = spec.ext();
  const int dim = spec.total_dim();
  const Eigen::MatrixXcd x = wedge_matrix(ConstantForm(n, r, embedded), ext);

  // eps(beta) raises form degree by >= 2, so x^{floor(n/2)+1} = 0 and the
  // exponential series terminates; n terms is a safe cap.
  const auto exp_of = [&](double c) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 1; k <= n; ++k) {
      p = (p * x).eval();
      p *= c / static_cast<double>(k);
      if (p.cwiseAbs().maxCoeff() == 0.0) break;
      e += p;
    }
    return e;
  };

  // Even forms commute with the momentum symbol eps(xi) (x) id, so the
  // conjugation acts on the constant part alone.
  const Eigen::MatrixXcd conj = exp_of(-s) * spec.b_ref() * exp_of(s);
  const double scale = 1.0 + conj.cwiseAbs().maxCoeff();

  // Read the constant-form components off the vacuum column: eps(omega_I)
  // (x) A applied to 1 (x) f is e_I (x) A f with unit sign, so block I of
  // column 0 is exactly A_I.
  std::vector<FormTerm> terms;
  for (int idx = 0; idx < ext.dim(); ++idx) {
    const std::uint32_t mask = ext.masks()[idx];
    Eigen::MatrixXcd block = conj.block(idx * r, 0, r, r);
    if (block.cwiseAbs().maxCoeff() <= 1e-15 * scale) continue;
    FormTerm t;
    t.mask = mask;
    t.coeff = std::move(block);
    t.parity = (1 + ext.degree_of_index(idx)) % 2;  // keeps D odd
    terms.push_back(std::move(t));
  }

  ComplexSpec result = [&] {
    if (spec.kind() == ComplexSpec::Kind::TwistedDeRham) {
      std::vector<std::pair<std::uint32_t, cplx>> comps;
      for (const FormTerm& t : terms) comps.emplace_back(t.mask, t.coeff(0, 0));
      return ComplexSpec::de_rham(spec.torus(), spec.chi(),
                                  ConstantForm::scalar(n, comps), spec.id());
    }
    int r0 = 0, r1 = 0;
    for (const int p : spec.fpar()) (p == 0 ? r0 : r1) += 1;
    SuperconnectionData data{r0, r1, ConstantForm(n, r, terms)};
    return ComplexSpec::superconnection(spec.torus(), spec.chi(),
                                        std::move(data), spec.id());
  }();

  // The decomposition must reproduce the conjugate exactly; anything left
  // over would mean e^{-s eps(beta)} D e^{s eps(beta)} is not again a
  // constant-coefficient complex of this shape.
  const double residual =
      (wedge_matrix(result.form(), ext) - conj).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale) {
    std::ostringstream os;
    os << "gauge_conjugated: the conjugate left the constant-form algebra "
       << "(reconstruction residual " << residual << ")";
    throw std::runtime_error(os.str());
  }
  return result;
}

SweepResult gauge_sweep(const ComplexSpec& spec, const ConstantForm& beta,
                        const std::vector<double>& samples, double tolerance,
                        ZetaMethod method, const ZetaOptions& opt) {
  if (spec.n() % 2 == 0)
    throw std::invalid_argument(
        "gauge_sweep: even-dimensional torsion is metric-dependent, and "
        "gauge transport mixes with the anomaly; use relative_gauge_sweep");
  require_acyclic(betti_numbers(spec), spec.id(), "gauge_sweep");
  if (samples.empty())
    throw std::invalid_argument("gauge_sweep: no sample points");

  SweepResult result;
  result.suite = "gauge-sweep";
  result.spec_id = spec.id();
  result.note = "conjugation by exp(s eps(beta))";
  for (const double s : samples) {
    const TorsionValue t =
        analytic_torsion(gauge_conjugated(spec, beta, s), method, opt);
    result.rows.push_back({s, t.log_tau, t.err});
  }
  return finish_sweep(std::move(result), tolerance);
}

SweepResult relative_gauge_sweep(const ComplexSpec& spec,
                                 const Character& rho1, const Character& rho2,
                                 const ConstantForm& beta,
                                 const std::vector<double>& samples,
                                 double tolerance, ZetaMethod method,
                                 const ZetaOptions& opt) {
  if (samples.empty())
    throw std::invalid_argument("relative_gauge_sweep: no sample points");
  require_acyclic(betti_numbers(spec.with_character(rho1)),
                  spec.id() + "@rho1", "relative_gauge_sweep");
  require_acyclic(betti_numbers(spec.with_character(rho2)),
                  spec.id() + "@rho2", "relative_gauge_sweep");

  SweepResult result;
  result.suite = "relative-gauge-sweep";
  result.spec_id = spec.id();
  result.note = "conjugation by exp(s eps(beta))";
  std::vector<double> first_vals, second_vals;
  for (const double s : samples) {
    const ComplexSpec at_s = gauge_conjugated(spec, beta, s);
    const RelativeTorsion rel =
        relative_torsion(at_s, rho1, rho2, method, opt);
    result.rows.push_back({s, rel.log_ratio, rel.err});
    first_vals.push_back(rel.first.log_tau);
    second_vals.push_back(rel.second.log_tau);
  }
  result.individual_spread = std::max(spread(first_vals), spread(second_vals));
  return finish_sweep(std::move(result), tolerance);
}

FluxReport flux_continuity_check(const ComplexSpec& spec,
                                 std::vector<double> eps, double slope_min,
                                 ZetaMethod method, const ZetaOptions& opt) {
  if (eps.size() < 2)
    throw std::invalid_argument(
        "flux_continuity_check: need at least two scale factors");
  for (const double e : eps)
    if (!(e > 0.0))
      throw std::invalid_argument(
          "flux_continuity_check: scale factors must be positive");
  if (spec.form().empty())
    throw std::invalid_argument(
        "flux_continuity_check: spec '" + spec.id() +
        "' has no flux/constant part to scale");
  std::sort(eps.begin(), eps.end(), std::greater<>());

  const TorsionValue base =
      analytic_torsion(spec.scaled_flux(0.0), method, opt);

  FluxReport report;
  report.eps = eps;
  report.slope_min = slope_min;
  report.base_log_tau = base.log_tau;
  report.base_err = base.err;
  std::vector<double> log_eps, log_dev;
  for (const double e : eps) {
    const TorsionValue tau = analytic_torsion(spec.scaled_flux(e), method, opt);
    report.log_taus.push_back(tau.log_tau);
    report.errs.push_back(tau.err);
    report.deviations.push_back(std::abs(tau.log_tau - base.log_tau));
  }
  report.monotone = true;
  for (std::size_t i = 0; i + 1 < report.deviations.size(); ++i)
    report.monotone = report.monotone &&
                      report.deviations[i + 1] < report.deviations[i] + 1e-15;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (report.deviations[i] <= 0.0) {
      // An exactly vanishing deviation short-circuits the regression; treat
      // it as the strongest possible decay.
      report.slope = std::numeric_limits<double>::infinity();
      report.passed = report.monotone;
      return report;
    }
    log_eps.push_back(std::log(eps[i]));
    log_dev.push_back(std::log(report.deviations[i]));
  }
  report.slope = regression_slope(log_eps, log_dev);
  report.passed = report.monotone && report.slope > slope_min;
  return report;
}

PartitionLedger partition_function(int l, double log_tau_twisted,
                                   double log_tau_untwisted,
                                   const std::string& convention) {
  if (l < 1) throw std::invalid_argument("partition_function: need l >= 1");
  if (convention != "none" && convention != "hodge")
    throw std::invalid_argument(
        "partition_function: unknown convention '" + convention +
        "' (expected \"none\" or \"hodge\")");

  PartitionLedger ledger;
  ledger.l = l;
  ledger.convention = convention;
  ledger.log_z = -log_tau_twisted -
                 static_cast<double>(l) * log_tau_untwisted;

  // Ghost tower of the degree-(2l+1) abelian theory: chain i = 0..2l
  // contributes determinants in degrees 2l-i, 2l-i-2, ... >= 0 with
  // exponent (-1)^{i+1}.
  std::map<int, Rational> lhs, rhs;
  for (int i = 0; i <= 2 * l; ++i) {
    const Rational sign(i % 2 == 0 ? -1 : 1);
    for (int deg = 2 * l - i; deg >= 0; deg -= 2) lhs[deg] += sign;
  }
  // Collapsed form: -l/2 on even degrees 0..2l, (l+1)/2 on odd 1..2l-1.
  for (int deg = 0; deg <= 2 * l; deg += 2) rhs[deg] += Rational(-l, 2);
  for (int deg = 1; deg <= 2 * l - 1; deg += 2) rhs[deg] += Rational(l + 1, 2);

  if (convention == "hodge") {
    // Det'(d_k* d_k) = Det'(d_{2l-k}* d_{2l-k}): fold mirror degrees.
    const auto fold = [l](const std::map<int, Rational>& m) {
      std::map<int, Rational> folded;
      for (const auto& [deg, exp] : m) folded[std::min(deg, 2 * l - deg)] += exp;
      return folded;
    };
    lhs = fold(lhs);
    rhs = fold(rhs);
  }
  ledger.lhs = lhs;
  ledger.rhs = rhs;

  ledger.balanced = true;
  for (const auto& [deg, exp] : lhs) ledger.discrepancy[deg] = exp;
  for (const auto& [deg, exp] : rhs) ledger.discrepancy[deg] -= exp;
  for (const auto& [deg, exp] : ledger.discrepancy)
    ledger.balanced = ledger.balanced && exp.is_zero();
  return ledger;
}

}  // namespace torsionlab

/**
 * @file torsion.hpp
 * @brief Analytic torsion of graded complexes and its theorem suites.
 *
 * The torsion of a Z2-graded complex is assembled from the graded
 * determinants,
 *
 *     log tau = 1/2 log Det'(D0* D0) - 1/2 log Det'(D1* D1),
 *
 * a pure scalar when the complex is acyclic (otherwise it is the coordinate
 * of a determinant-line element and every reported value is tagged with the
 * harmonic-basis convention).  On top of the single-value computation this
 * header houses the executable forms of the structural theorems:
 *
 *  - relative torsion of two character twists (exactly antisymmetric),
 *  - direct-sum additivity and Betti additivity,
 *  - circle covering identity  log tau(cover, u) = sum_k log tau((u+k)/n),
 *  - product functoriality  log tau(M1 x M2) = chi2 log tau(1) + chi1
 *    log tau(2), spectrally on torus products and symbolically for formula
 *    level checks (the chi(O_{K3}) = 2 exponent),
 *  - metric-invariance sweeps (odd n, acyclic) and relative sweeps (even n),
 *  - the variation/anomaly formula  d/ds log tau = -1/2 Str(alpha e^{-tL})|_{t^0},
 *  - gauge-conjugation sweeps  D -> e^{-s eps(beta)} D e^{s eps(beta)},
 *  - flux-continuity slope regression (o(eps) perturbation),
 *  - the degree-2l+1 partition-function ledger with exact rational
 *    ghost-tower exponents.
 */
#pragma once

#include <map>

#include "torsionlab/dolbeault.hpp"
#include "torsionlab/rational.hpp"
#include "torsionlab/zeta.hpp"

namespace torsionlab {

struct TorsionValue {
  double log_tau = 0.0;
  double err = 0.0;
  bool acyclic = false;
  int b0 = 0, b1 = 0;
  std::string basis_note;  ///< nonempty when harmonic spaces are nontrivial
  ZetaResult grade0, grade1;
};

TorsionValue analytic_torsion(const ComplexSpec& spec,
                              ZetaMethod method = ZetaMethod::Auto,
                              const ZetaOptions& opt = {});

TorsionValue analytic_torsion(const DolbeaultSpec& spec,
                              ZetaMethod method = ZetaMethod::Auto,
                              const ZetaOptions& opt = {});

struct RelativeTorsion {
  double log_ratio = 0.0;
  double err = 0.0;
  TorsionValue first, second;
};

/// log tau(spec @ rho1) - log tau(spec @ rho2).  Antisymmetric under the
/// exchange of rho1 and rho2 exactly (the two runs are deterministic).
RelativeTorsion relative_torsion(const ComplexSpec& spec, const Character& rho1,
                                 const Character& rho2,
                                 ZetaMethod method = ZetaMethod::Auto,
                                 const ZetaOptions& opt = {});

/// Dolbeault variant: characters as (u, v) pairs on the period lattice.
RelativeTorsion relative_torsion(const DolbeaultSpec& spec,
                                 std::pair<double, double> rho1,
                                 std::pair<double, double> rho2,
                                 ZetaMethod method = ZetaMethod::Auto,
                                 const ZetaOptions& opt = {});

struct DirectSumReport {
  double lhs = 0.0;        ///< log tau of the block direct sum
  double rhs = 0.0;        ///< sum of the summand torsions
  double deviation = 0.0;
  double err = 0.0;        ///< combined err of all three computations
  bool bettis_add = false;
  bool passed = false;
  double tolerance = 0.0;
};

/// Additivity of torsion (and of Betti numbers) under the block direct sum.
/// The sum spec runs on the heat path; summands use `method`.
DirectSumReport direct_sum_check(const ComplexSpec& a, const ComplexSpec& b,
                                 double tolerance = 1e-8,
                                 ZetaMethod method = ZetaMethod::Auto,
                                 const ZetaOptions& opt = {});

struct CoveringReport {
  int fold = 1;
  double lhs = 0.0;  ///< log tau of the n-fold circle cover at character u
  double rhs = 0.0;  ///< sum over the deck orbit of base torsions
  double deviation = 0.0;
  bool passed = false;
  double tolerance = 0.0;
};

/// Circle covering identity: the n-fold cover of the circle at character u
/// against the sum over the fiber characters (u+k)/n, k = 0..n-1.
CoveringReport covering_check(double u, int fold, double tolerance = 1e-8,
                              ZetaMethod method = ZetaMethod::Auto,
                              const ZetaOptions& opt = {});

struct ProductReport {
  long chi1 = 0, chi2 = 0;
  double log_tau_product = 0.0;
  double predicted = 0.0;  ///< chi2 log tau(1) + chi1 log tau(2)
  double deviation = 0.0;
  double err = 0.0;
  bool passed = false;
};

/// Spectral product check: the product complex of two flux-free de Rham
/// specs is the de Rham complex of the product torus with the concatenated
/// character.  Passes iff |log tau(product) - predicted| < 2 err(combined).
ProductReport product_check(const ComplexSpec& s1, const ComplexSpec& s2,
                            const ZetaOptions& opt = {});

struct SymbolicProductLedger {
  long chi1 = 0, chi2 = 0;
  long exponent_tau1 = 0;  ///< = chi2
  long exponent_tau2 = 0;  ///< = chi1
};

/// Formula-level product exponents: tau(M1 x M2) = tau1^{chi2} tau2^{chi1}.
/// With chi(T) = 0 and chi(O_{K3}) = 2 this reproduces the squared-torsion
/// factor of the torus x K3 example without any spectra.
SymbolicProductLedger product_exponents(long chi1, long chi2);

struct SweepRow {
  double s = 0.0;
  double log_tau = 0.0;  ///< log ratio in relative sweeps
  double err = 0.0;
};

struct SweepResult {
  std::string suite;
  std::string spec_id;
  std::vector<SweepRow> rows;
  double max_deviation = 0.0;  ///< spread max - min of the tracked value
  double tolerance = 0.0;
  bool passed = false;
  /// Relative sweeps: the largest single-spec movement along the path (the
  /// anomaly that the ratio cancels).
  double individual_spread = 0.0;
  std::string note;
};

/// Metric invariance along a path (odd n, acyclic only; refuses otherwise,
/// citing the anomaly resp. the harmonic-basis dependence).
SweepResult metric_sweep(const ComplexSpec& spec, const MetricPath& path,
                         const std::vector<double>& samples,
                         double tolerance = 1e-4,
                         ZetaMethod method = ZetaMethod::Auto,
                         const ZetaOptions& opt = {});

/// Single even-dimensional sweeps are refused with the same diagnostic the
/// CLI reports (the anomaly makes log tau genuinely metric-dependent).
SweepResult metric_sweep(const DolbeaultSpec& spec, const MetricPath& path,
                         const std::vector<double>& samples,
                         double tolerance = 1e-4,
                         ZetaMethod method = ZetaMethod::Auto,
                         const ZetaOptions& opt = {});

/// Relative invariance (even n): the log ratio of two character twists is
/// tracked along the path; individual movements are reported, not asserted.
SweepResult relative_metric_sweep(const ComplexSpec& spec,
                                  const Character& rho1, const Character& rho2,
                                  const MetricPath& path,
                                  const std::vector<double>& samples,
                                  double tolerance = 1e-4,
                                  ZetaMethod method = ZetaMethod::Auto,
                                  const ZetaOptions& opt = {});

SweepResult relative_metric_sweep(const DolbeaultSpec& spec,
                                  std::pair<double, double> rho1,
                                  std::pair<double, double> rho2,
                                  const MetricPath& path,
                                  const std::vector<double>& samples,
                                  double tolerance = 1e-4,
                                  ZetaMethod method = ZetaMethod::Auto,
                                  const ZetaOptions& opt = {});

struct AnomalyReport {
  double fd_slope = 0.0;      ///< Richardson finite difference of log tau
  double fitted_slope = 0.0;  ///< -1/2 x flat coefficient of Str(alpha e^{-tL})
  double rel_deviation = 0.0;
  bool passed = false;
  double tolerance = 0.0;
};

/// Variation formula at s0 along the path: d/ds log tau against the fitted
/// weighted-supertrace coefficient (acyclic specs; the harmonic projection
/// term Str(alpha Q) vanishes there).
AnomalyReport anomaly_check(const ComplexSpec& spec, const MetricPath& path,
                            double s0 = 0.0, double h = 0.05,
                            double tolerance = 1e-3,
                            const ZetaOptions& opt = {});

/// The complex conjugated per mode by e^{s eps(beta)} for a constant even
/// scalar form beta with all degrees >= 1 (so the exponential terminates).
/// Exterior multiplication commutes with the momentum symbol for even forms,
/// hence the conjugate is again a constant-coefficient flat spec.
ComplexSpec gauge_conjugated(const ComplexSpec& spec, const ConstantForm& beta,
                             double s);

/// Gauge invariance sweep (odd n): log tau of the conjugated spec along s.
SweepResult gauge_sweep(const ComplexSpec& spec, const ConstantForm& beta,
                        const std::vector<double>& samples,
                        double tolerance = 1e-4,
                        ZetaMethod method = ZetaMethod::HeatTrace,
                        const ZetaOptions& opt = {});

/// Even-dimensional analogue in relative mode: the log ratio of two
/// character twists under the same conjugation family.
SweepResult relative_gauge_sweep(const ComplexSpec& spec,
                                 const Character& rho1, const Character& rho2,
                                 const ConstantForm& beta,
                                 const std::vector<double>& samples,
                                 double tolerance = 1e-4,
                                 ZetaMethod method = ZetaMethod::HeatTrace,
                                 const ZetaOptions& opt = {});

struct FluxReport {
  std::vector<double> eps;         ///< descending scale factors
  std::vector<double> deviations;  ///< |log tau(eps H) - log tau(0)|
  std::vector<double> log_taus;    ///< log tau at each eps
  std::vector<double> errs;
  double base_log_tau = 0.0;       ///< log tau of the eps = 0 complex
  double base_err = 0.0;
  double slope = 0.0;              ///< log-log regression slope
  bool monotone = false;
  bool passed = false;             ///< monotone and slope > slope_min
  double slope_min = 0.0;
};

/// Perturbation continuity in the flux: deviations shrink with eps and the
/// log-log slope certifies o(eps) (slope > slope_min, default superlinear).
FluxReport flux_continuity_check(const ComplexSpec& spec,
                                 std::vector<double> eps = {0.1, 0.05, 0.025},
                                 double slope_min = 1.2,
                                 ZetaMethod method = ZetaMethod::HeatTrace,
                                 const ZetaOptions& opt = {});

/// Exact ghost-tower ledger of the degree-(2l+1) partition function.
struct PartitionLedger {
  int l = 1;
  double log_z = 0.0;  ///< -log tau(H) - l log tau(0)
  std::string convention;                ///< "none" or "hodge"
  std::map<int, Rational> lhs;           ///< chain-by-chain exponents
  std::map<int, Rational> rhs;           ///< collapsed exponents
  std::map<int, Rational> discrepancy;   ///< lhs - rhs under the convention
  bool balanced = false;                 ///< discrepancy identically zero
};

/// Assembles log Z = -log tau(H) - l log tau(0) and the exact exponent
/// ledger.  The left tower: chains i = 0..2l over degrees 2l-i, 2l-i-2, ...
/// >= 0 with exponent (-1)^{i+1}; the right: -l/2 on even degrees 0..2l and
/// (l+1)/2 on odd degrees 1..2l-1.  Convention "hodge" folds degrees k and
/// 2l-k together before comparing.
PartitionLedger partition_function(int l, double log_tau_twisted,
                                   double log_tau_untwisted,
                                   const std::string& convention = "none");

}  // namespace torsionlab

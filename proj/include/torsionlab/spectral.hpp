/**
 * @file spectral.hpp
 * @brief Mode-by-mode spectra, truncated heat traces, and weighted variants.
 *
 * For a graded complex with constant coefficients the Laplacians decompose
 * over the character lattice: at each mode m the block operators are finite
 * matrices, so the full spectrum is the union over modes of small
 * eigenproblems.  This header provides
 *
 *  - mode_spectrum:        eigenvalues of D0*D0 and D1*D1 at one mode, with
 *                          kernel dimensions from rank-nullity bookkeeping,
 *  - SpectrumTable:        the lexicographically merged union below a dual
 *                          radius, with generic ranks and the deficit count
 *                          (eigenvalue branches that hit zero at exceptional
 *                          modes — the zeta continuation needs it),
 *  - heat_trace:           Tr e^{-t L_even}, Tr e^{-t L_odd} and the
 *                          supertrace, with a rigorous shell-sum tail bound
 *                          dim * sum_k N(R+k+1) exp(-t (2 pi (R+k) - |B|)^2),
 *  - betti_numbers:        harmonic dimensions with a kernel-exclusion
 *                          certificate radius (modes beyond it cannot carry
 *                          kernel because (D+D*)^2 >= (2 pi |xi| - |B|)^2),
 *  - weighted machinery:   Str(alpha e^{-t L}) and its small-time flat
 *                          coefficient, used by the variation formula
 *                          d/ds log tau = -1/2 Str(alpha)_{t^0},
 *  - small_time_fit:       generic least-squares extraction of heat
 *                          coefficients in the basis t^{j - n/2}.
 */
#pragma once

#include <string>
#include <vector>

#include "torsionlab/complex_spec.hpp"

namespace torsionlab {

/// Spectrum of one lattice mode.
struct ModeSpectrum {
  Eigen::VectorXi m;
  std::vector<double> spec0;  ///< nonzero eigenvalues of D0* D0, ascending
  std::vector<double> spec1;  ///< nonzero eigenvalues of D1* D1, ascending
  int ker0 = 0;               ///< dim ker L_even at this mode
  int ker1 = 0;               ///< dim ker L_odd at this mode
};

/// Union of mode spectra below a dual-norm radius, in lexicographic mode
/// order with ascending eigenvalues inside each mode.
struct SpectrumTable {
  std::vector<Eigen::VectorXi> modes;
  std::vector<double> lams0;
  std::vector<double> lams1;
  long ker0 = 0;
  long ker1 = 0;
  double radius = 0.0;
  /// Generic rank per mode and the total count of missing (zero) branches.
  int rank_generic0 = 0, rank_generic1 = 0;
  long deficit0 = 0, deficit1 = 0;
};

ModeSpectrum mode_spectrum(const ComplexSpec& spec, const Eigen::VectorXi& m);

/// Enumerates all modes with |m+u|_* <= radius and merges their spectra.
/// Throws std::runtime_error (naming the mode) if an eigensolve fails, or if
/// the rank profile is not generic (deficit outside [0, 64]).
SpectrumTable build_spectrum_table(const ComplexSpec& spec, double radius,
                                   int threads = 1);

/// Default dual radius for zeta work: large enough that the fit window
/// [w_lo, w_hi] sees a truncation error below ~1e-20.
double default_radius(const ComplexSpec& spec, double whi_factor = 1.0);

/// Heat-kernel fit window [w_lo, w_hi] = [w_hi/6, min(0.01 vol^{2/n},
/// gap/100) * whi_factor] used by the zeta continuation.
void fit_window(const ComplexSpec& spec, double whi_factor, double* w_lo,
                double* w_hi);

struct HeatTraceSample {
  double t = 0;
  double tr0 = 0;         ///< Tr e^{-t L_even}  (kernel included)
  double tr1 = 0;         ///< Tr e^{-t L_odd}
  double tr_d0 = 0;       ///< Tr' e^{-t D0* D0}  (nonzero branch only)
  double tr_d1 = 0;       ///< Tr' e^{-t D1* D1}
  double str = 0;         ///< tr0 - tr1
  double tail_bound = 0;  ///< rigorous bound on the truncated remainder
};

/// Evaluates the truncated heat traces at time t.  Throws std::runtime_error
/// naming the minimal feasible t when the tail bound exceeds 1e-6.
HeatTraceSample heat_trace(const ComplexSpec& spec, const SpectrumTable& table,
                           double t, int threads = 1);

/// Tail bound alone (no feasibility check) — monotone decreasing in t.
double heat_tail_bound(const ComplexSpec& spec, double radius, double t);

struct BettiData {
  int b0 = 0;
  int b1 = 0;
  int chi = 0;                ///< b0 - b1
  double certificate = 0.0;   ///< radius beyond which kernel is excluded
};

/// Harmonic dimensions via the kernel-exclusion certificate.
BettiData betti_numbers(const ComplexSpec& spec, double margin = 0.5);

/// Eigenvalue/weight pairs for Str(alpha e^{-t L}); kernel branches carry
/// weight zero (their contribution is t-independent and drops from the
/// variation formula).
struct WeightedSpectrum {
  std::vector<double> lam0, wt0;
  std::vector<double> lam1, wt1;
};

WeightedSpectrum weighted_spectrum(const ComplexSpec& spec,
                                   const Eigen::MatrixXcd& alpha,
                                   double radius, int threads = 1);

/// Str(alpha e^{-t L}) over the tabulated modes.
double weighted_supertrace(const WeightedSpectrum& ws, double t,
                           int threads = 1);

/// Flat (t^0) coefficient of the small-time expansion of the weighted
/// supertrace: pins the leading coefficient Str(alpha) V (4 pi t)^{-n/2}
/// analytically and fits the remaining powers t^{j-n/2}.
double weighted_str_c0(const ComplexSpec& spec, const Eigen::MatrixXcd& alpha,
                       double whi_factor = 1.0, int kextra = 0,
                       int threads = 1);

/// Generic heat-coefficient fit in the basis {t^{j-n/2} : j = 0..K}.
struct SmallTimeFit {
  std::vector<double> exponents;
  std::vector<double> coeffs;
  double residual = 0.0;  ///< max scaled residual of the fit
  double cond = 0.0;      ///< condition number of the scaled design matrix
};

SmallTimeFit small_time_fit(const std::vector<double>& ts,
                            const std::vector<double>& vals, int n, int K);

/// Geometric sample grid with `count` points in [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int count);

/// Max deviation of the supertrace from the integer index over the given
/// times (McKean-Singer check).
double mckean_singer_deviation(const ComplexSpec& spec,
                               const SpectrumTable& table,
                               const std::vector<double>& ts, int chi,
                               int threads = 1);

}  // namespace torsionlab

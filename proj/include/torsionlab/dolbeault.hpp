/**
 * @file dolbeault.hpp
 * @brief Dolbeault complex of a flat line bundle on a complex torus.
 *
 * On C/(Z + tau Z) with area normalization a and a character (u,v) of the
 * period lattice, the Z2-graded complex is Omega^{0,0} -> Omega^{0,1} with
 * D0 = dbar (optionally shifted by a constant (0,1)-flux h dzbar) and D1 = 0.
 * Modes are the shifted lattice vectors xi = (m+u, k+v); in the unitary frame
 * the mode operator is the single number 2 pi i sigma(xi) + h with
 *
 *     sigma(xi) = (xi_1 - tau xi_2) / sqrt(a Im tau),
 *
 * so the grade-0 spectrum is |2 pi i sigma + h|^2, which at h = 0 equals
 * 4 pi^2 xi^T G^{-1} xi for the real Gram G of the period lattice (first
 * generator = tau-period).  The torsion is log tau = 1/2 log Det'(D0* D0);
 * for h = 0 it has the closed Epstein form and matches the classical
 * theta/eta expression kronecker_torsion(u, v, tau).
 *
 * Compatible flat metric deformations of a complex torus act only through
 * the induced area factor (the complex structure is held fixed), so a real
 * metric path enters as area(s) = area0 * vol(s) / vol(0).
 */
#pragma once

#include "torsionlab/zeta.hpp"

namespace torsionlab {

struct DolbeaultSpec {
  ComplexTorus torus{cplx(0.0, 1.0)};
  cplx flux = 0.0;  ///< constant (0,1)-flux coefficient h
  std::string id = "dolbeault";
};

/// The unitary-frame symbol 2 pi i sigma(m + (u,v)) + flux.
cplx dolbeault_symbol(const DolbeaultSpec& spec, const Eigen::VectorXi& m);

/// Grade-0 eigenvalue |symbol|^2 at one mode.
double dolbeault_eigenvalue(const DolbeaultSpec& spec,
                            const Eigen::VectorXi& m);

/// Default dual radius for the heat path (same window rule as the real
/// kinds, with |flux| as the constant-part shift).
double dolbeault_default_radius(const DolbeaultSpec& spec,
                                double whi_factor = 1.0);

/// Nonzero spectrum below the radius (lexicographic modes); zero modes are
/// counted into *deficit.
std::vector<double> dolbeault_spectrum(const DolbeaultSpec& spec,
                                       double radius, long* deficit);

/// log Det' of grade g.  Grade 1 is empty (D1 = 0): the all-zero result.
/// The exact method requires flux = 0.
ZetaResult dolbeault_logdet(const DolbeaultSpec& spec, int grade,
                            ZetaMethod method = ZetaMethod::Auto,
                            const ZetaOptions& opt = {});

/// Harmonic dimensions with the kernel-exclusion certificate radius
/// (|flux| + margin)/(2 pi); b0 = b1 = number of zero modes.
BettiData dolbeault_betti(const DolbeaultSpec& spec, double margin = 0.5);

/// Closed-form log tau = 1/2 log Det'{4 pi^2 Q} via the Epstein zeta;
/// requires flux = 0.
double dolbeault_logtau_exact(const DolbeaultSpec& spec);

/// Induced action of a real metric path: area(s) = area0 vol(s)/vol(0).
DolbeaultSpec dolbeault_at(const DolbeaultSpec& base, const MetricPath& path,
                           double s);

}  // namespace torsionlab

/**
 * @file dolbeault.cpp
 * @brief Dolbeault spectra, determinants, and harmonic data.
 */
#include "torsionlab/dolbeault.hpp"

#include <cmath>
#include <sstream>

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

cplx dolbeault_symbol(const DolbeaultSpec& spec, const Eigen::VectorXi& m) {
  if (m.size() != 2)
    throw std::invalid_argument("dolbeault_symbol: mode must be 2-dimensional");
  const double xi1 = m[0] + spec.torus.u;
  const double xi2 = m[1] + spec.torus.v;
  const double denom =
      std::sqrt(spec.torus.area_scale * spec.torus.tau.imag());
  const cplx sigma = (cplx(xi1, 0.0) - spec.torus.tau * xi2) / denom;
  return cplx(0.0, 2.0 * kPi) * sigma + spec.flux;
}

double dolbeault_eigenvalue(const DolbeaultSpec& spec,
                            const Eigen::VectorXi& m) {
  return std::norm(dolbeault_symbol(spec, m));
}

double dolbeault_default_radius(const DolbeaultSpec& spec, double whi_factor) {
  const FlatTorus torus = spec.torus.real_torus();
  const double w_hi =
      std::min(0.01 * torus.scale(), torus.theta_gap() / 100.0) * whi_factor;
  const double w_lo = w_hi / 6.0;
  return (std::sqrt(46.0 / w_lo) + std::abs(spec.flux)) / (2.0 * kPi);
}

std::vector<double> dolbeault_spectrum(const DolbeaultSpec& spec,
                                       double radius, long* deficit) {
  const FlatTorus torus = spec.torus.real_torus();
  const Character chi = spec.torus.real_character();
  std::vector<double> lams;
  long zeros = 0;
  for (const auto& m : enumerate_modes(torus, chi, radius * radius)) {
    const Eigen::VectorXd xi = m.cast<double>() + chi.u();
    const double q = 4.0 * kPi * kPi * torus.dual_norm_sq(xi);
    const double thr = 1e-10 * (1.0 + q);
    const double lam = dolbeault_eigenvalue(spec, m);
    if (lam > thr)
      lams.push_back(lam);
    else
      ++zeros;
  }
  if (deficit != nullptr) *deficit = zeros;
  return lams;
}

ZetaResult dolbeault_logdet(const DolbeaultSpec& spec, int grade,
                            ZetaMethod method, const ZetaOptions& opt) {
  if (grade != 0 && grade != 1)
    throw std::invalid_argument("dolbeault_logdet: grade must be 0 or 1");
  if (grade == 1) {
    ZetaResult res;
    res.grade = 1;
    res.method = "empty";
    return res;
  }
  const FlatTorus torus = spec.torus.real_torus();
  const Character chi = spec.torus.real_character();

  const auto exact = [&]() {
    if (std::abs(spec.flux) != 0.0)
      throw std::invalid_argument(
          "exact Dolbeault determinant requires zero flux; '" + spec.id +
          "' carries a flux term");
    ZetaResult res;
    res.grade = 0;
    res.method = "exact";
    res.log_det_prime = epstein_logdet(torus, chi);
    res.zeta_prime0 = -res.log_det_prime;
    res.zeta0 = chi.trivial() ? -1.0 : 0.0;
    res.deficit = chi.trivial() ? 1 : 0;
    res.err = 1e-12 * std::max(1.0, std::abs(res.log_det_prime));
    return res;
  };

  const auto heat = [&]() {
    long deficit = 0;
    const double radius = dolbeault_default_radius(spec, opt.whi_factor);
    const std::vector<double> lams = dolbeault_spectrum(spec, radius, &deficit);
    return zeta_from_spectrum(lams, deficit, 2, torus.volume(), 1,
                              torus.scale(), torus.theta_gap(),
                              std::abs(spec.flux), 0, opt);
  };

  switch (method) {
    case ZetaMethod::Exact:
      return exact();
    case ZetaMethod::HeatTrace:
      return heat();
    case ZetaMethod::Auto: {
      ZetaResult h = heat();
      if (std::abs(spec.flux) != 0.0) return h;
      ZetaResult e = exact();
      const double tol = std::max(1e-5, 10.0 * h.err);
      if (std::abs(e.log_det_prime - h.log_det_prime) > tol) {
        std::ostringstream os;
        os << "independent determinant paths disagree for '" << spec.id
           << "': exact " << e.log_det_prime << " vs heat-trace "
           << h.log_det_prime << " (tolerance " << tol << ")";
        throw ConsistencyError(os.str(), e.log_det_prime, h.log_det_prime);
      }
      e.method = "exact (cross-validated)";
      return e;
    }
  }
  throw std::invalid_argument("dolbeault_logdet: unknown method");
}

BettiData dolbeault_betti(const DolbeaultSpec& spec, double margin) {
  const FlatTorus torus = spec.torus.real_torus();
  const Character chi = spec.torus.real_character();
  const double r0 = (std::abs(spec.flux) + margin) / (2.0 * kPi);
  BettiData b;
  b.certificate = r0;
  for (const auto& m : enumerate_modes(torus, chi, r0 * r0)) {
    const Eigen::VectorXd xi = m.cast<double>() + chi.u();
    const double q = 4.0 * kPi * kPi * torus.dual_norm_sq(xi);
    if (dolbeault_eigenvalue(spec, m) <= 1e-10 * (1.0 + q)) {
      // A zero of the scalar symbol kills dbar and dbar* alike.
      ++b.b0;
      ++b.b1;
    }
  }
  b.chi = b.b0 - b.b1;
  return b;
}

double dolbeault_logtau_exact(const DolbeaultSpec& spec) {
  return 0.5 * dolbeault_logdet(spec, 0, ZetaMethod::Exact).log_det_prime;
}

DolbeaultSpec dolbeault_at(const DolbeaultSpec& base, const MetricPath& path,
                           double s) {
  const double factor = path.torus_at(s).volume() / path.base().volume();
  DolbeaultSpec out = base;
  out.torus.area_scale = base.torus.area_scale * factor;
  return out;
}

}  // namespace torsionlab

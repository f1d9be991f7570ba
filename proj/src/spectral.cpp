/**
 * @file spectral.cpp
 * @brief Mode spectra, merged tables, heat traces, weighted supertraces.
 */
#include "torsionlab/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "torsionlab/kernels.hpp"

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string mode_string(const Eigen::VectorXi& m) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ")";
  return os.str();
}

/// Run fn(i) for i in [0, count) with workers pulling indices off a shared
/// counter.  Results must go into preallocated slots so the caller's merge
/// order is schedule-independent.  Exceptions are rethrown on the caller.
template <typename Fn>
void parallel_for_slots(std::size_t count, int threads, const Fn& fn) {
  const int nthreads = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(kernels::resolve_threads(threads)), count));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int k = 0; k < nthreads; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count && !failed.load();
           i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

Eigen::VectorXd eigenvalues_or_throw(const Eigen::MatrixXcd& h,
                                     const Eigen::VectorXi& m,
                                     const char* what) {
  if (h.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string("eigensolver failed for ") + what +
                             " at mode " + mode_string(m));
  return es.eigenvalues();
}

}  // namespace

ModeSpectrum mode_spectrum(const ComplexSpec& spec, const Eigen::VectorXi& m) {
  const ModeOperator op = spec.build_mode_operator(m);
  const Eigen::VectorXd xi = m.cast<double>() + spec.chi().u();
  const double q = 4.0 * kPi * kPi * spec.torus().dual_norm_sq(xi);
  const double thr = 1e-10 * (1.0 + q);

  const Eigen::VectorXd s0 =
      eigenvalues_or_throw(op.d0.adjoint() * op.d0, m, "D0*D0");
  const Eigen::VectorXd s1 =
      eigenvalues_or_throw(op.d1.adjoint() * op.d1, m, "D1*D1");

  ModeSpectrum ms;
  ms.m = m;
  int r0 = 0, r1 = 0;
  for (int i = 0; i < s0.size(); ++i)
    if (s0[i] > thr) {
      ms.spec0.push_back(s0[i]);
      ++r0;
    }
  for (int i = 0; i < s1.size(); ++i)
    if (s1[i] > thr) {
      ms.spec1.push_back(s1[i]);
      ++r1;
    }
  std::sort(ms.spec0.begin(), ms.spec0.end());
  std::sort(ms.spec1.begin(), ms.spec1.end());
  ms.ker0 = op.dim_even - r0 - r1;
  ms.ker1 = op.dim_odd - r1 - r0;
  if (ms.ker0 < 0 || ms.ker1 < 0)
    throw std::runtime_error(
        "kernel bookkeeping failed (rank exceeds dimension) at mode " +
        mode_string(m));
  return ms;
}

SpectrumTable build_spectrum_table(const ComplexSpec& spec, double radius,
                                   int threads) {
  SpectrumTable table;
  table.radius = radius;
  const auto modes =
      enumerate_modes(spec.torus(), spec.chi(), radius * radius);
  table.modes = modes;

  std::vector<ModeSpectrum> slots(modes.size());
  parallel_for_slots(modes.size(), threads,
                     [&](std::size_t i) { slots[i] = mode_spectrum(spec, modes[i]); });

  for (const ModeSpectrum& ms : slots) {
    table.lams0.insert(table.lams0.end(), ms.spec0.begin(), ms.spec0.end());
    table.lams1.insert(table.lams1.end(), ms.spec1.begin(), ms.spec1.end());
    table.ker0 += ms.ker0;
    table.ker1 += ms.ker1;
  }

  const auto profile = [&](const std::vector<double>& lams, int* rank,
                           long* deficit, const char* grade) {
    if (lams.empty() || modes.empty()) {
      *rank = 0;
      *deficit = 0;
      return;
    }
    const double per_mode =
        static_cast<double>(lams.size()) / static_cast<double>(modes.size());
    *rank = static_cast<int>(std::ceil(per_mode - 1e-9));
    *deficit = static_cast<long>(*rank) * static_cast<long>(modes.size()) -
               static_cast<long>(lams.size());
    if (*deficit < 0 || *deficit > 64) {
      std::ostringstream os;
      os << "rank profile of grade " << grade
         << " is not generic: " << lams.size() << " eigenvalues over "
         << modes.size() << " modes (deficit " << *deficit << ")";
      throw std::runtime_error(os.str());
    }
  };
  profile(table.lams0, &table.rank_generic0, &table.deficit0, "0");
  profile(table.lams1, &table.rank_generic1, &table.deficit1, "1");
  return table;
}

void fit_window(const ComplexSpec& spec, double whi_factor, double* w_lo,
                double* w_hi) {
  const double scale = spec.torus().scale();
  const double gap = spec.torus().theta_gap();
  *w_hi = std::min(0.01 * scale, gap / 100.0) * whi_factor;
  *w_lo = *w_hi / 6.0;
}

double default_radius(const ComplexSpec& spec, double whi_factor) {
  double w_lo = 0, w_hi = 0;
  fit_window(spec, whi_factor, &w_lo, &w_hi);
  return (std::sqrt(46.0 / w_lo) + spec.const_norm()) / (2.0 * kPi);
}

double heat_tail_bound(const ComplexSpec& spec, double radius, double t) {
  const int n = spec.n();
  const double vol = spec.torus().volume();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.torus().gram(),
                                                    Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  // Half-diameter of a unit lattice cell in the dual norm: padding the ball
  // radius by it makes the volume estimate an upper bound on the mode count.
  const double half_diam = 0.5 * std::sqrt(static_cast<double>(n) / lam_min);
  const double omega_n =
      std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  const double dim = static_cast<double>(spec.total_dim());
  const double bn = spec.const_norm();

  kernels::KahanSum acc;
  for (int k = 0; k < 100000; ++k) {
    const double rho = radius + k;
    const double count = omega_n * vol * std::pow(rho + 1.0 + half_diam, n);
    const double gap = std::max(0.0, 2.0 * kPi * rho - bn);
    const double term = dim * count * std::exp(-t * gap * gap);
    acc.add(term);
    if (term < 1e-280) break;
  }
  return acc.value();
}

HeatTraceSample heat_trace(const ComplexSpec& spec, const SpectrumTable& table,
                           double t, int threads) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_trace requires t > 0");
  const double tail = heat_tail_bound(spec, table.radius, t);
  if (!(tail <= 1e-6)) {
    // Find the smallest feasible t for this cutoff and report it.
    double lo = t, hi = std::max(t, 1e-6);
    while (heat_tail_bound(spec, table.radius, hi) > 1e-6) hi *= 2.0;
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (heat_tail_bound(spec, table.radius, mid) > 1e-6)
        lo = mid;
      else
        hi = mid;
    }
    std::ostringstream os;
    os << "heat_trace: truncation tail bound " << tail << " at t=" << t
       << " exceeds 1e-6 for cutoff radius " << table.radius
       << "; minimal feasible t is about " << hi
       << " (raise the radius to go smaller)";
    throw std::runtime_error(os.str());
  }

  HeatTraceSample s;
  s.t = t;
  s.tr_d0 = kernels::exp_sum(table.lams0.data(), table.lams0.size(), t, threads);
  s.tr_d1 = kernels::exp_sum(table.lams1.data(), table.lams1.size(), t, threads);
  const double cross = s.tr_d0 + s.tr_d1;
  s.tr0 = static_cast<double>(table.ker0) + cross;
  s.tr1 = static_cast<double>(table.ker1) + cross;
  s.str = s.tr0 - s.tr1;
  s.tail_bound = tail;
  return s;
}

BettiData betti_numbers(const ComplexSpec& spec, double margin) {
  const double r0 = spec.kernel_bound_radius(margin);
  const auto modes = enumerate_modes(spec.torus(), spec.chi(), r0 * r0);
  BettiData b;
  b.certificate = r0;
  for (const auto& m : modes) {
    const ModeSpectrum ms = mode_spectrum(spec, m);
    b.b0 += ms.ker0;
    b.b1 += ms.ker1;
  }
  b.chi = b.b0 - b.b1;
  return b;
}

namespace {

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  Eigen::MatrixXcd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(rows[i], cols[j]);
  return out;
}

}  // namespace

WeightedSpectrum weighted_spectrum(const ComplexSpec& spec,
                                   const Eigen::MatrixXcd& alpha,
                                   double radius, int threads) {
  if (alpha.rows() != spec.total_dim() || alpha.cols() != spec.total_dim())
    throw std::invalid_argument("weighted_spectrum: alpha has wrong shape");
  const Eigen::MatrixXcd a0 =
      gather(alpha, spec.even_indices(), spec.even_indices());
  const Eigen::MatrixXcd a1 =
      gather(alpha, spec.odd_indices(), spec.odd_indices());
  const auto modes = enumerate_modes(spec.torus(), spec.chi(), radius * radius);

  struct Slot {
    std::vector<double> lam0, wt0, lam1, wt1;
  };
  std::vector<Slot> slots(modes.size());

  parallel_for_slots(modes.size(), threads, [&](std::size_t idx) {
    const Eigen::VectorXi& m = modes[idx];
    const ModeOperator op = spec.build_mode_operator(m);
    const Eigen::VectorXd xi = m.cast<double>() + spec.chi().u();
    const double q = 4.0 * kPi * kPi * spec.torus().dual_norm_sq(xi);
    const double thr = 1e-10 * (1.0 + q);

    const auto weigh = [&](const Eigen::MatrixXcd& lap,
                           const Eigen::MatrixXcd& a, std::vector<double>* lam,
                           std::vector<double>* wt) {
      if (lap.rows() == 0) return;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lap);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed at mode " +
                                 mode_string(m));
      for (int j = 0; j < es.eigenvalues().size(); ++j) {
        const double w = es.eigenvalues()[j];
        if (w <= thr) continue;  // kernel branch: weight zero by convention
        const Eigen::VectorXcd v = es.eigenvectors().col(j);
        lam->push_back(w);
        wt->push_back(std::real(static_cast<cplx>(v.adjoint() * a * v)));
      }
    };

    Slot& slot = slots[idx];
    const Eigen::MatrixXcd l0 =
        op.d0.adjoint() * op.d0 + op.d1 * op.d1.adjoint();
    const Eigen::MatrixXcd l1 =
        op.d1.adjoint() * op.d1 + op.d0 * op.d0.adjoint();
    weigh(l0, a0, &slot.lam0, &slot.wt0);
    weigh(l1, a1, &slot.lam1, &slot.wt1);
  });

  WeightedSpectrum ws;
  for (const Slot& slot : slots) {
    ws.lam0.insert(ws.lam0.end(), slot.lam0.begin(), slot.lam0.end());
    ws.wt0.insert(ws.wt0.end(), slot.wt0.begin(), slot.wt0.end());
    ws.lam1.insert(ws.lam1.end(), slot.lam1.begin(), slot.lam1.end());
    ws.wt1.insert(ws.wt1.end(), slot.wt1.begin(), slot.wt1.end());
  }
  return ws;
}

double weighted_supertrace(const WeightedSpectrum& ws, double t, int threads) {
  const double even = kernels::exp_weighted_sum(ws.lam0.data(), ws.wt0.data(),
                                                ws.lam0.size(), t, threads);
  const double odd = kernels::exp_weighted_sum(ws.lam1.data(), ws.wt1.data(),
                                               ws.lam1.size(), t, threads);
  return even - odd;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1)
    throw std::invalid_argument("geometric_grid: need 0 < lo <= hi, count >= 1");
  std::vector<double> ts(static_cast<std::size_t>(count));
  if (count == 1) {
    ts[0] = lo;
    return ts;
  }
  const double ratio = hi / lo;
  for (int i = 0; i < count; ++i)
    ts[static_cast<std::size_t>(i)] =
        lo * std::pow(ratio, static_cast<double>(i) / (count - 1));
  return ts;
}

double weighted_str_c0(const ComplexSpec& spec, const Eigen::MatrixXcd& alpha,
                       double whi_factor, int kextra, int threads) {
  const int n = spec.n();
  const double vol = spec.torus().volume();
  double w_lo = 0, w_hi = 0;
  fit_window(spec, whi_factor, &w_lo, &w_hi);
  const double radius = default_radius(spec, whi_factor);
  const WeightedSpectrum ws = weighted_spectrum(spec, alpha, radius, threads);

  const Eigen::MatrixXcd a0 =
      gather(alpha, spec.even_indices(), spec.even_indices());
  const Eigen::MatrixXcd a1 =
      gather(alpha, spec.odd_indices(), spec.odd_indices());
  const double stral = std::real(a0.trace()) - std::real(a1.trace());
  const double c0_pin = stral * vol * std::pow(4.0 * kPi, -0.5 * n);

  const std::vector<double> ts = geometric_grid(w_lo, w_hi, 40);
  const int rows = static_cast<int>(ts.size());
  Eigen::VectorXd resid(rows);
  for (int i = 0; i < rows; ++i)
    resid[i] = weighted_supertrace(ws, ts[static_cast<std::size_t>(i)], threads) -
               c0_pin * std::pow(ts[static_cast<std::size_t>(i)], -0.5 * n);

  const int kmax = n / 2 + 4 + kextra;
  std::vector<double> exps;
  for (int j = 1; j <= kmax; ++j) exps.push_back(j - 0.5 * n);
  if (n % 2 == 1) exps.push_back(0.0);

  Eigen::MatrixXd a(rows, static_cast<int>(exps.size()));
  for (int i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < exps.size(); ++j)
      a(i, static_cast<Eigen::Index>(j)) =
          std::pow(ts[static_cast<std::size_t>(i)], exps[j]);

  const double max_resid = resid.cwiseAbs().maxCoeff();
  Eigen::MatrixXd aw = a;
  Eigen::VectorXd bw = resid;
  for (int i = 0; i < rows; ++i) {
    const double sc =
        std::max(std::abs(resid[i]), max_resid * 1e-6 + 1e-300);
    aw.row(i) /= sc;
    bw[i] /= sc;
  }
  const Eigen::VectorXd coef =
      aw.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(bw);

  for (std::size_t j = 0; j < exps.size(); ++j)
    if (exps[j] == 0.0) return coef[static_cast<Eigen::Index>(j)];
  return 0.0;
}

SmallTimeFit small_time_fit(const std::vector<double>& ts,
                            const std::vector<double>& vals, int n, int K) {
  if (ts.size() != vals.size() || ts.empty())
    throw std::invalid_argument("small_time_fit: mismatched or empty samples");
  const int rows = static_cast<int>(ts.size());
  SmallTimeFit fit;
  for (int j = 0; j <= K; ++j) fit.exponents.push_back(j - 0.5 * n);

  Eigen::MatrixXd a(rows, K + 1);
  Eigen::VectorXd b(rows);
  double max_val = 0.0;
  for (int i = 0; i < rows; ++i)
    max_val = std::max(max_val, std::abs(vals[static_cast<std::size_t>(i)]));
  for (int i = 0; i < rows; ++i) {
    const double sc = std::max(std::abs(vals[static_cast<std::size_t>(i)]),
                               max_val * 1e-6 + 1e-300);
    for (int j = 0; j <= K; ++j)
      a(i, j) = std::pow(ts[static_cast<std::size_t>(i)], fit.exponents[static_cast<std::size_t>(j)]) / sc;
    b[i] = vals[static_cast<std::size_t>(i)] / sc;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const Eigen::VectorXd coef = svd.solve(b);
  fit.coeffs.assign(coef.data(), coef.data() + coef.size());
  fit.residual = (a * coef - b).cwiseAbs().maxCoeff();
  const double smin = svd.singularValues().minCoeff();
  fit.cond = smin > 0 ? svd.singularValues().maxCoeff() / smin
                      : std::numeric_limits<double>::infinity();
  return fit;
}

double mckean_singer_deviation(const ComplexSpec& spec,
                               const SpectrumTable& table,
                               const std::vector<double>& ts, int chi,
                               int threads) {
  double dev = 0.0;
  for (double t : ts) {
    const HeatTraceSample s = heat_trace(spec, table, t, threads);
    dev = std::max(dev, std::abs(s.str - static_cast<double>(chi)));
  }
  return dev;
}

}  // namespace torsionlab

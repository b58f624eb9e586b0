#include "dipoles/master.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "dipoles/errors.hpp"

namespace dipoles {

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::zero(int n_atoms) {
  const int m = n_atoms * (n_atoms - 1) / 2;
  DensityMatrix rho;
  rho.a0 = 0.0;
  rho.v = CVector::Zero(n_atoms);
  rho.w = CVector::Zero(m);
  rho.rho1 = CMatrix::Zero(n_atoms, n_atoms);
  rho.s = CMatrix::Zero(n_atoms, m);
  rho.rho2 = CMatrix::Zero(m, m);
  return rho;
}

DensityMatrix DensityMatrix::ground(int n_atoms) {
  DensityMatrix rho = zero(n_atoms);
  rho.a0 = 1.0;
  return rho;
}

double DensityMatrix::trace() const {
  return a0 + rho1.trace().real() + rho2.trace().real();
}

double DensityMatrix::norm() const {
  double sq = a0 * a0 + v.squaredNorm() + w.squaredNorm() +
              rho1.squaredNorm() + s.squaredNorm() + rho2.squaredNorm();
  return std::sqrt(sq);
}

void DensityMatrix::axpy(double a, const DensityMatrix& other) {
  a0 += a * other.a0;
  v += a * other.v;
  w += a * other.w;
  rho1 += a * other.rho1;
  s += a * other.s;
  rho2 += a * other.rho2;
}

void DensityMatrix::scale(double a) {
  a0 *= a;
  v *= a;
  w *= a;
  rho1 *= a;
  s *= a;
  rho2 *= a;
}

// ---------------------------------------------------------------------------
// DriveConfig

DriveConfig DriveConfig::plane_wave(const AtomArray& array, Complex omega0,
                                    const Vec3& k0, double delta) {
  DriveConfig d;
  d.kind = DriveKind::kPlaneWave;
  d.omega0 = std::abs(omega0);
  d.delta = delta;
  const int n = array.size();
  d.omega.resize(n);
  const Vec3 k = k0.norm() > 0 ? Vec3(kWaveNumber * k0.normalized())
                               : Vec3::Zero();
  for (int j = 0; j < n; ++j) {
    d.omega(j) = omega0 * std::exp(kI * k.dot(array.position(j)));
  }
  return d;
}

DriveConfig DriveConfig::eigenmode(const SingleModeSet& singles, int alpha,
                                   Complex omega0, double delta) {
  if (alpha < 0 || alpha >= singles.count()) {
    throw std::invalid_argument("DriveConfig::eigenmode: bad mode index");
  }
  DriveConfig d;
  d.kind = DriveKind::kEigenmode;
  d.omega0 = std::abs(omega0);
  d.alpha = alpha;
  d.delta = delta;
  d.omega = omega0 * singles.V.col(alpha);
  return d;
}

DriveConfig DriveConfig::two_mode(const SingleModeSet& singles, int alpha,
                                  int alpha_tilde, double rel_amplitude,
                                  double rel_phase, Complex omega0) {
  if (alpha < 0 || alpha >= singles.count() || alpha_tilde < 0 ||
      alpha_tilde >= singles.count()) {
    throw std::invalid_argument("DriveConfig::two_mode: bad mode index");
  }
  if (alpha == alpha_tilde) {
    throw std::invalid_argument("DriveConfig::two_mode: need distinct modes");
  }
  if (rel_amplitude < 0.0) {
    throw std::invalid_argument("DriveConfig::two_mode: A < 0");
  }
  DriveConfig d;
  d.kind = DriveKind::kTwoMode;
  d.omega0 = std::abs(omega0);
  d.alpha = alpha;
  d.alpha_tilde = alpha_tilde;
  d.rel_amplitude = rel_amplitude;
  d.rel_phase = rel_phase;
  d.delta = singles.delta(alpha);  // the detected mode's shift, by derivation
  d.omega = omega0 * (singles.V.col(alpha) +
                      rel_amplitude * std::exp(kI * rel_phase) *
                          singles.V.col(alpha_tilde));
  return d;
}

void DriveConfig::check_low_intensity(const SingleModeSet& singles) const {
  if (guard_override) return;
  double floor = kGamma;
  if (kind == DriveKind::kEigenmode || kind == DriveKind::kTwoMode) {
    floor = singles.gamma(alpha);
    if (alpha_tilde >= 0) floor = std::min(floor, singles.gamma(alpha_tilde));
  }
  if (omega0 > 0.05 * floor) {
    throw std::invalid_argument(
        "DriveConfig: |Omega0| exceeds 0.05 * min driven-mode decay rate (" +
        std::to_string(omega0) + " > 0.05 * " + std::to_string(floor) +
        "); set guard_override to force");
  }
}

// ---------------------------------------------------------------------------
// DetectionOperator

DetectionOperator DetectionOperator::adjoint_mode(const SingleModeSet& singles,
                                                  int alpha) {
  if (alpha < 0 || alpha >= singles.count()) {
    throw std::invalid_argument("DetectionOperator::adjoint_mode: bad index");
  }
  DetectionOperator det;
  det.kind = DetectorKind::kAdjointMode;
  det.c = singles.V.col(alpha);
  return det;
}

DetectionOperator DetectionOperator::mode(const SingleModeSet& singles,
                                          int alpha) {
  if (alpha < 0 || alpha >= singles.count()) {
    throw std::invalid_argument("DetectionOperator::mode: bad index");
  }
  DetectionOperator det;
  det.kind = DetectorKind::kMode;
  det.c = singles.V.col(alpha).conjugate();
  return det;
}

DetectionOperator DetectionOperator::direction(const AtomArray& array,
                                               const Vec3& k) {
  DetectionOperator det;
  det.kind = DetectorKind::kDirection;
  const int n = array.size();
  det.c.resize(n);
  const Vec3 kv = k.norm() > 0 ? Vec3(kWaveNumber * k.normalized())
                               : Vec3::Zero();
  for (int j = 0; j < n; ++j) {
    det.c(j) = std::exp(-kI * kv.dot(array.position(j)));
  }
  return det;
}

DetectionOperator DetectionOperator::free_space(int n_atoms) {
  DetectionOperator det;
  det.kind = DetectorKind::kFreeSpace;
  det.c = CVector::Zero(n_atoms);
  return det;
}

// ---------------------------------------------------------------------------
// Operator assembly

CMatrix drive_raising_matrix(const CVector& omega, const PairCodec& codec) {
  const int m = codec.pair_count();
  CMatrix t = CMatrix::Zero(m, codec.n_atoms());
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    t(mu, m1) = 0.5 * omega(m2);
    t(mu, m2) = 0.5 * omega(m1);
  }
  return t;
}

CMatrix pair_lowering_matrix(const CVector& c, const PairCodec& codec) {
  const int m = codec.pair_count();
  CMatrix q = CMatrix::Zero(codec.n_atoms(), m);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    q(m2, mu) = c(m1);
    q(m1, mu) = c(m2);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Liouvillian

Liouvillian::Liouvillian(GreensMatrices greens, PairCodec codec)
    : greens_(std::move(greens)), codec_(std::move(codec)) {
  const int n = codec_.n_atoms();
  if (greens_.G.rows() != n || greens_.G.cols() != n) {
    throw std::invalid_argument("Liouvillian: G size mismatch");
  }
  const int m = codec_.pair_count();
  if (m > 0 && (greens_.Gtilde.rows() != m || greens_.Gtilde.cols() != m)) {
    throw std::invalid_argument("Liouvillian: Gtilde size mismatch");
  }
  re_g_ = greens_.G.real();
}

double Liouvillian::rate_bound() const {
  double b = 2.0 * greens_.G.cwiseAbs().rowwise().sum().maxCoeff();
  if (greens_.Gtilde.rows() > 0) {
    b = std::max(b, 2.0 * greens_.Gtilde.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return std::max(b, 1.0);
}

DensityMatrix Liouvillian::rhs(const DensityMatrix& rho,
                               const DriveConfig& drive) const {
  const int n = codec_.n_atoms();
  const int m = codec_.pair_count();
  if (rho.n_atoms() != n || rho.n_pairs() != m) {
    throw std::invalid_argument("Liouvillian::rhs: state size mismatch");
  }
  if (drive.omega.size() != n) {
    throw std::invalid_argument("Liouvillian::rhs: drive size mismatch");
  }

  const CVector om = 0.5 * drive.omega;  // coefficients of sigma^+_j in H_L
  const CMatrix T = drive_raising_matrix(drive.omega, codec_);
  const Complex idelta(0.0, drive.delta);
  const CMatrix& G = greens_.G;
  const CMatrix& Gt = greens_.Gtilde;
  const RMatrix& R = re_g_;

  DensityMatrix d = DensityMatrix::zero(n);

  // Ground population: drive exchange with v plus recycling from rho1.
  const Complex om_v = om.dot(rho.v);  // conjugates om: sum_j om_j^* v_j
  d.a0 = 2.0 * om_v.imag() + 2.0 * (R.cwiseProduct(rho.rho1.real())).sum();

  // Single coherences v = <e|rho|g>.
  d.v = idelta * rho.v -
        kI * (om * rho.a0 + T.adjoint() * rho.w - rho.rho1 * om) - G * rho.v;
  if (m > 0) {
    const CMatrix F = (2.0 * R) * rho.s;  // F(i, mu) = sum_j 2R_ij s(j, mu)
    for (int mm = 0; mm < n; ++mm) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < n; ++i) {
        if (i == mm) continue;
        acc += F(i, codec_.index_unordered(i, mm));
      }
      d.v(mm) += acc;
    }
  }

  // Double coherences w = <ee|rho|g>.
  if (m > 0) {
    d.w = 2.0 * idelta * rho.w -
          kI * (T * rho.v - rho.s.transpose() * om) - Gt * rho.w;
  }

  // Single-manifold block rho1.
  d.rho1 = -kI * (om * rho.v.adjoint() - rho.v * om.adjoint()) -
           (G * rho.rho1 + rho.rho1 * G.conjugate());
  if (m > 0) {
    d.rho1 += -kI * (T.adjoint() * rho.s.transpose() - rho.s.conjugate() * T);
    // Recycling: one photon out of the double manifold.
    for (int mm = 0; mm < n; ++mm) {
      for (int nn = 0; nn < n; ++nn) {
        Complex acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
          if (i == mm) continue;
          const int pim = codec_.index_unordered(i, mm);
          for (int j = 0; j < n; ++j) {
            if (j == nn) continue;
            acc += 2.0 * R(i, j) * rho.rho2(pim, codec_.index_unordered(j, nn));
          }
        }
        d.rho1(mm, nn) += acc;
      }
    }
  }

  // Double-single coherences, handled as the (ee, e) block B = s^T.
  if (m > 0) {
    const CMatrix B = rho.s.transpose();
    const CMatrix dB = idelta * B -
                       kI * (T * rho.rho1 - rho.w * om.adjoint() -
                             rho.rho2 * T) -
                       (Gt * B + B * G.conjugate());
    d.s = dB.transpose();

    // Double-manifold block rho2. Drive out to the triple manifold is
    // dropped: the truncation boundary of this representation.
    d.rho2 = -kI * (T * rho.s.conjugate() - rho.s.transpose() * T.adjoint()) -
             (Gt * rho.rho2 + rho.rho2 * Gt.conjugate());
  }

  return d;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

void rk4_step(DensityMatrix& y, const DriveConfig& drive,
              const Liouvillian& lv, double dt, const DensityMatrix* k1_hint) {
  const DensityMatrix k1 = k1_hint ? *k1_hint : lv.rhs(y, drive);
  DensityMatrix tmp = y;
  tmp.axpy(0.5 * dt, k1);
  const DensityMatrix k2 = lv.rhs(tmp, drive);
  tmp = y;
  tmp.axpy(0.5 * dt, k2);
  const DensityMatrix k3 = lv.rhs(tmp, drive);
  tmp = y;
  tmp.axpy(dt, k3);
  const DensityMatrix k4 = lv.rhs(tmp, drive);
  y.axpy(dt / 6.0, k1);
  y.axpy(dt / 3.0, k2);
  y.axpy(dt / 3.0, k3);
  y.axpy(dt / 6.0, k4);
}

void check_stability(const DensityMatrix& y, double trace0, double trace_tol) {
  const double drift = std::abs(y.trace() - trace0);
  if (drift > trace_tol) {
    throw StepSizeError("evolve: trace drift " + std::to_string(drift) +
                        " exceeds tolerance; reduce dt");
  }
  if (y.a0 < -1e-9) {
    throw StepSizeError("evolve: ground population went negative (" +
                        std::to_string(y.a0) + "); reduce dt");
  }
}

}  // namespace

DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& drive,
                     const Liouvillian& lv, double t_end,
                     const IntegratorOptions& opts) {
  if (t_end < 0.0) throw std::invalid_argument("evolve: negative t_end");
  const double dt = opts.dt > 0.0
                        ? opts.dt
                        : 0.01 / (lv.rate_bound() + 2.0 * std::abs(drive.delta));
  DensityMatrix y = rho0;
  const double trace0 = y.trace();
  double t = 0.0;
  long step = 0;
  while (t < t_end - 1e-15 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - t);
    rk4_step(y, drive, lv, h, nullptr);
    t += h;
    if (++step % 64 == 0) check_stability(y, trace0, opts.trace_tol);
  }
  check_stability(y, trace0, opts.trace_tol);
  return y;
}

DensityMatrix steady_state(const DriveConfig& drive, const Liouvillian& lv,
                           const IntegratorOptions& opts,
                           const DensityMatrix* init) {
  const int n = lv.n_atoms();
  DensityMatrix y = init ? *init : DensityMatrix::ground(n);
  const double trace0 = y.trace();

  // Slowest collective rate; sets the equilibration horizon.
  Eigen::ComplexEigenSolver<CMatrix> es(lv.G(), false);
  const double gamma_min = 2.0 * es.eigenvalues().real().minCoeff();
  if (gamma_min > 0.0 && 20.0 / gamma_min > 1e5) {
    std::clog << "steady_state: slowest mode gamma = " << gamma_min
              << " Gamma implies equilibration beyond 1e5/Gamma; "
                 "consider the analytic low-intensity path\n";
  }

  // Contraction step: the RK4 fixed point of this linear flow is the exact
  // stationary state, so the step is chosen for stability, not accuracy.
  const double dt = opts.dt > 0.0
                        ? opts.dt
                        : 0.5 / (lv.rate_bound() + 2.0 * std::abs(drive.delta));
  double t = 0.0;
  long step = 0;
  while (t < opts.max_time) {
    const DensityMatrix k1 = lv.rhs(y, drive);
    if (k1.norm() < opts.tol * std::max(y.norm(), 1e-300)) return y;
    rk4_step(y, drive, lv, dt, &k1);
    t += dt;
    if (++step % 64 == 0) check_stability(y, trace0, opts.trace_tol);
  }
  throw ConvergenceError(
      "steady_state: no convergence within max_time = " +
      std::to_string(opts.max_time) + " (slowest mode gamma = " +
      std::to_string(gamma_min) + " Gamma)");
}

// ---------------------------------------------------------------------------
// Detection and correlation observables

double intensity(const DensityMatrix& rho, const DetectionOperator& det,
                 const PairCodec& codec) {
  if (det.kind == DetectorKind::kFreeSpace) {
    throw std::invalid_argument("intensity: use intensity_free_space");
  }
  const Complex single = det.c.transpose() * rho.rho1 * det.c.conjugate();
  double out = single.real();
  if (rho.n_pairs() > 0) {
    const CMatrix C = pair_lowering_matrix(det.c, codec);
    out += ((C * rho.rho2).cwiseProduct(C.conjugate())).sum().real();
  }
  return out;
}

double intensity_free_space(const DensityMatrix& rho, const Liouvillian& lv) {
  // Total emission rate: 2 Tr[Re{G} rho1] + 2 Tr[Re{Gtilde} rho2].
  double out = 2.0 * (lv.ReG().cwiseProduct(rho.rho1.real())).sum();
  if (rho.n_pairs() > 0) {
    out += 2.0 *
           (lv.Gtilde().real().cwiseProduct(rho.rho2.real())).sum();
  }
  return out;
}

ProjectedState project_photon(const DensityMatrix& rho,
                              const DetectionOperator& det,
                              const PairCodec& codec) {
  if (det.kind == DetectorKind::kFreeSpace) {
    throw std::invalid_argument(
        "project_photon: no conditional state for free-space detection");
  }
  const int n = rho.n_atoms();
  ProjectedState out;
  out.state = DensityMatrix::zero(n);
  const Complex a0p = det.c.transpose() * rho.rho1 * det.c.conjugate();
  out.state.a0 = a0p.real();
  if (rho.n_pairs() > 0) {
    const CMatrix C = pair_lowering_matrix(det.c, codec);
    out.state.v = C * rho.s.transpose() * det.c.conjugate();
    out.state.rho1 = C * rho.rho2 * C.adjoint();
  }
  out.rate = out.state.trace();
  if (!(out.rate > 0.0)) {
    throw NoEmissionError("project_photon: <sigma^+ sigma^-> <= 0");
  }
  out.state.scale(1.0 / out.rate);
  return out;
}

std::vector<double> g2_tau(const DriveConfig& drive, const Liouvillian& lv,
                           const DetectionOperator& det_first,
                           const DetectionOperator& det_second,
                           const std::vector<double>& tau_grid,
                           const IntegratorOptions& opts,
                           const DensityMatrix* steady) {
  for (size_t i = 1; i < tau_grid.size(); ++i) {
    if (tau_grid[i] < tau_grid[i - 1]) {
      throw std::invalid_argument("g2_tau: tau grid must be ascending");
    }
  }
  if (!tau_grid.empty() && tau_grid.front() < 0.0) {
    throw std::invalid_argument("g2_tau: negative tau");
  }
  const DensityMatrix ss =
      steady ? *steady : steady_state(drive, lv, opts);
  const double i2 = det_second.kind == DetectorKind::kFreeSpace
                        ? intensity_free_space(ss, lv)
                        : intensity(ss, det_second, lv.codec());
  if (!(i2 > 0.0)) throw NoEmissionError("g2_tau: zero detected intensity");

  ProjectedState p = project_photon(ss, det_first, lv.codec());
  std::vector<double> out;
  out.reserve(tau_grid.size());
  double t = 0.0;
  DensityMatrix state = std::move(p.state);
  for (double tau : tau_grid) {
    if (tau > t) {
      state = evolve(state, drive, lv, tau - t, opts);
      t = tau;
    }
    const double rate = det_second.kind == DetectorKind::kFreeSpace
                            ? intensity_free_space(state, lv)
                            : intensity(state, det_second, lv.codec());
    out.push_back(rate / i2);
  }
  return out;
}

double g2_zero_mode(const DensityMatrix& rho, const DetectionOperator& det,
                    const PairCodec& codec) {
  const double denom = intensity(rho, det, codec);
  if (!(denom > 0.0)) throw NoEmissionError("g2_zero_mode: zero intensity");
  if (rho.n_pairs() == 0) return 0.0;  // a lone two-level atom never pairs up
  const int m = codec.pair_count();
  CVector d(m);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    d(mu) = 2.0 * det.c(m1) * det.c(m2);
  }
  const Complex num = d.transpose() * rho.rho2 * d.conjugate();
  return num.real() / (denom * denom);
}

double g2_zero_freespace(const DensityMatrix& rho_ss, const Liouvillian& lv) {
  const double denom = intensity_free_space(rho_ss, lv);
  if (!(denom > 0.0)) {
    throw NoEmissionError("g2_zero_freespace: zero intensity");
  }
  if (rho_ss.n_pairs() == 0) return 0.0;
  const PairCodec& codec = lv.codec();
  const RMatrix D = 2.0 * lv.ReG();
  const int m = codec.pair_count();
  double num = 0.0;
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    for (int nu = 0; nu < m; ++nu) {
      const auto [n1, n2] = codec.atoms(nu);
      const double kern =
          2.0 * (D(m1, n1) * D(m2, n2) + D(m1, n2) * D(m2, n1));
      num += kern * rho_ss.rho2(mu, nu).real();
    }
  }
  return num / (denom * denom);
}

}  // namespace dipoles

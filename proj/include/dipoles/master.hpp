#ifndef DIPOLES_MASTER_HPP
#define DIPOLES_MASTER_HPP

#include <vector>

#include "dipoles/geometry.hpp"
#include "dipoles/greens.hpp"
#include "dipoles/modes.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

/// Density matrix truncated at the double-excitation manifold, stored by
/// blocks. Conventions (mu = (m1, m2), m1 < m2):
///   a0            = <g|rho|g>
///   v(j)          = <e_j|rho|g>
///   w(mu)         = <ee_mu|rho|g>
///   rho1(i, j)    = <e_i|rho|e_j>          (Hermitian)
///   s(j, mu)      = <ee_mu|rho|e_j>        (N x M)
///   rho2(mu, nu)  = <ee_mu|rho|ee_nu>      (Hermitian)
struct DensityMatrix {
  double a0 = 1.0;
  CVector v;
  CVector w;
  CMatrix rho1;
  CMatrix s;
  CMatrix rho2;

  static DensityMatrix ground(int n_atoms);
  static DensityMatrix zero(int n_atoms);

  int n_atoms() const { return static_cast<int>(v.size()); }
  int n_pairs() const { return static_cast<int>(w.size()); }

  double trace() const;        // a0 + tr(rho1) + tr(rho2)
  double norm() const;         // Frobenius norm over all blocks
  void axpy(double a, const DensityMatrix& other);  // *this += a * other
  void scale(double a);
};

enum class DriveKind { kPlaneWave, kEigenmode, kTwoMode };

/// Per-atom Rabi amplitudes Omega_j plus detuning delta (units Gamma).
struct DriveConfig {
  CVector omega;        // Omega_j
  double delta = 0.0;
  DriveKind kind = DriveKind::kPlaneWave;
  double omega0 = 0.0;  // scalar amplitude the construction used
  // Two-mode metadata (valid when kind == kTwoMode)
  int alpha = -1, alpha_tilde = -1;
  double rel_amplitude = 0.0, rel_phase = 0.0;
  bool guard_override = false;

  static DriveConfig plane_wave(const AtomArray& array, Complex omega0,
                                const Vec3& k0, double delta);
  /// Omega_j = Omega0 V_{j alpha}, detuned to delta (usually Delta_alpha).
  static DriveConfig eigenmode(const SingleModeSet& singles, int alpha,
                               Complex omega0, double delta);
  /// Omega_j = Omega0 (V_{j a} + A e^{i phi} V_{j at}), detuned to Delta_a.
  static DriveConfig two_mode(const SingleModeSet& singles, int alpha,
                              int alpha_tilde, double rel_amplitude,
                              double rel_phase, Complex omega0);

  /// Low-intensity guard: |Omega0| <= 0.05 * min gamma of the driven modes
  /// (Gamma itself for a plane wave). Throws std::invalid_argument unless
  /// guard_override is set.
  void check_low_intensity(const SingleModeSet& singles) const;
};

enum class DetectorKind { kMode, kAdjointMode, kDirection, kFreeSpace };

/// Collective lowering operator sigma^- = sum_j c_j sigma^-_j, or the
/// free-space kernel D = 2 Re{G} when kind == kFreeSpace.
struct DetectionOperator {
  DetectorKind kind = DetectorKind::kDirection;
  CVector c;

  /// c_j = V_{j alpha}: the detector conjugate to eigenmode drive. Its
  /// raising partner is sum_j V*_{j alpha} sigma^+_j, so that
  /// sigma'^-_{a'} sigma^+_a |g> = delta_{a a'} |g> under the bilinear
  /// mode normalization.
  static DetectionOperator adjoint_mode(const SingleModeSet& singles,
                                        int alpha);
  /// c_j = V*_{j alpha}: plain Hermitian conjugate of the mode raising
  /// operator (does not satisfy the delta extraction identity).
  static DetectionOperator mode(const SingleModeSet& singles, int alpha);
  /// c_j = e^{-i k . r_j}, |k| = 2 pi.
  static DetectionOperator direction(const AtomArray& array, const Vec3& k);
  static DetectionOperator free_space(int n_atoms);
};

/// Precomputed context for the right-hand side of the master equation.
/// Holds the interaction matrices and the pair codec; drive-dependent
/// pieces are assembled per call.
class Liouvillian {
 public:
  Liouvillian(GreensMatrices greens, PairCodec codec);

  const CMatrix& G() const { return greens_.G; }
  const CMatrix& Gtilde() const { return greens_.Gtilde; }
  const RMatrix& ReG() const { return re_g_; }
  const PairCodec& codec() const { return codec_; }
  int n_atoms() const { return codec_.n_atoms(); }

  /// drho/dt for the truncated block density matrix.
  DensityMatrix rhs(const DensityMatrix& rho, const DriveConfig& drive) const;

  /// Conservative per-rate scale: Gershgorin bound on the fastest decay.
  double rate_bound() const;

 private:
  GreensMatrices greens_;
  PairCodec codec_;
  RMatrix re_g_;
};

/// M x N matrix of the raising drive: row mu has Omega_{m1}/2 at column m2
/// and Omega_{m2}/2 at column m1.
CMatrix drive_raising_matrix(const CVector& omega, const PairCodec& codec);

/// N x M matrix of a collective lowering operator acting double -> single:
/// column mu has c_{m1} at row m2 and c_{m2} at row m1.
CMatrix pair_lowering_matrix(const CVector& c, const PairCodec& codec);

struct IntegratorOptions {
  double dt = 0.0;          // 0 -> 0.01 / rate_bound (accuracy default)
  double tol = 1e-10;       // steady-state residual: ||rhs|| < tol * ||rho||
  double max_time = 1e6;    // hard cap for steady_state, units 1/Gamma
  double trace_tol = 1e-6;  // instability guard
};

/// Fixed-step RK4 up to t_end. Throws StepSizeError when the trace drifts
/// beyond trace_tol or a0 turns negative beyond -1e-9.
DensityMatrix evolve(const DensityMatrix& rho0, const DriveConfig& drive,
                     const Liouvillian& liouville, double t_end,
                     const IntegratorOptions& opts = {});

/// Evolves from `init` (ground state by default) until the residual drops
/// under tol * ||rho||. Uses a contraction-oriented step (the RK4 fixed
/// point of this linear system is the exact steady state). Warns to stderr
/// when the slowest mode implies equilibration beyond 1e5/Gamma.
DensityMatrix steady_state(const DriveConfig& drive,
                           const Liouvillian& liouville,
                           const IntegratorOptions& opts = {},
                           const DensityMatrix* init = nullptr);

/// Intensity <sigma^+ sigma^-> of a single-mode/direction detector,
/// including the double-manifold contribution.
double intensity(const DensityMatrix& rho, const DetectionOperator& det,
                 const PairCodec& codec);

/// Free-space intensity sum_ij D_ij <sigma^+_j sigma^-_i>, D = 2 Re{G}.
double intensity_free_space(const DensityMatrix& rho, const Liouvillian& lv);

struct ProjectedState {
  DensityMatrix state;  // normalized: trace 1, double manifold empty
  double rate;          // <sigma^+ sigma^-> before normalization
};

/// rho' = sigma^- rho sigma^+ / <sigma^+ sigma^->. Free-space detectors are
/// rejected (no single-mode conditional state exists for them).
ProjectedState project_photon(const DensityMatrix& rho,
                              const DetectionOperator& det,
                              const PairCodec& codec);

/// g2(tau) on a tau grid: steady state, one projected jump through
/// det_first, re-evolution, normalized by the steady-state intensity of
/// det_second.
std::vector<double> g2_tau(const DriveConfig& drive, const Liouvillian& lv,
                           const DetectionOperator& det_first,
                           const DetectionOperator& det_second,
                           const std::vector<double>& tau_grid,
                           const IntegratorOptions& opts = {},
                           const DensityMatrix* steady = nullptr);

/// g2(0) for a coefficient detector evaluated directly on a state.
double g2_zero_mode(const DensityMatrix& rho, const DetectionOperator& det,
                    const PairCodec& codec);

/// g2(0) with detection over all of free space:
///   sum D_ij D_i'j' <s+_j s+_j' s-_i' s-_i> / [sum D_ij <s+_j s-_i>]^2.
double g2_zero_freespace(const DensityMatrix& rho_ss, const Liouvillian& lv);

}  // namespace dipoles

#endif  // DIPOLES_MASTER_HPP

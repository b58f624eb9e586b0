#ifndef DIPOLES_ANALYTIC_HPP
#define DIPOLES_ANALYTIC_HPP

#include "dipoles/geometry.hpp"
#include "dipoles/master.hpp"
#include "dipoles/modes.hpp"
#include "dipoles/overlap.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

/// Leading-order steady state in the eigenmode basis. The ladder closure
///   rho1 = v v^dag / a0,  s_{j mu} = w_mu v*_j / a0,  rho2 = w w^dag / a0
/// holds by construction.
struct AnalyticSteadyState {
  double a0 = 1.0;
  CVector v, w;              // site / pair basis
  CVector v_tilde, w_tilde;  // eigenmode basis

  DensityMatrix to_density_matrix() const;
  /// Summed eigenmode populations sum_a |v_tilde_a|^2; for two interfering
  /// drive modes this is independent of their relative phase.
  double mode_population_sum() const { return v_tilde.squaredNorm(); }
};

/// Steady state from the mode decomposition:
///   vt_a = -i a0 (sum_j (Omega_j/2) V_{j a}) / (G_a - i delta)
///   wt_b = -i a0 (sum_mu (Omega_m1 v_m2 + Omega_m2 v_m1)/2 W_{mu b})
///            / (G2_b - 2 i delta)
/// a0 fixed by Tr[rho] = 1 under the factorization closure. Throws
/// ResonanceSingularityError when a denominator vanishes.
AnalyticSteadyState analytic_steady_state(const DriveConfig& drive,
                                          const SingleModeSet& singles,
                                          const DoubleModeSet& doubles,
                                          const PairCodec& codec);

/// Closed form for drive and detection in the same eigenmode alpha at
/// delta = Delta_alpha:
///   g2(0) = gamma_a^2 | sum_b X_{ab}^2 / (g2_b + 2i (D2_b - 2 D_a)) |^2.
double g2_zero_single_mode(int alpha, const SingleModeSet& singles,
                           const DoubleModeSet& doubles, const CMatrix& X);

/// Two interfering drive modes (alpha detected, alpha_tilde admixed with
/// relative amplitude A and phase phi), delta = Delta_alpha:
///   g2(0) = gamma_a^2 | sum_b X_{ab} / (g2_b + 2i (D2_b - 2 D_a))
///           * (X_{ab} + e^{2i phi} eta A^2 X_{atb}
///              + e^{i phi} (1 + eta) A L_{a at b}) |^2,
///   eta   = gamma_a / (gamma_at + 2i (D_at - D_a)).
double g2_zero_two_mode(int alpha, int alpha_tilde, double rel_amplitude,
                        double rel_phase, const SingleModeSet& singles,
                        const DoubleModeSet& doubles, const CMatrix& X,
                        const PairCodec& codec);

}  // namespace dipoles

#endif  // DIPOLES_ANALYTIC_HPP

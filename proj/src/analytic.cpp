#include "dipoles/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "dipoles/errors.hpp"

namespace dipoles {

namespace {
constexpr double kDenomFloor = 1e-14;
}

DensityMatrix AnalyticSteadyState::to_density_matrix() const {
  const int n = static_cast<int>(v.size());
  DensityMatrix rho = DensityMatrix::zero(n);
  rho.a0 = a0;
  rho.v = v;
  rho.w = w;
  rho.rho1 = v * v.adjoint() / a0;
  rho.s = v.conjugate() * w.transpose() / a0;  // s(j, mu) = w_mu v*_j / a0
  rho.rho2 = w * w.adjoint() / a0;
  return rho;
}

AnalyticSteadyState analytic_steady_state(const DriveConfig& drive,
                                          const SingleModeSet& singles,
                                          const DoubleModeSet& doubles,
                                          const PairCodec& codec) {
  const int n = singles.count();
  const int m = doubles.count();
  if (drive.omega.size() != n) {
    throw std::invalid_argument("analytic_steady_state: drive size mismatch");
  }

  // Single manifold, computed at a0 = 1 and rescaled at the end.
  const CVector proj = singles.V.transpose() * (0.5 * drive.omega);
  CVector vt_hat(n);
  for (int a = 0; a < n; ++a) {
    const Complex denom = singles.gvals(a) - kI * drive.delta;
    if (std::abs(denom) < kDenomFloor) {
      throw ResonanceSingularityError(
          a, "analytic_steady_state: drive resonant with dark mode " +
                 std::to_string(a));
    }
    vt_hat(a) = -kI * proj(a) / denom;
  }
  const CVector v_hat = singles.V * vt_hat;

  // Double manifold from the pair-symmetrized drive-amplitude product.
  CVector wt_hat = CVector::Zero(m);
  CVector w_hat = CVector::Zero(m);
  if (m > 0) {
    const CMatrix T = drive_raising_matrix(drive.omega, codec);
    const CVector tv = T * v_hat;  // (Omega_m1 v_m2 + Omega_m2 v_m1) / 2
    const CVector wproj = doubles.W.transpose() * tv;
    for (int b = 0; b < m; ++b) {
      const Complex denom = doubles.gvals(b) - 2.0 * kI * drive.delta;
      if (std::abs(denom) < kDenomFloor) {
        throw ResonanceSingularityError(
            b, "analytic_steady_state: drive resonant with dark double mode " +
                   std::to_string(b));
      }
      wt_hat(b) = -kI * wproj(b) / denom;
    }
    w_hat = doubles.W * wt_hat;
  }

  // Tr[rho] = 1 under the factorization closure; every block scales with a0.
  AnalyticSteadyState out;
  out.a0 = 1.0 / (1.0 + v_hat.squaredNorm() + w_hat.squaredNorm());
  out.v = out.a0 * v_hat;
  out.w = out.a0 * w_hat;
  out.v_tilde = out.a0 * vt_hat;
  out.w_tilde = out.a0 * wt_hat;
  return out;
}

double g2_zero_single_mode(int alpha, const SingleModeSet& singles,
                           const DoubleModeSet& doubles, const CMatrix& X) {
  if (alpha < 0 || alpha >= singles.count()) {
    throw std::invalid_argument("g2_zero_single_mode: bad mode index");
  }
  const double ga = singles.gamma(alpha);
  const double da = singles.delta(alpha);
  Complex sum(0.0, 0.0);
  for (int b = 0; b < doubles.count(); ++b) {
    const Complex xab = X(alpha, b);
    const Complex denom(doubles.gamma2(b),
                        2.0 * (doubles.delta2(b) - 2.0 * da));
    sum += xab * xab / denom;
  }
  return ga * ga * std::norm(sum);
}

double g2_zero_two_mode(int alpha, int alpha_tilde, double rel_amplitude,
                        double rel_phase, const SingleModeSet& singles,
                        const DoubleModeSet& doubles, const CMatrix& X,
                        const PairCodec& codec) {
  if (alpha == alpha_tilde) {
    throw std::invalid_argument("g2_zero_two_mode: modes must differ");
  }
  if (alpha < 0 || alpha >= singles.count() || alpha_tilde < 0 ||
      alpha_tilde >= singles.count()) {
    throw std::invalid_argument("g2_zero_two_mode: bad mode index");
  }
  if (rel_amplitude < 0.0) {
    throw std::invalid_argument("g2_zero_two_mode: A < 0");
  }
  const double ga = singles.gamma(alpha);
  const double da = singles.delta(alpha);
  const Complex eta =
      ga / Complex(singles.gamma(alpha_tilde),
                   2.0 * (singles.delta(alpha_tilde) - da));
  const Complex e1 = std::exp(kI * rel_phase);
  const Complex e2 = std::exp(2.0 * kI * rel_phase);
  const double a2 = rel_amplitude * rel_amplitude;

  const CVector q = pair_product_vector(alpha, alpha_tilde, singles, codec);
  const CVector l_all = (q.transpose() * doubles.W).transpose();

  Complex sum(0.0, 0.0);
  for (int b = 0; b < doubles.count(); ++b) {
    const Complex denom(doubles.gamma2(b),
                        2.0 * (doubles.delta2(b) - 2.0 * da));
    const Complex bracket = X(alpha, b) + e2 * eta * a2 * X(alpha_tilde, b) +
                            e1 * (1.0 + eta) * rel_amplitude * l_all(b);
    sum += X(alpha, b) / denom * bracket;
  }
  return ga * ga * std::norm(sum);
}

}  // namespace dipoles

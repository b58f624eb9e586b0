#ifndef DIPOLES_MODES_HPP
#define DIPOLES_MODES_HPP

#include "dipoles/geometry.hpp"
#include "dipoles/greens.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

struct BilinearEigenOptions {
  // Eigenvalues closer than cluster_tol * ||M|| are treated as degenerate
  // and re-orthogonalized under the unconjugated inner product.
  double cluster_tol = 1e-10;
  // |v^T v| below this (for a unit Hermitian-norm vector) means the mode
  // is quasi-isotropic and the decomposition is defective.
  double isotropy_tol = 1e-12;
};

struct BilinearEigen {
  CMatrix vectors;  // column k = mode k, normalized to v^T v = 1
  CVector values;   // sorted by ascending Re(2*lambda)
};

/// Eigendecomposition of a complex symmetric matrix with the bilinear
/// (unconjugated) normalization V^T V = I. Degenerate clusters are handled
/// by unconjugated Gram-Schmidt; throws DefectiveModeError when a mode has
/// vanishing bilinear norm. Column signs are fixed so the largest-modulus
/// entry has positive real part (deterministic across runs).
BilinearEigen diagonalize_bilinear(const CMatrix& m,
                                   const BilinearEigenOptions& opts = {});

/// Single-excitation eigenmodes of G: G V_a = (gamma_a/2 + i Delta_a) V_a,
/// ordered by ascending decay rate gamma.
struct SingleModeSet {
  CMatrix V;       // N x N, column per mode
  CVector gvals;   // eigenvalues gamma/2 + i*Delta
  RVector gamma;   // decay rates, units Gamma
  RVector delta;   // collective shifts, units Gamma

  int count() const { return static_cast<int>(gamma.size()); }
};

/// Double-excitation eigenmodes of Gtilde plus per-mode second-photon
/// rates zeta.
struct DoubleModeSet {
  CMatrix W;       // M x M
  CVector gvals;
  RVector gamma2;  // first-photon decay rates
  RVector delta2;
  RVector zeta;    // second-photon rates

  int count() const { return static_cast<int>(gamma2.size()); }
};

SingleModeSet make_single_modes(const CMatrix& G,
                                const BilinearEigenOptions& opts = {});

DoubleModeSet make_double_modes(const CMatrix& Gtilde, const CMatrix& G,
                                const PairCodec& codec,
                                const BilinearEigenOptions& opts = {});

/// Mean emission rate of the second photon once double mode beta has
/// emitted its first one:
///   zeta = 4 Tr[R Y R Y^dagger] / (gamma2_beta * sum_mu |W_mu|^2),
/// R = Re(G), Y_{ij} = W_{pair(i,j)} (zero diagonal).
double second_photon_rate(int beta, const DoubleModeSet& doubles,
                          const CMatrix& G, const PairCodec& codec);

/// CSV export: "index,gamma,delta[,zeta][,re_0,im_0,...]".
void export_modes_csv(const SingleModeSet& modes, const std::string& path,
                      bool amplitudes = false);
void export_modes_csv(const DoubleModeSet& modes, const std::string& path,
                      bool amplitudes = false);

}  // namespace dipoles

#endif  // DIPOLES_MODES_HPP

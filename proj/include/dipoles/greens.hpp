#ifndef DIPOLES_GREENS_HPP
#define DIPOLES_GREENS_HPP

#include <string>

#include "dipoles/geometry.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

/// Free-space dyadic Green's kernel projected on the dipole orientation,
///   g(r) = (Gamma/2) [ h0(kr) + (3 |r_hat . q_hat|^2 - 1)/2 * h2(kr) ]
/// with outgoing spherical Hankel functions
///   h0(x) = -i e^{ix}/x,   h2(x) = e^{ix} (i/x - 3/x^2 - 3i/x^3).
/// Throws std::domain_error at r = 0; the i = j redefinition (real part
/// only, equal to Gamma/2) is applied by the matrix builders instead.
Complex greens_kernel(const Vec3& r_vec, const CVec3& q_hat);

/// G_ij = g(r_i - r_j) off the diagonal, Gamma/2 on it. Complex symmetric.
CMatrix build_G(const AtomArray& array);

/// Double-manifold matrix over pair states mu = (m1, m2), nu = (n1, n2):
/// Gamma on the diagonal, g between the two non-shared atoms when the
/// pairs share exactly one atom, zero otherwise. Complex symmetric.
CMatrix build_Gtilde(const AtomArray& array, const PairCodec& codec);

struct GreensMatrices {
  CMatrix G;       // N x N
  CMatrix Gtilde;  // M x M, M = N(N-1)/2 (0 x 0 when N = 1)

  static GreensMatrices build(const AtomArray& array, const PairCodec& codec);
};

/// CSV dump "row,col,re,im" for cross-validation with external tools.
void dump_matrix_csv(const CMatrix& m, const std::string& path);

}  // namespace dipoles

#endif  // DIPOLES_GREENS_HPP

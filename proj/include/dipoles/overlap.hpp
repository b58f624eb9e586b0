#ifndef DIPOLES_OVERLAP_HPP
#define DIPOLES_OVERLAP_HPP

#include "dipoles/geometry.hpp"
#include "dipoles/modes.hpp"
#include "dipoles/types.hpp"

namespace dipoles {

/// L_{a1 a2 b} = sum_mu (V_{m1 a1} V_{m2 a2} + V_{m1 a2} V_{m2 a1}) W_{mu b}.
/// Purely bilinear: no conjugation anywhere. Symmetric in (a1, a2).
Complex overlap_L(int alpha1, int alpha2, int beta,
                  const SingleModeSet& singles, const DoubleModeSet& doubles,
                  const PairCodec& codec);

/// X_{a b} = L_{a a b} = sum_mu 2 V_{m1 a} V_{m2 a} W_{mu b}.
Complex overlap_X(int alpha, int beta, const SingleModeSet& singles,
                  const DoubleModeSet& doubles, const PairCodec& codec);

/// Pair-symmetrized product of two single modes as an M-vector:
/// q_mu = V_{m1 a1} V_{m2 a2} + V_{m1 a2} V_{m2 a1}.
CVector pair_product_vector(int alpha1, int alpha2,
                            const SingleModeSet& singles,
                            const PairCodec& codec);

/// Eagerly computed X table (N x M); L entries are computed on demand.
struct OverlapTables {
  CMatrix X;  // X(alpha, beta)

  static OverlapTables build(const SingleModeSet& singles,
                             const DoubleModeSet& doubles,
                             const PairCodec& codec);
};

}  // namespace dipoles

#endif  // DIPOLES_OVERLAP_HPP

#include "dipoles/overlap.hpp"

#include <stdexcept>

namespace dipoles {

CVector pair_product_vector(int alpha1, int alpha2,
                            const SingleModeSet& singles,
                            const PairCodec& codec) {
  const int n = singles.count();
  if (alpha1 < 0 || alpha1 >= n || alpha2 < 0 || alpha2 >= n) {
    throw std::invalid_argument("pair_product_vector: bad mode index");
  }
  const int m = codec.pair_count();
  CVector q(m);
  const auto v1 = singles.V.col(alpha1);
  const auto v2 = singles.V.col(alpha2);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    q(mu) = v1(m1) * v2(m2) + v2(m1) * v1(m2);
  }
  return q;
}

Complex overlap_L(int alpha1, int alpha2, int beta,
                  const SingleModeSet& singles, const DoubleModeSet& doubles,
                  const PairCodec& codec) {
  if (doubles.count() == 0) {
    throw std::invalid_argument("overlap_L: no double-excitation manifold");
  }
  if (beta < 0 || beta >= doubles.count()) {
    throw std::invalid_argument("overlap_L: bad double-mode index");
  }
  const CVector q = pair_product_vector(alpha1, alpha2, singles, codec);
  return q.transpose() * doubles.W.col(beta);
}

Complex overlap_X(int alpha, int beta, const SingleModeSet& singles,
                  const DoubleModeSet& doubles, const PairCodec& codec) {
  return overlap_L(alpha, alpha, beta, singles, doubles, codec);
}

OverlapTables OverlapTables::build(const SingleModeSet& singles,
                                   const DoubleModeSet& doubles,
                                   const PairCodec& codec) {
  const int n = singles.count();
  const int m = doubles.count();
  OverlapTables out;
  out.X.resize(n, m);
  for (int alpha = 0; alpha < n; ++alpha) {
    const CVector q = pair_product_vector(alpha, alpha, singles, codec);
    out.X.row(alpha) = (q.transpose() * doubles.W).row(0);
  }
  return out;
}

}  // namespace dipoles

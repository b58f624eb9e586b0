#ifndef TESTS_SUPPORT_TEST_HELPERS_HPP
#define TESTS_SUPPORT_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "dipoles/geometry.hpp"
#include "dipoles/master.hpp"
#include "dipoles/types.hpp"

namespace testutil {

using dipoles::AtomArray;
using dipoles::CMatrix;
using dipoles::Complex;
using dipoles::CVector;
using dipoles::DensityMatrix;
using dipoles::Vec3;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline Complex rand_complex(std::mt19937_64& gen, double scale = 1.0) {
  return scale * Complex(uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0));
}

// Random positions with min pairwise distance >= d_min (units of lambda),
// drawn in a cube sized to keep the acceptance probability high.
inline AtomArray random_array(uint64_t seed, int n, double d_min) {
  auto gen = rng(seed);
  const double box = d_min * (1.0 + 1.2 * std::cbrt(static_cast<double>(n)));
  std::vector<Vec3> pos;
  int guard = 0;
  while (static_cast<int>(pos.size()) < n) {
    if (++guard > 100000) throw std::runtime_error("random_array: stuck");
    Vec3 p(uniform(gen, 0.0, box), uniform(gen, 0.0, box),
           uniform(gen, 0.0, box));
    bool ok = true;
    for (const auto& q : pos) {
      if ((p - q).norm() < d_min) { ok = false; break; }
    }
    if (ok) pos.push_back(p);
  }
  return AtomArray(std::move(pos), dipoles::CVec3(0.0, 0.0, 1.0));
}

inline CMatrix random_hermitian(std::mt19937_64& gen, int n, double scale) {
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rand_complex(gen, scale);
  return 0.5 * (a + a.adjoint()).eval();
}

inline CMatrix random_complex_symmetric(std::mt19937_64& gen, int n,
                                        double scale = 1.0) {
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rand_complex(gen, scale);
  return 0.5 * (a + a.transpose()).eval();
}

// Random physical-looking truncated state: Hermitian diagonal blocks,
// arbitrary coherences, trace 1. Magnitudes mimic a weakly driven system.
inline DensityMatrix random_state(std::mt19937_64& gen, int n,
                                  double amp = 0.1) {
  DensityMatrix rho = DensityMatrix::zero(n);
  const int m = rho.n_pairs();
  for (int j = 0; j < n; ++j) rho.v(j) = rand_complex(gen, amp);
  for (int mu = 0; mu < m; ++mu) rho.w(mu) = rand_complex(gen, amp * amp);
  rho.rho1 = random_hermitian(gen, n, amp * amp);
  rho.rho1 += (amp * amp * static_cast<double>(n)) * CMatrix::Identity(n, n);
  for (int j = 0; j < n; ++j)
    for (int mu = 0; mu < m; ++mu)
      rho.s(j, mu) = rand_complex(gen, amp * amp * amp);
  if (m > 0) {
    rho.rho2 = random_hermitian(gen, m, amp * amp * amp * amp);
    rho.rho2 +=
        (amp * amp * amp * amp * static_cast<double>(m)) *
        CMatrix::Identity(m, m);
  }
  rho.a0 = 1.0 - rho.rho1.trace().real() - rho.rho2.trace().real();
  return rho;
}

}  // namespace testutil

#endif  // TESTS_SUPPORT_TEST_HELPERS_HPP

#ifndef TESTS_SUPPORT_BRUTE_FORCE_HPP
#define TESTS_SUPPORT_BRUTE_FORCE_HPP

#include <vector>

#include "dipoles/geometry.hpp"
#include "dipoles/master.hpp"
#include "dipoles/types.hpp"

namespace oracle {

using dipoles::AtomArray;
using dipoles::CMatrix;
using dipoles::Complex;
using dipoles::CVector;
using dipoles::DensityMatrix;
using dipoles::DriveConfig;
using dipoles::PairCodec;
using dipoles::RMatrix;

// Reference Lindblad model over the full 2^N-dimensional Hilbert space.
// Everything here works with dense operators built from Kronecker products;
// no manifold truncation, no pair bookkeeping. Intended for N <= 5.
class FullLindblad {
 public:
  FullLindblad(const AtomArray& array, const DriveConfig& drive);

  int n_atoms() const { return n_; }
  int dim() const { return dim_; }

  CMatrix rhs(const CMatrix& rho) const;
  CMatrix evolve(CMatrix rho, double t_end, double dt) const;
  // Unique null vector of the vectorized generator, trace-normalized.
  CMatrix steady_state() const;

  CMatrix lowering(const CVector& c) const;  // sum_j c_j sigma^-_j
  double intensity(const CMatrix& rho, const CVector& c) const;
  double intensity_freespace(const CMatrix& rho) const;
  double g2_zero(const CMatrix& rho, const CVector& c) const;
  double g2_zero_freespace(const CMatrix& rho) const;

  CMatrix ground() const;
  // |ee_{m1 m2}> <ee| for the doubly excited pure state of two atoms.
  CMatrix doubly_excited(int m1, int m2) const;

  // Map between the full-space density matrix and the block representation.
  DensityMatrix blocks(const CMatrix& rho, const PairCodec& codec) const;
  CMatrix embed(const DensityMatrix& rho, const PairCodec& codec) const;

  const CMatrix& sm(int j) const { return sm_[j]; }
  const CMatrix& sp(int j) const { return sp_[j]; }
  const RMatrix& re_g() const { return re_g_; }

 private:
  int n_, dim_;
  std::vector<CMatrix> sm_, sp_;
  CMatrix h_;      // laser + dipole-exchange Hamiltonian
  RMatrix re_g_;   // dissipation kernel Re{g(r_ij)}
};

}  // namespace oracle

#endif  // TESTS_SUPPORT_BRUTE_FORCE_HPP

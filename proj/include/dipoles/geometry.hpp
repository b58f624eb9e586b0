#ifndef DIPOLES_GEOMETRY_HPP
#define DIPOLES_GEOMETRY_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dipoles/types.hpp"

namespace dipoles {

enum class LatticeKind { kLine, kSquare, kCustom };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::kCustom;
  double spacing = 0.0;  // in lambda
  int count1 = 0;        // atoms along first axis
  int count2 = 0;        // atoms along second axis (square only)
};

/// Collection of point dipoles: positions (units of lambda) and a common
/// complex unit dipole orientation. Immutable after construction; safe to
/// share across threads.
class AtomArray {
 public:
  AtomArray(std::vector<Vec3> positions, CVec3 dipole,
            LatticeSpec spec = LatticeSpec{});

  int size() const { return static_cast<int>(positions_.size()); }
  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(int j) const { return positions_.at(j); }
  const CVec3& dipole() const { return dipole_; }
  const LatticeSpec& lattice() const { return lattice_; }

  double min_pair_distance() const;
  double max_pair_distance() const;

 private:
  std::vector<Vec3> positions_;
  CVec3 dipole_;
  LatticeSpec lattice_;
};

/// n_side x n_side grid in the XZ plane, spacing d, dipoles along z.
AtomArray build_square_array(int n_side, double d);

/// n atoms along the x axis, spacing d, dipoles along z.
AtomArray build_line_array(int n, double d);

/// Reads {"positions": [[x,y,z],...], "dipole": [qx_re,qx_im,...]} (6 reals).
AtomArray load_array_json(const std::string& path);

/// Lexicographic codec between ordered pairs (m1 < m2) and the flat
/// double-excitation index mu in [0, N(N-1)/2).
class PairCodec {
 public:
  explicit PairCodec(int n_atoms);

  int n_atoms() const { return n_; }
  int pair_count() const { return n_ * (n_ - 1) / 2; }

  int index(int m1, int m2) const;                 // requires m1 < m2
  int index_unordered(int a, int b) const;         // requires a != b
  std::pair<int, int> atoms(int mu) const;         // inverse of index
  int first(int mu) const { return first_[mu]; }
  int second(int mu) const { return second_[mu]; }

  /// Partner of atom `a` in pair `mu`; `a` must belong to the pair.
  int partner(int mu, int a) const;

 private:
  int n_;
  Eigen::MatrixXi table_;            // (m1, m2) -> mu, -1 on diagonal
  std::vector<int> first_, second_;  // mu -> (m1, m2)
};

}  // namespace dipoles

#endif  // DIPOLES_GEOMETRY_HPP

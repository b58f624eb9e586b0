#include "dipoles/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dipoles {

namespace {
constexpr double kMinSeparation = 1e-9;  // g(r) diverges as r -> 0
constexpr double kDipoleNormTol = 1e-12;
}  // namespace

AtomArray::AtomArray(std::vector<Vec3> positions, CVec3 dipole,
                     LatticeSpec spec)
    : positions_(std::move(positions)), dipole_(std::move(dipole)),
      lattice_(spec) {
  const int n = static_cast<int>(positions_.size());
  if (n < 1) throw std::invalid_argument("AtomArray: need at least one atom");
  const double qq = std::abs(dipole_.squaredNorm() - 1.0);
  if (qq > kDipoleNormTol) {
    throw std::invalid_argument("AtomArray: dipole orientation not unit norm");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions_[i] - positions_[j]).norm() < kMinSeparation) {
        throw std::invalid_argument("AtomArray: coincident atoms " +
                                    std::to_string(i) + ", " +
                                    std::to_string(j));
      }
    }
  }
}

double AtomArray::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  const int n = size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::min(best, (positions_[i] - positions_[j]).norm());
  return best;
}

double AtomArray::max_pair_distance() const {
  double best = 0.0;
  const int n = size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::max(best, (positions_[i] - positions_[j]).norm());
  return best;
}

AtomArray build_square_array(int n_side, double d) {
  if (n_side < 1) throw std::invalid_argument("build_square_array: n_side < 1");
  if (!(d > 0.0)) throw std::invalid_argument("build_square_array: d <= 0");
  std::vector<Vec3> pos;
  pos.reserve(static_cast<size_t>(n_side) * n_side);
  // XZ plane, dipoles along z
  for (int i = 0; i < n_side; ++i)
    for (int j = 0; j < n_side; ++j)
      pos.emplace_back(i * d, 0.0, j * d);
  LatticeSpec spec{LatticeKind::kSquare, d, n_side, n_side};
  return AtomArray(std::move(pos), CVec3(0.0, 0.0, 1.0), spec);
}

AtomArray build_line_array(int n, double d) {
  if (n < 1) throw std::invalid_argument("build_line_array: n < 1");
  if (!(d > 0.0)) throw std::invalid_argument("build_line_array: d <= 0");
  std::vector<Vec3> pos;
  pos.reserve(n);
  for (int i = 0; i < n; ++i) pos.emplace_back(i * d, 0.0, 0.0);
  LatticeSpec spec{LatticeKind::kLine, d, n, 1};
  return AtomArray(std::move(pos), CVec3(0.0, 0.0, 1.0), spec);
}

AtomArray load_array_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_array_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("positions") || !j["positions"].is_array()) {
    throw std::invalid_argument("load_array_json: missing positions array");
  }
  std::vector<Vec3> pos;
  for (const auto& p : j["positions"]) {
    if (!p.is_array() || p.size() != 3) {
      throw std::invalid_argument("load_array_json: position is not [x,y,z]");
    }
    pos.emplace_back(p[0].get<double>(), p[1].get<double>(),
                     p[2].get<double>());
  }
  CVec3 dipole(0.0, 0.0, 1.0);
  if (j.contains("dipole")) {
    const auto& q = j["dipole"];
    if (!q.is_array() || q.size() != 6) {
      throw std::invalid_argument(
          "load_array_json: dipole must be 6 reals [re,im x3]");
    }
    for (int k = 0; k < 3; ++k) {
      dipole(k) = Complex(q[2 * k].get<double>(), q[2 * k + 1].get<double>());
    }
  }
  return AtomArray(std::move(pos), dipole,
                   LatticeSpec{LatticeKind::kCustom, 0.0,
                               static_cast<int>(pos.size()), 1});
}

PairCodec::PairCodec(int n_atoms) : n_(n_atoms) {
  if (n_ < 1) throw std::invalid_argument("PairCodec: n_atoms < 1");
  const int m = pair_count();
  table_ = Eigen::MatrixXi::Constant(n_, n_, -1);
  first_.resize(m);
  second_.resize(m);
  int mu = 0;
  for (int m1 = 0; m1 < n_; ++m1) {
    for (int m2 = m1 + 1; m2 < n_; ++m2, ++mu) {
      table_(m1, m2) = mu;
      table_(m2, m1) = mu;
      first_[mu] = m1;
      second_[mu] = m2;
    }
  }
}

int PairCodec::index(int m1, int m2) const {
  if (m1 < 0 || m2 >= n_ || m1 >= m2) {
    throw std::invalid_argument("PairCodec::index: require 0 <= m1 < m2 < N");
  }
  return table_(m1, m2);
}

int PairCodec::index_unordered(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
    throw std::invalid_argument("PairCodec::index_unordered: bad atom pair");
  }
  return table_(a, b);
}

std::pair<int, int> PairCodec::atoms(int mu) const {
  if (mu < 0 || mu >= pair_count()) {
    throw std::invalid_argument("PairCodec::atoms: index out of range");
  }
  return {first_[mu], second_[mu]};
}

int PairCodec::partner(int mu, int a) const {
  const auto [m1, m2] = atoms(mu);
  if (a == m1) return m2;
  if (a == m2) return m1;
  throw std::invalid_argument("PairCodec::partner: atom not in pair");
}

}  // namespace dipoles

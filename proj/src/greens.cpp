#include "dipoles/greens.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dipoles {

Complex greens_kernel(const Vec3& r_vec, const CVec3& q_hat) {
  const double r = r_vec.norm();
  if (r <= 0.0) {
    throw std::domain_error("greens_kernel: r = 0 (use the i = j diagonal)");
  }
  const double x = kWaveNumber * r;
  const Vec3 r_hat = r_vec / r;
  // (r_hat . q)(r_hat . q*) = |r_hat . q|^2 for real r_hat
  const Complex rq = r_hat.x() * q_hat.x() + r_hat.y() * q_hat.y() +
                     r_hat.z() * q_hat.z();
  const double proj = std::norm(rq);

  const Complex eix = std::exp(kI * x);
  const Complex h0 = -kI * eix / x;
  const Complex h2 = eix * (kI / x - 3.0 / (x * x) - 3.0 * kI / (x * x * x));
  return 0.5 * kGamma * (h0 + 0.5 * (3.0 * proj - 1.0) * h2);
}

CMatrix build_G(const AtomArray& array) {
  const int n = array.size();
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = Complex(0.5 * kGamma, 0.0);
    for (int j = i + 1; j < n; ++j) {
      const Complex gij =
          greens_kernel(array.position(i) - array.position(j), array.dipole());
      g(i, j) = gij;
      g(j, i) = gij;
    }
  }
  return g;
}

CMatrix build_Gtilde(const AtomArray& array, const PairCodec& codec) {
  const int n = array.size();
  if (n < 2) throw std::invalid_argument("build_Gtilde: need N >= 2");
  if (codec.n_atoms() != n) {
    throw std::invalid_argument("build_Gtilde: codec size mismatch");
  }
  const CMatrix g = build_G(array);
  const int m = codec.pair_count();
  CMatrix gt = CMatrix::Zero(m, m);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    gt(mu, mu) = Complex(kGamma, 0.0);  // doubly excited: 2 * Re{g(0)}
    for (int nu = mu + 1; nu < m; ++nu) {
      const auto [n1, n2] = codec.atoms(nu);
      Complex val(0.0, 0.0);
      if (m1 == n1) val = g(m2, n2);
      else if (m2 == n2) val = g(m1, n1);
      else if (m2 == n1) val = g(m1, n2);
      else if (m1 == n2) val = g(m2, n1);
      // disjoint pairs stay zero
      gt(mu, nu) = val;
      gt(nu, mu) = val;
    }
  }
  return gt;
}

GreensMatrices GreensMatrices::build(const AtomArray& array,
                                     const PairCodec& codec) {
  GreensMatrices out;
  out.G = build_G(array);
  out.Gtilde = array.size() >= 2 ? build_Gtilde(array, codec) : CMatrix(0, 0);
  return out;
}

void dump_matrix_csv(const CMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_matrix_csv: cannot open " + path);
  out << "row,col,re,im\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag()
          << '\n';
    }
  }
}

}  // namespace dipoles

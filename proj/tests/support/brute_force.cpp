#include "support/brute_force.hpp"

#include <cmath>
#include <stdexcept>

#include "dipoles/greens.hpp"

namespace oracle {

using dipoles::greens_kernel;
using dipoles::kI;

FullLindblad::FullLindblad(const AtomArray& array, const DriveConfig& drive)
    : n_(array.size()), dim_(1 << array.size()) {
  if (n_ > 12) throw std::invalid_argument("FullLindblad: too many atoms");

  // sigma^-_j flips bit j; basis index = occupation bitmask, |g> = 0.
  sm_.resize(n_);
  sp_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (int b = 0; b < dim_; ++b) {
      if (b & (1 << j)) m(b & ~(1 << j), b) = 1.0;
    }
    sm_[j] = m;
    sp_[j] = m.adjoint();
  }

  re_g_.resize(n_, n_);
  CMatrix hdd = CMatrix::Zero(dim_, dim_);
  for (int i = 0; i < n_; ++i) {
    re_g_(i, i) = 0.5;  // Re g(0) = Gamma/2
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      const Complex g =
          greens_kernel(array.position(i) - array.position(j), array.dipole());
      re_g_(i, j) = g.real();
      hdd += g.imag() * (sp_[i] * sm_[j]);
    }
  }

  h_ = hdd;
  for (int j = 0; j < n_; ++j) {
    h_ += -drive.delta * (sp_[j] * sm_[j]) + 0.5 * drive.omega(j) * sp_[j] +
          0.5 * std::conj(drive.omega(j)) * sm_[j];
  }
}

CMatrix FullLindblad::rhs(const CMatrix& rho) const {
  CMatrix d = -kI * (h_ * rho - rho * h_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double r = re_g_(i, j);
      const CMatrix pij = sp_[i] * sm_[j];
      d += r * (2.0 * (sm_[i] * rho * sp_[j]) - pij * rho - rho * pij);
    }
  }
  return d;
}

CMatrix FullLindblad::evolve(CMatrix rho, double t_end, double dt) const {
  double t = 0.0;
  while (t < t_end - 1e-15 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - t);
    const CMatrix k1 = rhs(rho);
    const CMatrix k2 = rhs(rho + 0.5 * h * k1);
    const CMatrix k3 = rhs(rho + 0.5 * h * k2);
    const CMatrix k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return rho;
}

CMatrix FullLindblad::steady_state() const {
  const int d2 = dim_ * dim_;
  CMatrix gen(d2, d2);
  CMatrix basis = CMatrix::Zero(dim_, dim_);
  for (int col = 0; col < d2; ++col) {
    basis(col % dim_, col / dim_) = 1.0;
    const CMatrix out = rhs(basis);
    gen.col(col) = Eigen::Map<const CVector>(out.data(), d2);
    basis(col % dim_, col / dim_) = 0.0;
  }
  Eigen::JacobiSVD<CMatrix> svd(gen, Eigen::ComputeFullV);
  const CVector null_vec = svd.matrixV().col(d2 - 1);
  CMatrix rho = Eigen::Map<const CMatrix>(null_vec.data(), dim_, dim_);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-12) {
    throw std::runtime_error("FullLindblad::steady_state: traceless kernel");
  }
  rho /= tr;
  if (rhs(rho).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::runtime_error("FullLindblad::steady_state: residual too large");
  }
  return rho;
}

CMatrix FullLindblad::lowering(const CVector& c) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (int j = 0; j < n_; ++j) out += c(j) * sm_[j];
  return out;
}

double FullLindblad::intensity(const CMatrix& rho, const CVector& c) const {
  const CMatrix low = lowering(c);
  return (low * rho * low.adjoint()).trace().real();
}

double FullLindblad::intensity_freespace(const CMatrix& rho) const {
  double out = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      out += 2.0 * re_g_(i, j) * (sp_[j] * sm_[i] * rho).trace().real();
    }
  }
  return out;
}

double FullLindblad::g2_zero(const CMatrix& rho, const CVector& c) const {
  const CMatrix low = lowering(c);
  const CMatrix low2 = low * low;
  const double num = (low2 * rho * low2.adjoint()).trace().real();
  const double den = intensity(rho, c);
  return num / (den * den);
}

double FullLindblad::g2_zero_freespace(const CMatrix& rho) const {
  double num = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int ip = 0; ip < n_; ++ip)
        for (int jp = 0; jp < n_; ++jp) {
          const double kern = 4.0 * re_g_(i, j) * re_g_(ip, jp);
          num += kern * (sp_[j] * sp_[jp] * sm_[ip] * sm_[i] * rho)
                            .trace()
                            .real();
        }
  const double den = intensity_freespace(rho);
  return num / (den * den);
}

CMatrix FullLindblad::ground() const {
  CMatrix rho = CMatrix::Zero(dim_, dim_);
  rho(0, 0) = 1.0;
  return rho;
}

CMatrix FullLindblad::doubly_excited(int m1, int m2) const {
  const int b = (1 << m1) | (1 << m2);
  CMatrix rho = CMatrix::Zero(dim_, dim_);
  rho(b, b) = 1.0;
  return rho;
}

DensityMatrix FullLindblad::blocks(const CMatrix& rho,
                                   const PairCodec& codec) const {
  DensityMatrix out = DensityMatrix::zero(n_);
  const int m = codec.pair_count();
  out.a0 = rho(0, 0).real();
  for (int j = 0; j < n_; ++j) out.v(j) = rho(1 << j, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out.rho1(i, j) = rho(1 << i, 1 << j);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    const int bm = (1 << m1) | (1 << m2);
    out.w(mu) = rho(bm, 0);
    for (int j = 0; j < n_; ++j) out.s(j, mu) = rho(bm, 1 << j);
    for (int nu = 0; nu < m; ++nu) {
      const auto [n1, n2] = codec.atoms(nu);
      out.rho2(mu, nu) = rho(bm, (1 << n1) | (1 << n2));
    }
  }
  return out;
}

CMatrix FullLindblad::embed(const DensityMatrix& rho,
                            const PairCodec& codec) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  const int m = codec.pair_count();
  out(0, 0) = rho.a0;
  for (int j = 0; j < n_; ++j) {
    out(1 << j, 0) = rho.v(j);
    out(0, 1 << j) = std::conj(rho.v(j));
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out(1 << i, 1 << j) = rho.rho1(i, j);
  for (int mu = 0; mu < m; ++mu) {
    const auto [m1, m2] = codec.atoms(mu);
    const int bm = (1 << m1) | (1 << m2);
    out(bm, 0) = rho.w(mu);
    out(0, bm) = std::conj(rho.w(mu));
    for (int j = 0; j < n_; ++j) {
      out(bm, 1 << j) = rho.s(j, mu);
      out(1 << j, bm) = std::conj(rho.s(j, mu));
    }
    for (int nu = 0; nu < m; ++nu) {
      const auto [n1, n2] = codec.atoms(nu);
      out(bm, (1 << n1) | (1 << n2)) = rho.rho2(mu, nu);
    }
  }
  return out;
}

}  // namespace oracle

#include "dipoles/modes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "dipoles/errors.hpp"

namespace dipoles {

namespace {

// Bilinear normalization v / sqrt(v^T v); throws when the norm vanishes.
void bilinear_normalize(Eigen::Ref<CVector> v, int mode_index,
                        double isotropy_tol) {
  const Complex t = v.transpose() * v;  // unconjugated
  const double hnorm = v.squaredNorm();
  if (std::abs(t) < isotropy_tol * hnorm) {
    throw DefectiveModeError(
        mode_index, "diagonalize_bilinear: quasi-isotropic mode " +
                        std::to_string(mode_index) + ", |v^T v| = " +
                        std::to_string(std::abs(t)));
  }
  v /= std::sqrt(t);
}

// Deterministic sign: largest-modulus entry gets positive real part.
void canonical_sign(Eigen::Ref<CVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex lead = v(imax);
  const bool flip = lead.real() < 0.0 ||
                    (std::abs(lead.real()) <= 1e-14 * std::abs(lead) &&
                     lead.imag() < 0.0);
  if (flip) v = -v;
}

}  // namespace

BilinearEigen diagonalize_bilinear(const CMatrix& m,
                                   const BilinearEigenOptions& opts) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("diagonalize_bilinear: matrix not square");
  }
  const Eigen::Index n = m.rows();
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("diagonalize_bilinear: matrix not symmetric");
  }

  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("diagonalize_bilinear: eigensolver failed");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const CVector& raw_vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex la = raw_vals(a), lb = raw_vals(b);
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() < lb.imag();
  });

  BilinearEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = raw_vals(order[k]);
    out.vectors.col(k) = solver.eigenvectors().col(order[k]);
  }

  // Degenerate clusters (consecutive in the sorted order) lose automatic
  // bilinear orthogonality; re-orthogonalize with unconjugated Gram-Schmidt.
  const double cluster_eps = opts.cluster_tol * std::max(scale, 1.0);
  Eigen::Index k = 0;
  while (k < n) {
    Eigen::Index end = k + 1;
    while (end < n &&
           std::abs(out.values(end) - out.values(end - 1)) < cluster_eps) {
      ++end;
    }
    for (Eigen::Index a = k; a < end; ++a) {
      CVector u = out.vectors.col(a);
      for (Eigen::Index b = k; b < a; ++b) {
        const Complex proj = out.vectors.col(b).transpose() * u;
        u -= proj * out.vectors.col(b);
      }
      out.vectors.col(a) = u;
      bilinear_normalize(out.vectors.col(a), static_cast<int>(a),
                         opts.isotropy_tol);
    }
    k = end;
  }

  for (Eigen::Index a = 0; a < n; ++a) canonical_sign(out.vectors.col(a));
  return out;
}

SingleModeSet make_single_modes(const CMatrix& G,
                                const BilinearEigenOptions& opts) {
  BilinearEigen eig = diagonalize_bilinear(G, opts);
  SingleModeSet out;
  out.V = std::move(eig.vectors);
  out.gvals = std::move(eig.values);
  out.gamma = 2.0 * out.gvals.real();
  out.delta = out.gvals.imag();
  return out;
}

double second_photon_rate(int beta, const DoubleModeSet& doubles,
                          const CMatrix& G, const PairCodec& codec) {
  if (beta < 0 || beta >= doubles.count()) {
    throw std::invalid_argument("second_photon_rate: bad mode index");
  }
  const double gamma2 = doubles.gamma2(beta);
  if (!(gamma2 > 0.0)) {
    throw NumericalError("second_photon_rate: non-positive gamma for mode " +
                         std::to_string(beta));
  }
  const int n = codec.n_atoms();
  const RMatrix R = G.real();
  CMatrix Y = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Complex wij = doubles.W(codec.index(i, j), beta);
      Y(i, j) = wij;
      Y(j, i) = wij;
    }
  }
  const CMatrix Z = R * Y * R;
  const double num = 4.0 * (Z.cwiseProduct(Y.conjugate())).sum().real();
  const double wnorm = doubles.W.col(beta).squaredNorm();
  return num / (gamma2 * wnorm);
}

DoubleModeSet make_double_modes(const CMatrix& Gtilde, const CMatrix& G,
                                const PairCodec& codec,
                                const BilinearEigenOptions& opts) {
  BilinearEigen eig = diagonalize_bilinear(Gtilde, opts);
  DoubleModeSet out;
  out.W = std::move(eig.vectors);
  out.gvals = std::move(eig.values);
  out.gamma2 = 2.0 * out.gvals.real();
  out.delta2 = out.gvals.imag();
  out.zeta.resize(out.count());
  for (int beta = 0; beta < out.count(); ++beta) {
    out.zeta(beta) = second_photon_rate(beta, out, G, codec);
  }
  return out;
}

namespace {

void write_mode_table(std::ofstream& out, const CMatrix& vecs,
                      const RVector& gamma, const RVector& delta,
                      const RVector* zeta, bool amplitudes) {
  out << "index,gamma,delta";
  if (zeta) out << ",zeta";
  if (amplitudes) {
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      out << ",re_" << i << ",im_" << i;
    }
  }
  out << '\n';
  out.precision(17);
  for (Eigen::Index k = 0; k < gamma.size(); ++k) {
    out << k << ',' << gamma(k) << ',' << delta(k);
    if (zeta) out << ',' << (*zeta)(k);
    if (amplitudes) {
      for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
        out << ',' << vecs(i, k).real() << ',' << vecs(i, k).imag();
      }
    }
    out << '\n';
  }
}

}  // namespace

void export_modes_csv(const SingleModeSet& modes, const std::string& path,
                      bool amplitudes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_modes_csv: cannot open " + path);
  write_mode_table(out, modes.V, modes.gamma, modes.delta, nullptr,
                   amplitudes);
}

void export_modes_csv(const DoubleModeSet& modes, const std::string& path,
                      bool amplitudes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_modes_csv: cannot open " + path);
  write_mode_table(out, modes.W, modes.gamma2, modes.delta2, &modes.zeta,
                   amplitudes);
}

}  // namespace dipoles

#include <doctest.h>

#include <cmath>
#include <complex>

#include "dipoles/geometry.hpp"
#include "dipoles/greens.hpp"
#include "support/test_helpers.hpp"

using namespace dipoles;

namespace {

// Independent kernel evaluation in extended precision through the
// trigonometric forms of the spherical Bessel/Neumann functions:
//   h_l = j_l + i y_l.
std::complex<long double> hankel0_ref(long double x) {
  return {std::sin(x) / x, -std::cos(x) / x};
}

std::complex<long double> hankel2_ref(long double x) {
  const long double a = 3.0L / (x * x * x) - 1.0L / x;
  const long double j2 = a * std::sin(x) - 3.0L * std::cos(x) / (x * x);
  const long double y2 = -a * std::cos(x) - 3.0L * std::sin(x) / (x * x);
  return {j2, y2};
}

Complex kernel_ref(const Vec3& r_vec, const CVec3& q_hat) {
  const long double r = r_vec.norm();
  const long double x = 2.0L * std::acos(-1.0L) * r;
  const Vec3 rh = r_vec / static_cast<double>(r);
  const Complex rq = rh.x() * q_hat.x() + rh.y() * q_hat.y() +
                     rh.z() * q_hat.z();
  const long double proj = std::norm(rq);
  const std::complex<long double> val =
      0.5L * (hankel0_ref(x) +
              (3.0L * proj - 1.0L) / 2.0L * hankel2_ref(x));
  return {static_cast<double>(val.real()), static_cast<double>(val.imag())};
}

}  // namespace

TEST_CASE("kernel matches extended-precision reference") {
  const CVec3 qz(0, 0, 1);
  // transverse at kr = 2 pi
  CHECK(std::abs(greens_kernel(Vec3(1, 0, 0), qz) -
                 kernel_ref(Vec3(1, 0, 0), qz)) < 1e-14);
  // a scatter of distances and directions, linear and circular dipole
  const double s = 1.0 / std::sqrt(2.0);
  const CVec3 qcirc(Complex(s, 0), Complex(0, s), 0);
  auto gen = testutil::rng(11);
  for (int k = 0; k < 200; ++k) {
    Vec3 r(testutil::uniform(gen, -2, 2), testutil::uniform(gen, -2, 2),
           testutil::uniform(gen, -2, 2));
    if (r.norm() < 0.05) continue;
    for (const CVec3& q : {qz, qcirc}) {
      const Complex got = greens_kernel(r, q);
      const Complex want = kernel_ref(r, q);
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("kernel far field decays") {
  const CVec3 qz(0, 0, 1);
  // transverse: |g| ~ 1/(kr)
  const double a1 = std::abs(greens_kernel(Vec3(100.0, 0, 0), qz));
  const double a2 = std::abs(greens_kernel(Vec3(200.0, 0, 0), qz));
  CHECK(a2 / a1 == doctest::Approx(0.5).epsilon(0.02));
  // along the dipole axis the radiated field vanishes faster
  const double b1 = std::abs(greens_kernel(Vec3(0, 0, 100.0), qz));
  CHECK(b1 < 0.1 * a1);
  CHECK(std::abs(greens_kernel(Vec3(0, 0, 1e4), qz)) < 1e-7);
}

TEST_CASE("kernel real part approaches Gamma/2 at r -> 0") {
  // Taylor limit of Re{g}: finite and direction-independent at zero.
  const double r_small = 1e-3 / kWaveNumber;  // kr = 1e-3
  const CVec3 qz(0, 0, 1);
  for (const Vec3& dir :
       {Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized().eval()}) {
    const Complex g = greens_kernel(r_small * dir, qz);
    CHECK(std::abs(g.real() - 0.5) < 1e-4);
  }
}

TEST_CASE("kernel reciprocity g(r) = g(-r)") {
  auto gen = testutil::rng(12);
  const CVec3 qz(0, 0, 1);
  for (int k = 0; k < 50; ++k) {
    Vec3 r(testutil::uniform(gen, -1, 1), testutil::uniform(gen, -1, 1),
           testutil::uniform(gen, -1, 1));
    if (r.norm() < 0.05) continue;
    CHECK(greens_kernel(r, qz) == greens_kernel(-r, qz));
  }
}

TEST_CASE("kernel rejects r = 0") {
  CHECK_THROWS_AS(greens_kernel(Vec3(0, 0, 0), CVec3(0, 0, 1)),
                  std::domain_error);
}

TEST_CASE("G matrix: single atom and forced diagonal") {
  const CMatrix g1 = build_G(build_square_array(1, 0.4));
  REQUIRE(g1.rows() == 1);
  CHECK(g1(0, 0) == Complex(0.5, 0.0));

  const CMatrix g2 = build_G(build_line_array(2, 0.3));
  CHECK(g2.trace() == Complex(1.0, 0.0));  // diagonal forced to Gamma/2
  CHECK(g2(0, 1) == g2(1, 0));
}

TEST_CASE("G and Gtilde are complex symmetric with forced traces") {
  const AtomArray a = build_square_array(3, 0.45);
  const PairCodec codec(a.size());
  const CMatrix g = build_G(a);
  const CMatrix gt = build_Gtilde(a, codec);
  const int n = a.size(), m = codec.pair_count();

  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((gt - gt.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(g.trace() - Complex(0.5 * n, 0)) < 1e-12);
  CHECK(std::abs(gt.trace() - Complex(1.0 * m, 0)) < 1e-12);
}

TEST_CASE("Gtilde: two atoms give the 1x1 matrix [Gamma]") {
  const AtomArray a = build_line_array(2, 0.4);
  const CMatrix gt = build_Gtilde(a, PairCodec(2));
  REQUIRE(gt.rows() == 1);
  CHECK(gt(0, 0) == Complex(1.0, 0.0));
}

TEST_CASE("Gtilde: three atoms couple every pair of pairs") {
  const AtomArray a = build_line_array(3, 0.35);
  const CMatrix gt = build_Gtilde(a, PairCodec(3));
  REQUIRE(gt.rows() == 3);
  for (int mu = 0; mu < 3; ++mu) {
    CHECK(gt(mu, mu) == Complex(1.0, 0.0));
    for (int nu = 0; nu < 3; ++nu) {
      if (mu != nu) CHECK(std::abs(gt(mu, nu)) > 0.0);
    }
  }
}

TEST_CASE("Gtilde: four atoms have exactly the three disjoint-pair zeros") {
  const AtomArray a = build_square_array(2, 0.4);
  const PairCodec codec(4);
  const CMatrix gt = build_Gtilde(a, codec);
  int zeros = 0;
  for (int mu = 0; mu < 6; ++mu)
    for (int nu = mu + 1; nu < 6; ++nu)
      if (gt(mu, nu) == Complex(0.0, 0.0)) ++zeros;
  CHECK(zeros == 3);
  CHECK(gt(codec.index(0, 1), codec.index(2, 3)) == Complex(0.0, 0.0));
  CHECK(gt(codec.index(0, 2), codec.index(1, 3)) == Complex(0.0, 0.0));
  CHECK(gt(codec.index(0, 3), codec.index(1, 2)) == Complex(0.0, 0.0));
}

TEST_CASE("Gtilde matches the shared-atom case table exhaustively, N <= 8") {
  for (int n = 2; n <= 8; ++n) {
    const AtomArray a = testutil::random_array(100 + n, n, 0.3);
    const PairCodec codec(n);
    const CMatrix g = build_G(a);
    const CMatrix gt = build_Gtilde(a, codec);
    for (int mu = 0; mu < codec.pair_count(); ++mu) {
      const auto [m1, m2] = codec.atoms(mu);
      for (int nu = 0; nu < codec.pair_count(); ++nu) {
        const auto [n1, n2] = codec.atoms(nu);
        Complex want;
        if (mu == nu) {
          want = Complex(1.0, 0.0);
        } else if (m1 == n1) {
          want = g(m2, n2);
        } else if (m2 == n2) {
          want = g(m1, n1);
        } else if (m2 == n1) {
          want = g(m1, n2);
        } else if (m1 == n2) {
          want = g(m2, n1);
        } else {
          want = Complex(0.0, 0.0);
        }
        CHECK(gt(mu, nu) == want);
      }
    }
  }
}

TEST_CASE("Gtilde rejects N < 2") {
  CHECK_THROWS_AS(build_Gtilde(build_square_array(1, 0.4), PairCodec(1)),
                  std::invalid_argument);
}

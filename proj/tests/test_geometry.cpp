#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "dipoles/geometry.hpp"

using namespace dipoles;

TEST_CASE("square array: degenerate single-atom lattice") {
  const AtomArray a = build_square_array(1, 0.4);
  CHECK(a.size() == 1);
  CHECK(a.position(0).norm() == 0.0);
  CHECK(a.dipole()(2) == Complex(1.0, 0.0));
}

TEST_CASE("square array: 5x5 geometry arithmetic") {
  const AtomArray a = build_square_array(5, 0.4);
  CHECK(a.size() == 25);
  // corner-to-corner diagonal
  CHECK(a.max_pair_distance() == doctest::Approx(4 * 0.4 * std::sqrt(2.0)));
  // all atoms in the XZ plane
  for (const auto& p : a.positions()) CHECK(p.y() == 0.0);
}

TEST_CASE("square array: 2x2 spacing") {
  const AtomArray a = build_square_array(2, 0.3);
  CHECK(a.size() == 4);
  CHECK(a.min_pair_distance() == doctest::Approx(0.3));
}

TEST_CASE("square array rejects bad arguments") {
  CHECK_THROWS_AS(build_square_array(0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(build_square_array(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_square_array(3, -1.0), std::invalid_argument);
}

TEST_CASE("coincident atoms rejected") {
  std::vector<Vec3> pos = {{0, 0, 0}, {0, 0, 1e-12}};
  CHECK_THROWS_AS(AtomArray(pos, CVec3(0, 0, 1)), std::invalid_argument);
}

TEST_CASE("non-unit dipole rejected") {
  std::vector<Vec3> pos = {{0, 0, 0}};
  CHECK_THROWS_AS(AtomArray(pos, CVec3(0, 0, 2.0)), std::invalid_argument);
  // complex circular polarization with unit norm is fine
  const double s = 1.0 / std::sqrt(2.0);
  CHECK_NOTHROW(AtomArray(pos, CVec3(Complex(s, 0), Complex(0, s), 0)));
}

TEST_CASE("pair codec: examples at N=4") {
  PairCodec codec(4);
  CHECK(codec.pair_count() == 6);
  CHECK(codec.index(0, 1) == 0);
  CHECK(codec.index(2, 3) == 5);
  CHECK_THROWS_AS(codec.index(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(codec.index(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(codec.index(0, 4), std::invalid_argument);
}

TEST_CASE("pair codec: round trip at N=7") {
  PairCodec codec(7);
  for (int m1 = 0; m1 < 7; ++m1) {
    for (int m2 = m1 + 1; m2 < 7; ++m2) {
      const auto [a, b] = codec.atoms(codec.index(m1, m2));
      CHECK(a == m1);
      CHECK(b == m2);
    }
  }
}

TEST_CASE("pair codec: bijection for all N <= 30") {
  for (int n = 2; n <= 30; ++n) {
    PairCodec codec(n);
    std::set<int> seen;
    for (int m1 = 0; m1 < n; ++m1) {
      for (int m2 = m1 + 1; m2 < n; ++m2) {
        const int mu = codec.index(m1, m2);
        CHECK(mu >= 0);
        CHECK(mu < codec.pair_count());
        seen.insert(mu);
      }
    }
    CHECK(static_cast<int>(seen.size()) == codec.pair_count());
  }
}

TEST_CASE("pair codec: lexicographic order and partner lookup") {
  PairCodec codec(5);
  int expected = 0;
  for (int m1 = 0; m1 < 5; ++m1) {
    for (int m2 = m1 + 1; m2 < 5; ++m2) {
      CHECK(codec.index(m1, m2) == expected);
      CHECK(codec.partner(expected, m1) == m2);
      CHECK(codec.partner(expected, m2) == m1);
      ++expected;
    }
  }
}

TEST_CASE("deterministic construction") {
  const AtomArray a = build_square_array(4, 0.55);
  const AtomArray b = build_square_array(4, 0.55);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.position(i) == b.position(i));  // bit-identical
  }
}

TEST_CASE("array json round trip") {
  const char* path = "test_array.json";
  {
    std::ofstream out(path);
    out << R"({"positions": [[0,0,0],[0.5,0,0],[0,0,0.5]],)"
        << R"("dipole": [0,0,0,0,1,0]})";
  }
  const AtomArray a = load_array_json(path);
  CHECK(a.size() == 3);
  CHECK(a.position(1).x() == doctest::Approx(0.5));
  CHECK(a.dipole()(2) == Complex(1.0, 0.0));
  std::remove(path);
}

TEST_CASE("line array") {
  const AtomArray a = build_line_array(6, 0.7);
  CHECK(a.size() == 6);
  CHECK(a.max_pair_distance() == doctest::Approx(5 * 0.7));
}

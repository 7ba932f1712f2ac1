#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phasepairs/errors.hpp"
#include "phasepairs/lattice.hpp"

using namespace phasepairs;

namespace {

Mat hexagonal_shifts() {
  Mat b(2, 2);
  b << 5, 0, -5 / std::sqrt(3.0), 10 / std::sqrt(3.0);
  return b;
}

bool near(const Mat& a, const Mat& b, double tol = 1e-12) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("reciprocal of the examples") {
    CHECK(near(reciprocal(Lattice::scaled_integer(2, 8)).generator(), Mat::Identity(2, 2) / 8));
    CHECK(near(reciprocal(Lattice(Mat::Identity(3, 3))).generator(), Mat::Identity(3, 3)));
    Mat expected(2, 2);
    expected << 1, 0.5, 0, std::sqrt(3.0) / 2;
    CHECK(near(reciprocal(Lattice(hexagonal_shifts())).generator(), expected / 5));
  }

  TEST_CASE("density") {
    CHECK(density(Lattice::scaled_integer(2, 8)) == doctest::Approx(1.0 / 64).epsilon(1e-14));
    CHECK(density(Lattice(Mat::Identity(4, 4))) == doctest::Approx(1.0));
    CHECK(density(Lattice(hexagonal_shifts())) == doctest::Approx(std::sqrt(3.0) / 50).epsilon(1e-14));
  }

  TEST_CASE("singular generator is rejected") {
    Mat m(2, 2);
    m << 1, 2, 2, 4;
    CHECK_THROWS_AS(Lattice{m}, DomainError);
  }

  TEST_CASE("membership") {
    const Lattice eight = Lattice::scaled_integer(2, 8);
    CHECK(contains(eight, Vec{{8.0, 16.0}}));
    CHECK_FALSE(contains(eight, Vec{{1.0, 0.0}}));
    const Mat b = hexagonal_shifts();
    CHECK(contains(Lattice(b), Vec{{5.0, -5 / std::sqrt(3.0)}}));
  }

  TEST_CASE("enumeration") {
    const auto line = enumerate(Lattice(Mat::Identity(1, 1)), 1.5);
    REQUIRE(line.size() == 3);
    CHECK(line[0](0) == -1.0);
    CHECK(line[1](0) == 0.0);
    CHECK(line[2](0) == 1.0);
    CHECK(enumerate(Lattice::scaled_integer(2, 8), 0.5).size() == 1);
    CHECK(enumerate(Lattice::scaled_integer(2, 0.125), 0.130).size() == 5);
  }

  TEST_CASE("enumeration matches a brute-force scan") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const Lattice lat(oracle::random_invertible(rng, 2) * rng.uniform(0.5, 2.0));
      const double r = rng.uniform(1.0, 4.0);
      std::size_t brute = 0;
      for (int i = -40; i <= 40; ++i)
        for (int j = -40; j <= 40; ++j)
          if (lat.point({i, j}).norm() <= r) ++brute;
      CHECK(enumerate(lat, r).size() == brute);
    }
  }

  TEST_CASE("double reciprocal and integrality") {
    oracle::Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const Lattice lat(oracle::random_invertible(rng, 2));
      CHECK(same_lattice(reciprocal(reciprocal(lat)), lat));
      const Lattice dual = reciprocal(lat);
      for (const auto& p : enumerate(lat, 2.5))
        for (const auto& q : enumerate(dual, 2.5)) {
          const double dot = p.dot(q);
          CHECK(std::abs(dot - std::round(dot)) <= 1e-9);
        }
    }
  }

  TEST_CASE("symplectic checks") {
    CHECK(is_symplectic(standard_symplectic(1)));
    CHECK(is_symplectic(standard_symplectic(3)));
    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    CHECK(is_symplectic(shear));
    Mat stretch(2, 2);
    stretch << 2, 0, 0, 1;
    CHECK_FALSE(is_symplectic(stretch));
    CHECK_THROWS_AS(is_symplectic(Mat::Identity(3, 3)), DimensionError);
    CHECK_THROWS_AS(is_symplectic(Mat::Identity(2, 3)), DimensionError);
  }

  TEST_CASE("block criterion agrees with the definition") {
    oracle::Rng rng(13);
    int symplectic_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = 1 + trial % 3;
      Mat s = matrix(oracle::random_word(rng, d, 3));
      if (trial % 2) s += rng.mat(2 * d, 2 * d, -1e-3, 1e-3);
      const bool a = is_symplectic(s);
      CHECK(a == satisfies_block_criterion(s));
      symplectic_seen += a;
    }
    CHECK(symplectic_seen == 500);
  }

  TEST_CASE("sl2 normalisation") {
    const ScaledSymplectic a = sl2_normalize(2 * Mat::Identity(2, 2));
    CHECK(a.alpha == doctest::Approx(2.0));
    CHECK(near(a.s, Mat::Identity(2, 2)));

    Mat l(2, 2);
    l << 4, 0, 0, 1;
    const ScaledSymplectic b = sl2_normalize(l);
    CHECK(b.alpha == doctest::Approx(2.0));
    Mat expected(2, 2);
    expected << 2, 0, 0, 0.5;
    CHECK(near(b.s, expected));

    Mat flip(2, 2);
    flip << 1, 0, 0, -1;
    const ScaledSymplectic c = sl2_normalize(flip);
    CHECK(c.alpha == doctest::Approx(1.0));
    CHECK(same_lattice(Lattice(c.alpha * c.s), Lattice(flip)));
    CHECK(near(c.s, Mat::Identity(2, 2)));

    CHECK_THROWS(sl2_normalize(Mat::Zero(2, 2)));

    oracle::Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
      const Mat m = rng.mat(2, 2, -3, 3);
      if (std::abs(m.determinant()) < 0.1) continue;
      const ScaledSymplectic n = sl2_normalize(m);
      CHECK(std::abs(n.s.determinant() - 1) <= 1e-12);
      CHECK(same_lattice(Lattice(n.alpha * n.s), Lattice(m)));
    }
  }

  TEST_CASE("rational envelope") {
    const RationalMatrix diag{{{1, 2}, {0, 1}}, {{0, 1}, {1, 3}}};
    CHECK(near(rational_envelope(diag).generator(), to_matrix(diag)));

    const RationalMatrix l{{{1, 2}, {1, 3}}, {{0, 1}, {1, 5}}};
    const Lattice env = rational_envelope(l);
    Mat expected(2, 2);
    expected << 1.0 / 6, 0, 0, 1.0 / 5;
    CHECK(near(env.generator(), expected));
    const Mat lm = to_matrix(l);
    for (int i = -3; i <= 3; ++i)
      for (int j = -3; j <= 3; ++j) CHECK(contains(env, lm * Vec{{double(i), double(j)}}));

    const RationalMatrix id{{{1, 1}, {0, 1}}, {{0, 1}, {1, 1}}};
    CHECK(near(rational_envelope(id).generator(), Mat::Identity(2, 2)));

    const RationalMatrix bad{{{1, 0}, {0, 1}}, {{0, 1}, {1, 1}}};
    CHECK_THROWS(rational_envelope(bad));
  }

  TEST_CASE("fundamental domain grids") {
    const auto line = fundamental_domain_grid(Lattice(Mat::Identity(1, 1)), 4);
    REQUIRE(line.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(line[i](0) == doctest::Approx(0.25 * i));

    const auto square = fundamental_domain_grid(Lattice::scaled_integer(2, 8), 2);
    REQUIRE(square.size() == 4);
    std::vector<std::pair<double, double>> got;
    for (const auto& p : square) got.emplace_back(p(0), p(1));
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::pair<double, double>>{{0, 0}, {0, 4}, {4, 0}, {4, 4}});

    const auto one = fundamental_domain_grid(reciprocal(Lattice(hexagonal_shifts())), 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].norm() == 0.0);
  }

  TEST_CASE("classification") {
    Mat rect(2, 2);
    rect << 2, 0, 0, 3;
    CHECK(classify(Lattice(rect)).kind == LatticeClass::Kind::Rectangular);

    CHECK(classify(Lattice(standard_symplectic(1))).kind == LatticeClass::Kind::Rectangular);

    Mat unimodular(2, 2);
    unimodular << 2, 1, 1, 1;
    const LatticeClass j = classify(Lattice(unimodular));
    REQUIRE(j.kind == LatticeClass::Kind::Symplectic);
    CHECK(j.alpha == doctest::Approx(1.0));
    CHECK(near(j.alpha * j.symplectic, unimodular));

    const LatticeClass hex = classify(Lattice(hexagonal_shifts()));
    CHECK(hex.kind == LatticeClass::Kind::Symplectic);
    CHECK(is_symplectic(hex.symplectic));
    CHECK(same_lattice(Lattice(hex.alpha * hex.symplectic), Lattice(hexagonal_shifts())));

    Mat sep = Mat::Zero(4, 4);
    sep.block(0, 0, 2, 2) << 1, 0.5, 0, 1;
    sep.block(2, 2, 2, 2) << 0.5, 0, 0.25, 0.5;
    CHECK(classify(Lattice(sep)).kind == LatticeClass::Kind::Separable);

    Mat odd(3, 3);
    odd << 1, 0.3, 0, 0, 1, 0.2, 0.1, 0, 1;
    CHECK(classify(Lattice(odd)).kind == LatticeClass::Kind::General);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "symcal/rng.hpp"
#include "symcal/symplectic.hpp"

using namespace symcal;

namespace {

Matrix random_spd(std::size_t dim, Rng& rng, double lo = 0.3, double hi = 4.0) {
  Matrix a(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  std::vector<double> lam(dim);
  for (std::size_t i = 0; i < dim; ++i) lam[i] = rng.uniform(lo, hi);
  Matrix q = sym_eig(0.5 * (a + a.transpose())).vectors;
  return q * Matrix::diagonal(lam) * q.transpose();
}

Matrix random_invertible(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(dim);
  double det = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.uniform(-2.0, 2.0);
    det = determinant(m);
  } while (std::abs(det) < 0.1);
  return m;
}

}  // namespace

TEST_CASE("standard J") {
  Matrix j1 = standard_J(1);
  CHECK(j1(0, 0) == 0.0);
  CHECK(j1(0, 1) == 1.0);
  CHECK(j1(1, 0) == -1.0);
  CHECK(j1(1, 1) == 0.0);
  Matrix j2 = standard_J(2);
  CHECK((j2 * j2 + Matrix::identity(4)).frobenius() == 0.0);
  Matrix j3 = standard_J(3);
  CHECK((j3.transpose() + j3).frobenius() == 0.0);
}

TEST_CASE("classify") {
  SECTION("J is symplectic") { CHECK(classify(standard_J(2)).tag == MapTag::Symplectic); }
  SECTION("C is antisymplectic") { CHECK(classify(reflection_C(2)).tag == MapTag::Antisymplectic); }
  SECTION("diag(2,1) is neither, M^T J M = 2J") {
    MapClass c = classify(Matrix::diagonal({2.0, 1.0}));
    CHECK(c.tag == MapTag::Neither);
    // residuals ||2J - J|| and ||2J + J||
    CHECK(c.residual_symplectic == Catch::Approx(std::sqrt(2.0)));
    CHECK(c.residual_antisymplectic == Catch::Approx(3.0 * std::sqrt(2.0)));
  }
  SECTION("odd dimension rejected") { CHECK_THROWS_AS(classify(Matrix::identity(3)), std::invalid_argument); }
}

TEST_CASE("symplectic eigenvalues") {
  SECTION("identity") {
    for (double v : symplectic_eigenvalues(Matrix::identity(6))) CHECK(v == Catch::Approx(1.0));
  }
  SECTION("diag(4,1) -> (2)") {
    std::vector<double> s = symplectic_eigenvalues(Matrix::diagonal({4.0, 1.0}));
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Catch::Approx(2.0));
  }
  SECTION("congruence invariance") {
    Rng rng(5);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      std::size_t n = 1 + seed % 3;
      Matrix nn = random_spd(2 * n, rng);
      Matrix s = random_symplectic(n, seed);
      std::vector<double> a = symplectic_eigenvalues(nn);
      std::vector<double> b = symplectic_eigenvalues(s.transpose() * nn * s);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == Catch::Approx(a[i]).margin(1e-7));
    }
  }
  SECTION("non-SPD rejected") {
    CHECK_THROWS_AS(symplectic_eigenvalues(Matrix::diagonal({1.0, -1.0})), std::invalid_argument);
  }
}

TEST_CASE("williamson diagonalization") {
  SECTION("identity") {
    WilliamsonDecomposition w = williamson(Matrix::identity(4));
    CHECK((w.S - Matrix::identity(4)).frobenius() < 1e-10);
    for (double v : w.sigma) CHECK(v == Catch::Approx(1.0));
  }
  SECTION("diag(4,1): hand-solved diagonal case") {
    WilliamsonDecomposition w = williamson(Matrix::diagonal({4.0, 1.0}));
    REQUIRE(w.sigma.size() == 1);
    CHECK(w.sigma[0] == Catch::Approx(2.0));
    CHECK(std::abs(w.S(0, 0)) == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(w.S(1, 1)) == Catch::Approx(std::sqrt(2.0)));
  }
  SECTION("random SPD n=3: all post-conditions") {
    Rng rng(31);
    Matrix n = random_spd(6, rng);
    WilliamsonDecomposition w = williamson(n);
    CHECK(w.residual <= 1e-8 * n.frobenius());
    CHECK(classify(w.S, 1e-8).tag == MapTag::Symplectic);
    std::vector<double> s = symplectic_eigenvalues(n);
    for (std::size_t i = 0; i < 3; ++i) CHECK(w.sigma[i] == Catch::Approx(s[i]).margin(1e-8));
    CHECK(std::is_sorted(w.sigma.rbegin(), w.sigma.rend()));
  }
  SECTION("completeness: N reconstructed from its decomposition") {
    Rng rng(37);
    for (int trial = 0; trial < 4; ++trial) {
      std::size_t n = 1 + static_cast<std::size_t>(trial) % 3;
      Matrix nn = random_spd(2 * n, rng);
      WilliamsonDecomposition w = williamson(nn);
      Matrix d(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = w.sigma[i];
        d(n + i, n + i) = w.sigma[i];
      }
      Matrix si = inverse(w.S);
      Matrix rec = si.transpose() * d * si;
      CHECK((rec - nn).frobenius() <= 1e-7 * nn.frobenius());
    }
  }
}

TEST_CASE("unitary diagonalization in Sp+") {
  SECTION("identity") {
    UnitaryDiagonalization u = unitary_diagonalize_sp(Matrix::identity(4));
    for (double v : u.lambda) CHECK(v == Catch::Approx(1.0));
    CHECK(u.U.is_orthogonal(1e-10));
    CHECK(classify(u.U, 1e-9).tag == MapTag::Symplectic);
  }
  SECTION("diag(2, 1/2) already in normal form") {
    UnitaryDiagonalization u = unitary_diagonalize_sp(Matrix::diagonal({2.0, 0.5}));
    REQUIRE(u.lambda.size() == 1);
    CHECK(u.lambda[0] == Catch::Approx(2.0));
    CHECK((u.U - Matrix::identity(2)).frobenius() < 1e-12);
  }
  SECTION("G = S^T S reconstruction, n = 2") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Matrix s = random_symplectic(2, seed);
      Matrix g = s.transpose() * s;
      g = 0.5 * (g + g.transpose());
      UnitaryDiagonalization u = unitary_diagonalize_sp(g);
      Matrix d(4);
      for (std::size_t i = 0; i < 2; ++i) {
        d(i, i) = u.lambda[i];
        d(2 + i, 2 + i) = 1.0 / u.lambda[i];
        CHECK(u.lambda[i] >= 1.0 - 1e-10);
      }
      CHECK((u.U.transpose() * d * u.U - g).frobenius() <= 1e-8 * g.frobenius());
      CHECK(u.U.is_orthogonal(1e-9));
      CHECK(classify(u.U, 1e-8).tag == MapTag::Symplectic);
      // embedding block structure [[A, -B], [B, A]]
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          CHECK(u.U(i, j) == Catch::Approx(u.U(2 + i, 2 + j)).margin(1e-10));
          CHECK(u.U(i, 2 + j) == Catch::Approx(-u.U(2 + i, j)).margin(1e-10));
        }
    }
  }
  SECTION("non-symplectic input rejected") {
    CHECK_THROWS_AS(unitary_diagonalize_sp(Matrix::diagonal({4.0, 1.0})), std::invalid_argument);
  }
}

TEST_CASE("ellipsoid capacity") {
  SECTION("ball normalization c(B(R)) = pi R^2") {
    double r = 2.0;
    CHECK(capacity_ellipsoid({(1.0 / (r * r)) * Matrix::identity(4)}) == Catch::Approx(pi * r * r));
  }
  SECTION("diag(4,1) -> pi/2") {
    CHECK(capacity_ellipsoid({Matrix::diagonal({4.0, 1.0})}) == Catch::Approx(pi / 2.0));
  }
  SECTION("symplectic invariance") {
    Rng rng(41);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Matrix g = random_spd(4, rng);
      Matrix s = random_symplectic(2, seed);
      Ellipsoid e{g};
      CHECK(capacity_ellipsoid(pushforward_ellipsoid(e, s)) ==
            Catch::Approx(capacity_ellipsoid(e)).epsilon(1e-8));
    }
  }
  SECTION("antisymplectic invariance") {
    Rng rng(43);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Matrix g = random_spd(4, rng);
      Matrix m = reflection_C(2) * random_symplectic(2, seed);
      Ellipsoid e{g};
      CHECK(capacity_ellipsoid(pushforward_ellipsoid(e, m)) ==
            Catch::Approx(capacity_ellipsoid(e)).epsilon(1e-7));
    }
  }
}

TEST_CASE("ellipsoid pushforward") {
  Ellipsoid e{Matrix::identity(2)};
  SECTION("identity map") {
    CHECK((pushforward_ellipsoid(e, Matrix::identity(2)).G - e.G).frobenius() < 1e-14);
  }
  SECTION("diag(2, 1/2): direct computation") {
    Ellipsoid out = pushforward_ellipsoid(e, Matrix::diagonal({2.0, 0.5}));
    CHECK((out.G - Matrix::diagonal({0.25, 4.0})).frobenius() < 1e-12);
  }
  SECTION("round trip through K and K^{-1}") {
    Matrix k = random_invertible(4, 99);
    Ellipsoid g{Matrix::identity(4) + 0.1 * standard_J(2) * standard_J(2)};
    Ellipsoid back = pushforward_ellipsoid(pushforward_ellipsoid(g, k), inverse(k));
    CHECK((back.G - g.G).frobenius() <= 1e-10 * g.G.frobenius());
  }
  SECTION("singular map rejected") {
    CHECK_THROWS_AS(pushforward_ellipsoid(e, Matrix(2)), std::invalid_argument);
  }
}

TEST_CASE("symplectic ball detection") {
  SECTION("unit ball") {
    auto r = is_symplectic_ball({Matrix::identity(4)}, 1e-8);
    REQUIRE(r.has_value());
    CHECK(*r == Catch::Approx(1.0));
  }
  SECTION("radius-2 symplectic ball") {
    Matrix s = random_symplectic(2, 77);
    Matrix si = inverse(s);
    Matrix g = 0.25 * si.transpose() * si;
    auto r = is_symplectic_ball({0.5 * (g + g.transpose())}, 1e-7);
    REQUIRE(r.has_value());
    CHECK(*r == Catch::Approx(2.0).margin(1e-7));
  }
  SECTION("unequal spectrum -> empty") {
    // spectrum {2, 1}
    CHECK_FALSE(is_symplectic_ball({Matrix::diagonal({4.0, 1.0, 1.0, 1.0})}, 1e-8).has_value());
  }
}

TEST_CASE("lemma witness search") {
  SECTION("J: symplectic, no witness") {
    WitnessResult w = lemma_witness(standard_J(1));
    CHECK(w.classification.tag == MapTag::Symplectic);
    CHECK_FALSE(w.witness_G.has_value());
  }
  SECTION("diag(2,1): witness G = I") {
    WitnessResult w = lemma_witness(Matrix::diagonal({2.0, 1.0}));
    REQUIRE(w.witness_G.has_value());
    CHECK((*w.witness_G - Matrix::identity(2)).frobenius() < 1e-14);
    CHECK(*w.witness_residual == Catch::Approx(3.0 * std::sqrt(2.0)));
  }
  SECTION("sqrt(2) J: witness G = I") {
    WitnessResult w = lemma_witness(std::sqrt(2.0) * standard_J(1));
    REQUIRE(w.witness_G.has_value());
    CHECK((*w.witness_G - Matrix::identity(2)).frobenius() < 1e-14);
    CHECK(*w.witness_residual == Catch::Approx(3.0 * std::sqrt(2.0)));
  }
  SECTION("witness soundness on seeded neither maps") {
    int found_deterministic = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      std::size_t n = 1 + seed % 3;
      Matrix m = random_invertible(2 * n, seed);
      if (classify(m, 1e-6).tag != MapTag::Neither) continue;
      ++total;
      WitnessResult w = lemma_witness(m, 1e-6);
      REQUIRE(w.witness_G.has_value());
      const Matrix& g = *w.witness_G;
      // block form diag(X, X^{-1})
      Matrix x(n), xi(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          x(i, j) = g(i, j);
          xi(i, j) = g(n + i, n + j);
          CHECK(g(i, n + j) == 0.0);
          CHECK(g(n + i, j) == 0.0);
        }
      CHECK((x * xi - Matrix::identity(n)).frobenius() < 1e-9);
      CHECK(is_spd(g));
      CHECK(classify(g, 1e-9).tag == MapTag::Symplectic);
      Matrix pushed = m.transpose() * g * m;
      Matrix j = standard_J(n);
      CHECK((pushed.transpose() * j * pushed - j).frobenius() > 1e-6);
      if ((g - Matrix::identity(2 * n)).frobenius() < 1e-12) ++found_deterministic;
    }
    CHECK(total > 10);
  }
  SECTION("singular input rejected") { CHECK_THROWS_AS(lemma_witness(Matrix(4)), std::invalid_argument); }
}

TEST_CASE("random symplectic generator") {
  SECTION("deterministic for a fixed seed") {
    Matrix a = random_symplectic(2, 123);
    Matrix b = random_symplectic(2, 123);
    CHECK((a - b).frobenius() == 0.0);
    Matrix c = random_symplectic(2, 124);
    CHECK((a - c).frobenius() > 1e-6);
  }
  SECTION("symplectic with unit determinant") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::size_t n = 1 + seed % 3;
      Matrix s = random_symplectic(n, seed);
      CHECK(classify(s, 1e-10).tag == MapTag::Symplectic);
      CHECK(determinant(s) == Catch::Approx(1.0).margin(1e-8));
    }
  }
}

TEST_CASE("classification group structure") {
  Matrix c = reflection_C(2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Matrix s1 = random_symplectic(2, seed);
    Matrix s2 = random_symplectic(2, seed + 100);
    Matrix a1 = c * s1;
    Matrix a2 = c * s2;
    CHECK(classify(s1 * s2, 1e-8).tag == MapTag::Symplectic);
    CHECK(classify(s1 * a1, 1e-8).tag == MapTag::Antisymplectic);
    CHECK(classify(a1 * a2, 1e-8).tag == MapTag::Symplectic);
  }
}

TEST_CASE("symplectic balls map to symplectic balls under +-symplectic maps") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Matrix s = random_symplectic(2, seed);
    Matrix si = inverse(s);
    double r = 1.5;
    Matrix g = (1.0 / (r * r)) * si.transpose() * si;
    Ellipsoid ball{0.5 * (g + g.transpose())};
    Matrix f = random_symplectic(2, seed + 50);
    auto r1 = is_symplectic_ball(pushforward_ellipsoid(ball, f), 1e-7);
    REQUIRE(r1.has_value());
    CHECK(*r1 == Catch::Approx(r).margin(1e-7));
    Matrix af = reflection_C(2) * f;
    auto r2 = is_symplectic_ball(pushforward_ellipsoid(ball, af), 1e-7);
    REQUIRE(r2.has_value());
    CHECK(*r2 == Catch::Approx(r).margin(1e-7));
  }
}

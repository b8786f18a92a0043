#include <catch2/catch_amalgamated.hpp>

#include "symcal/phasespace.hpp"
#include "symcal/rng.hpp"
#include "symcal/states.hpp"

using namespace symcal;

namespace {

const Grid kGrid{512, 20.0, 1.0};

cplx gauss_symbol(double x, double p) { return cplx(std::exp(-0.5 * (x * x + p * p)), 0.0); }

}  // namespace

TEST_CASE("weyl operator exact cases") {
  WaveFunction psi = gaussian_wavefunction(kGrid, 1.0, 0.4);
  SECTION("a = 1 is the identity") {
    PhaseSpaceFunction one = sample_symbol(kGrid, [](double, double) { return cplx(1.0, 0.0); });
    CHECK(detail::rel_l2_distance(weyl_apply(one, psi), psi) <= 1e-13);
  }
  SECTION("a = x multiplies by x") {
    PhaseSpaceFunction ax = sample_symbol(kGrid, [](double x, double) { return cplx(x, 0.0); });
    WaveFunction out = weyl_apply(ax, psi);
    WaveFunction expect = psi;
    for (std::size_t k = 0; k < kGrid.size; ++k) expect.samples[k] *= kGrid.x(k);
    double worst = 0.0;
    for (std::size_t k = 0; k < kGrid.size; ++k)
      worst = std::max(worst, std::abs(out.samples[k] - expect.samples[k]));
    CHECK(worst <= 1e-12);
  }
  SECTION("a = p acts as -i hbar d/dx") {
    // on the real gaussian exp(-X x^2 / 2 hbar): -i hbar psi' = i X x psi
    WaveFunction g = gaussian_wavefunction(kGrid, 1.5);
    PhaseSpaceFunction ap = sample_symbol(kGrid, [](double, double p) { return cplx(p, 0.0); });
    WaveFunction out = weyl_apply(ap, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < kGrid.size; ++k) {
      cplx expect = cplx(0.0, 1.5 * kGrid.x(k)) * g.samples[k];
      worst = std::max(worst, std::abs(out.samples[k] - expect));
    }
    CHECK(worst <= 1e-5);
  }
  SECTION("harmonic oscillator symbol on its eigenstates") {
    PhaseSpaceFunction h =
        sample_symbol(kGrid, [](double x, double p) { return cplx(0.5 * (x * x + p * p), 0.0); });
    WaveFunction ground = gaussian_wavefunction(kGrid, 1.0);
    CHECK(detail::rel_l2_distance(weyl_apply(h, ground), [&] {
            WaveFunction e = ground;
            for (cplx& v : e.samples) v *= 0.5;  // energy hbar/2
            return e;
          }()) <= 1e-6);
    WaveFunction first = hermite1_wavefunction(kGrid);
    CHECK(detail::rel_l2_distance(weyl_apply(h, first), [&] {
            WaveFunction e = first;
            for (cplx& v : e.samples) v *= 1.5;  // energy 3 hbar/2
            return e;
          }()) <= 1e-6);
  }
  SECTION("symbol on the wrong momentum axis rejected") {
    PhaseSpaceFunction w = wigner(psi);  // half-spacing axis
    CHECK_THROWS_AS(weyl_apply(w, psi), std::invalid_argument);
  }
}

TEST_CASE("weyl pairing identity") {
  WaveFunction psi = gaussian_wavefunction(kGrid, 1.0, 0.3);
  WaveFunction phi = gaussian_wavefunction(kGrid, 2.0);
  WaveFunction herm = hermite1_wavefunction(kGrid);
  PhaseSpaceFunction a = sample_symbol(kGrid, gauss_symbol);
  CHECK(weyl_pairing_check(a, psi, phi) <= 5e-8);
  CHECK(weyl_pairing_check(a, psi, herm) <= 1e-6);
  PhaseSpaceFunction poly =
      sample_symbol(kGrid, [](double x, double p) { return gauss_symbol(x, p) * cplx(x, p); });
  CHECK(weyl_pairing_check(poly, herm, herm) <= 1e-5);
}

TEST_CASE("weyl covariance under symplectic maps") {
  WaveFunction psi = gaussian_wavefunction(kGrid, 1.0);
  SECTION("identity map") { CHECK(weyl_covariance_check(gauss_symbol, Matrix::identity(2), psi) <= 1e-10); }
  SECTION("callable symbol corpus") {
    int tested = 0;
    for (std::uint64_t seed = 1; tested < 4 && seed <= 40; ++seed) {
      Matrix s = random_symplectic(1, seed);
      if (s.frobenius() > 3.0) continue;
      ++tested;
      CHECK(weyl_covariance_check(gauss_symbol, s, psi) <= 1e-4);
    }
    CHECK(tested == 4);
  }
  SECTION("grid-sampled symbol overload") {
    PhaseSpaceFunction a = sample_symbol(kGrid, gauss_symbol);
    CHECK(weyl_covariance_check(a, Matrix::diagonal({2.0, 0.5}), psi) <= 1e-3);
  }
  SECTION("non-symplectic map rejected") {
    CHECK_THROWS_AS(weyl_covariance_check(gauss_symbol, Matrix::diagonal({2.0, 1.0}), psi),
                    std::invalid_argument);
  }
}

TEST_CASE("weyl covariance defect for a non-symplectic map") {
  WaveFunction psi = gaussian_wavefunction(kGrid, 1.0);
  Matrix m = Matrix::diagonal({2.0, 1.0});
  for (const Matrix& standin :
       {Matrix::identity(2), standard_J(1), Matrix::diagonal({2.0, 0.5}), random_symplectic(1, 3)}) {
    if (standin.frobenius() > 3.0) continue;
    CHECK(weyl_covariance_defect(gauss_symbol, m, standin, psi) > 1e-2);
  }
}

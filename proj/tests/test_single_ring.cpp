#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rvlab/single_ring.hpp"
#include "support/oracles.hpp"

using namespace rvlab;

namespace {

DiagonalMatrix grid_diagonal(std::size_t n, double lo, double hi) {
  DiagonalMatrix d;
  for (std::size_t i = 0; i < n; ++i)
    d.diag.emplace_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return d;
}

std::vector<double> moduli(const std::vector<Spectrum>& spectra) {
  std::vector<double> out;
  for (const auto& s : spectra)
    for (const auto& z : s.eigenvalues) out.push_back(std::abs(z));
  return out;
}

}  // namespace

TEST_SUITE("radii") {
  TEST_CASE("point mass at 1") {
    const auto r = ring_radii(RealMeasure{{1.0}});
    CHECK(r.a == 1.0);
    CHECK(r.b == 1.0);
  }

  TEST_CASE("1000 equispaced atoms on [1, 2]") {
    const auto r = ring_radii(singular_measure(grid_diagonal(1000, 1.0, 2.0)));
    CHECK(std::abs(r.a - std::sqrt(2.0)) <= 1e-3);
    CHECK(std::abs(r.b - std::sqrt(7.0 / 3.0)) <= 1e-3);
  }

  TEST_CASE("atoms {1, 2}") {
    const auto r = ring_radii(RealMeasure{{1.0, 2.0}});
    CHECK(r.a == doctest::Approx(std::sqrt(8.0 / 5.0)));
    CHECK(r.b == doctest::Approx(std::sqrt(5.0 / 2.0)));
  }

  TEST_CASE("an atom at zero gives a = 0") {
    const auto r = ring_radii(RealMeasure{{0.0, 1.0, 2.0}});
    CHECK(r.a == 0.0);
    CHECK(r.b == doctest::Approx(std::sqrt(5.0 / 3.0)));
  }

  TEST_CASE("a <= b on 1000 random measures, and exact scaling") {
    RngStream rng(1);
    for (int i = 0; i < 1000; ++i) {
      RealMeasure mu;
      const auto count = 1 + rng.next_u64() % 20;
      for (std::uint64_t k = 0; k < count; ++k) mu.atoms.push_back(std::exp(rng.normal()));
      const auto r = ring_radii(mu);
      CHECK(r.a <= r.b * (1.0 + 1e-15));
      RealMeasure scaled = mu;
      for (auto& x : scaled.atoms) x *= 4.0;
      const auto s = ring_radii(scaled);
      CHECK(s.a == 4.0 * r.a);
      CHECK(s.b == 4.0 * r.b);
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(ring_radii(RealMeasure{}), PreconditionError);
    CHECK_THROWS_AS(ring_radii(RealMeasure{{1.0, -1.0}}), PreconditionError);
    CHECK_THROWS_AS(singular_measure(DiagonalMatrix{{Complex(1.0, 1.0)}}), PreconditionError);
  }
}

TEST_SUITE("stieltjes") {
  TEST_CASE("point mass at 0") {
    const RealMeasure mu{{0.0}};
    CHECK(std::abs(stieltjes_transform(mu, Complex(0.0, 1.0)) - Complex(0.0, -1.0)) <= 1e-15);
    for (Complex z : {Complex(2.0, 1.0), Complex(-0.5, 3.0), Complex(4.0)})
      CHECK(std::abs(stieltjes_transform(mu, z) - 1.0 / z) <= 1e-15);
  }

  TEST_CASE("atoms {1, 2} at z = 3") {
    CHECK(std::abs(stieltjes_transform(RealMeasure{{1.0, 2.0}}, Complex(3.0)) - 0.75) <= 1e-15);
  }

  TEST_CASE("Im S <= 0 in the upper half plane") {
    RngStream rng(2);
    RealMeasure mu;
    for (int i = 0; i < 50; ++i) mu.atoms.push_back(rng.normal());
    for (int i = 0; i < 200; ++i) {
      const Complex z(rng.normal(), std::exp(rng.normal()));
      CHECK(stieltjes_transform(mu, z).imag() <= 0.0);
    }
  }

  TEST_CASE("collision with an atom") {
    CHECK_THROWS_AS(stieltjes_transform(RealMeasure{{1.0}}, Complex(1.0)), PreconditionError);
    CHECK_NOTHROW(stieltjes_transform(RealMeasure{{1.0}}, Complex(1.0, 1e-9)));
  }
}

TEST_SUITE("symmetrized measure") {
  TEST_CASE("A = 0 and A = I at z = 0") {
    const auto m0 = symmetrized_singular_measure(DenseMatrix::zeros(4, 4), Complex(0.0));
    CHECK(m0.size() == 8);
    for (double x : m0.atoms) CHECK(x == 0.0);
    const auto m1 = symmetrized_singular_measure(DenseMatrix::identity(3), Complex(0.0));
    CHECK(m1.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(m1.atoms[i] == doctest::Approx(1.0));
      CHECK(m1.atoms[i + 3] == doctest::Approx(-1.0));
    }
    CHECK(m1.weight() == doctest::Approx(1.0 / 6.0));
  }

  TEST_CASE("S_nu(iy) is purely imaginary") {
    RngStream rng(3);
    const DenseMatrix a = gaussian_complex_matrix(6, 6, rng);
    const auto nu = symmetrized_singular_measure(a, Complex(0.3, -0.2));
    for (double y : {0.1, 1.0, 5.0}) {
      const Complex s = stieltjes_transform(nu, Complex(0.0, y));
      CHECK(std::abs(s.real()) <= 1e-14 * std::abs(s));
    }
  }
}

TEST_SUITE("sampling") {
  TEST_CASE("D = I gives eigenvalues on the unit circle") {
    RngStream rng(4);
    for (Field f : {Field::complex, Field::real}) {
      const Spectrum s = sample_single_ring(DiagonalMatrix{std::vector<Complex>(12, Complex(1.0))}, f, rng);
      for (const auto& z : s.eigenvalues) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-8);
    }
  }

  TEST_CASE("a zero singular value forces a zero eigenvalue") {
    DiagonalMatrix d = grid_diagonal(10, 1.0, 2.0);
    d.diag.back() = 0.0;
    RngStream rng(5);
    for (int i = 0; i < 5; ++i) {
      const Spectrum s = sample_single_ring(d, Field::complex, rng);
      double best = 1.0;
      for (const auto& z : s.eigenvalues) best = std::min(best, std::abs(z));
      CHECK(best <= 1e-8);
    }
  }

  TEST_CASE("|det| equals the product of the diagonal") {
    const DiagonalMatrix d = grid_diagonal(8, 0.5, 3.0);
    double prod = 1.0;
    for (const auto& z : d.diag) prod *= z.real();
    RngStream rng(6);
    const Spectrum s = sample_single_ring(d, Field::real, rng);
    CHECK(std::abs(s.product()) == doctest::Approx(prod).epsilon(1e-10));
  }

  TEST_CASE("negative entries are rejected") {
    RngStream rng(7);
    CHECK_THROWS_AS(sample_single_ring(DiagonalMatrix{{Complex(1.0), Complex(-1.0)}}, Field::complex, rng),
                    PreconditionError);
  }

  TEST_CASE("identical seeds are bit-identical; permuted D has the same law") {
    const DiagonalMatrix d = grid_diagonal(16, 1.0, 2.0);
    DiagonalMatrix p = d;
    std::reverse(p.diag.begin(), p.diag.end());
    const auto a = sample_single_ring_trials(d, Field::complex, 40, RngStream(8), {1});
    const auto b = sample_single_ring_trials(d, Field::complex, 40, RngStream(8), {3});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].eigenvalues == b[i].eigenvalues);
    const auto c = sample_single_ring_trials(p, Field::complex, 40, RngStream(9));
    CHECK(oracle::ks2_pvalue(moduli(a), moduli(c)) > 0.01);
  }

  TEST_CASE("z-out identity for s_min(UDV - zI)") {
    RngStream rng(10);
    const DiagonalMatrix d = grid_diagonal(7, 0.5, 2.5);
    for (int i = 0; i < 30; ++i) {
      const DenseMatrix u = haar_unitary(7, rng);
      const DenseMatrix v = haar_unitary(7, rng);
      const Complex z(rng.normal(), rng.normal());
      DenseMatrix lhs = u * d.dense() * v;
      for (std::size_t k = 0; k < 7; ++k) lhs(k, k) -= z;
      DenseMatrix rhs = (1.0 / z) * d.dense() - u.adjoint() * v.adjoint();
      CHECK(smallest_singular_value(lhs) ==
            doctest::Approx(std::abs(z) * smallest_singular_value(rhs)).epsilon(1e-8));
    }
  }
}

TEST_SUITE("annulus") {
  TEST_CASE("unit circle with a = b = 1") {
    std::vector<Complex> ev;
    for (int k = 0; k < 10; ++k) ev.push_back(std::polar(1.0, 0.6 * k));
    const auto r = annulus_coverage(ev, 1.0, 1.0, 0.1);
    CHECK(r.fraction_inside == 1.0);
    CHECK(r.fraction_below_inner == 0.0);
    CHECK(r.fraction_above_outer == 0.0);
  }

  TEST_CASE("fractions partition and the default gap is the middle third") {
    const std::vector<Complex> ev{0.1, 1.0, 1.4, 1.6, 3.0, Complex(0.0, 2.0)};
    const auto r = annulus_coverage(ev, 1.0, 1.9, 0.05);
    CHECK(r.fraction_below_inner + r.fraction_inside + r.fraction_above_outer == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fraction_below_inner == doctest::Approx(1.0 / 6.0));
    CHECK(r.fraction_above_outer == doctest::Approx(2.0 / 6.0));
    CHECK(r.gap.lo == doctest::Approx(1.3));
    CHECK(r.gap.hi == doctest::Approx(1.6));
    CHECK(r.gap_occupancy == doctest::Approx(2.0 / 6.0));
    CHECK_THROWS_AS(annulus_coverage(ev, 2.0, 1.0, 0.0), PreconditionError);
  }

  TEST_CASE("uniform grid on [1, 2], n = 256: ring is filled") {
    const DiagonalMatrix d = grid_diagonal(256, 1.0, 2.0);
    const auto radii = ring_radii(singular_measure(d));
    const auto spectra = sample_single_ring_trials(d, Field::complex, 2, RngStream(11));
    std::vector<Complex> all;
    for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    const auto r = annulus_coverage(all, radii.a, radii.b, 0.15);
    CHECK(r.fraction_inside >= 0.98);
  }

  TEST_CASE("gapped atoms {1} and {2}: no forbidden zone") {
    DiagonalMatrix d;
    for (int i = 0; i < 128; ++i) d.diag.emplace_back(1.0);
    for (int i = 0; i < 128; ++i) d.diag.emplace_back(2.0);
    const auto radii = ring_radii(singular_measure(d));
    const auto spectra = sample_single_ring_trials(d, Field::complex, 2, RngStream(12));
    std::vector<Complex> all;
    for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    CHECK(annulus_coverage(all, radii.a, radii.b, 0.0).gap_occupancy > 0.0);
  }
}

TEST_SUITE("conditions") {
  TEST_CASE("SR1 on the uniform grid") {
    const std::vector<Complex> z{Complex(1.0, 1.0)};
    const auto r = check_sr_conditions(grid_diagonal(100, 1.0, 2.0), 2.5, 0.5, 10.0, z);
    CHECK(r.sr1_pass);
    CHECK(r.max_atom == 2.0);
    CHECK_FALSE(check_sr_conditions(grid_diagonal(100, 1.0, 2.0), 1.5, 0.5, 10.0, z).sr1_pass);
  }

  TEST_CASE("D = I concentrates: |Im S| = n^kappa fails SR2") {
    const double y = std::pow(100.0, -0.5);
    const std::vector<Complex> z{Complex(1.0, y)};
    const auto r = check_sr_conditions(DiagonalMatrix{std::vector<Complex>(100, Complex(1.0))}, 2.0, 0.5, 2.0, z);
    CHECK(r.sr2_max_im == doctest::Approx(10.0));
    CHECK_FALSE(r.sr2_pass);
  }

  TEST_CASE("uniform grid passes SR2 on [0, 3] + i n^-kappa") {
    const double y = std::pow(100.0, -0.5);
    std::vector<Complex> z;
    for (int k = 0; k < 100; ++k) z.emplace_back(3.0 * k / 99.0, y);
    const DiagonalMatrix d = grid_diagonal(100, 1.0, 2.0);
    const auto r = check_sr_conditions(d, 2.5, 0.5, 10.0, z);
    CHECK(r.sr2_pass);
    CHECK(r.sr2_pass == (r.sr2_max_im <= r.kappa1));
    // Independent evaluation of the same maximum.
    double best = 0.0;
    for (const auto& w : z) {
      Complex s{};
      for (const auto& x : d.diag) s += 1.0 / (w - x.real());
      best = std::max(best, std::abs((s / 100.0).imag()));
    }
    CHECK(r.sr2_max_im == doctest::Approx(best).epsilon(1e-12));
    const auto sym = check_sr_conditions(d, 2.5, 0.5, 10.0, z, Sr2Measure::symmetrized);
    CHECK(sym.sr2_symmetrized);
    CHECK(sym.sr2_max_im <= r.sr2_max_im + 1e-12);
  }

  TEST_CASE("points below n^-kappa are rejected") {
    const std::vector<Complex> z{Complex(1.0, 0.01)};
    CHECK_THROWS_AS(check_sr_conditions(grid_diagonal(100, 1.0, 2.0), 2.5, 0.5, 10.0, z), PreconditionError);
  }

  TEST_CASE("SR3: D = 3I at z = 0 never fires") {
    const auto e = estimate_sr3_integral(DiagonalMatrix{std::vector<Complex>(6, Complex(3.0))}, Complex(0.0), 0.2, 50,
                                         RngStream(13));
    CHECK(e.mean == 0.0);
    CHECK(e.fired == 0);
  }

  TEST_CASE("SR3 estimate is nonincreasing in delta") {
    const DiagonalMatrix d = grid_diagonal(16, 1.0, 2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {0.0, 0.2, 0.5, 1.0, 2.0}) {
      const auto e = estimate_sr3_integral(d, Complex(1.5), delta, 100, RngStream(14));
      CHECK(e.mean <= prev);
      CHECK(e.standard_error >= 0.0);
      prev = e.mean;
    }
  }
}

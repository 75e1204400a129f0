#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rvlab/ensembles.hpp"
#include "rvlab/linalg.hpp"
#include "support/oracles.hpp"

using namespace rvlab;
using std::numbers::pi;

namespace {

constexpr double kKsLevel = 0.01;

double orth_defect(const DenseMatrix& q) {
  return max_abs_diff(q.adjoint() * q, DenseMatrix::identity(q.cols()));
}

double real_trace(const DenseMatrix& q) {
  double t = 0.0;
  for (std::size_t i = 0; i < q.rows(); ++i) t += q(i, i).real();
  return t;
}

// Rotation angle of an SO(3) element: tr Q = 1 + 2 cos theta.
double rotation_angle(const DenseMatrix& q) {
  return std::acos(std::clamp((real_trace(q) - 1.0) / 2.0, -1.0, 1.0));
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("identical (seed, stream) reproduce the same sequence") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(42, 8);
    RngStream d(42, 7);
    int same = 0;
    for (int i = 0; i < 100; ++i) same += c.next_u64() == d.next_u64();
    CHECK(same == 0);
  }

  TEST_CASE("substream of a stream-0 base is (seed, index)") {
    RngStream base(11, 0);
    RngStream child = base.substream(5);
    RngStream direct(11, 5);
    CHECK(child.next_u64() == direct.next_u64());
    RngStream other_base(11, 3);
    CHECK(other_base.substream(5).next_u64() != RngStream(11, 5).next_u64());
  }

  TEST_CASE("uniforms lie in [0,1) and streams are uncorrelated") {
    RngStream a(1, 0);
    RngStream b(1, 1);
    double cov = 0.0;
    const int n = 20000;
    std::vector<double> us;
    for (int i = 0; i < n; ++i) {
      const double x = a.uniform();
      const double y = b.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      cov += (x - 0.5) * (y - 0.5);
      us.push_back(x);
    }
    // Var of the product is 1/144; 5 sigma window.
    CHECK(std::abs(cov / n) <= 5.0 / 12.0 / std::sqrt(n));
    CHECK(oracle::ks_pvalue(us, [](double x) { return std::clamp(x, 0.0, 1.0); }) > kKsLevel);
  }
}

TEST_SUITE("gaussian") {
  TEST_CASE("deterministic given the stream") {
    RngStream a(1, 0);
    RngStream b(1, 0);
    CHECK(gaussian_real_matrix(2, 2, a) == gaussian_real_matrix(2, 2, b));
  }

  TEST_CASE("moments of entry (0,0) over 1e5 draws") {
    std::vector<double> xs;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      RngStream rng(3, i);
      const DenseMatrix g = gaussian_real_matrix(2, 2, rng);
      CHECK(g(0, 0).imag() == 0.0);
      xs.push_back(g(0, 0).real());
    }
    const auto [mean, var] = oracle::moments(xs);
    CHECK(std::abs(mean) <= 0.02);
    CHECK(std::abs(var - 1.0) <= 0.05);
  }

  TEST_CASE("(1,1) entry passes KS against the normal CDF") {
    RngStream rng(4, 0);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(gaussian_real_matrix(1, 1, rng)(0, 0).real());
    CHECK(oracle::ks_pvalue(xs, oracle::normal_cdf) > kKsLevel);
  }
}

TEST_SUITE("haar") {
  TEST_CASE("unitarity at several sizes") {
    RngStream rng(5, 0);
    for (std::size_t n : {1u, 2u, 7u, 64u}) CHECK(orth_defect(haar_unitary(n, rng)) <= 1e-10);
  }

  TEST_CASE("U(1) argument is uniform") {
    RngStream rng(6, 0);
    std::vector<double> args;
    for (int i = 0; i < 10000; ++i) {
      const Complex u = haar_unitary(1, rng)(0, 0);
      CHECK(std::abs(std::abs(u) - 1.0) <= 1e-14);
      args.push_back(std::arg(u));
    }
    CHECK(oracle::ks_pvalue(args, [](double x) { return (x + pi) / (2 * pi); }) > kKsLevel);
  }

  TEST_CASE("E|U_11|^2 = 1/n for n = 4") {
    RngStream rng(7, 0);
    double acc = 0.0;
    for (int i = 0; i < 10000; ++i) acc += std::norm(haar_unitary(4, rng)(0, 0));
    CHECK(std::abs(acc / 10000 - 0.25) <= 0.02);
  }

  TEST_CASE("arg(U_11) is uniform on U(3)") {
    // Fails without the R-diagonal phase correction.
    RngStream rng(8, 0);
    std::vector<double> args;
    for (int i = 0; i < 5000; ++i) args.push_back(std::arg(haar_unitary(3, rng)(0, 0)));
    CHECK(oracle::ks_pvalue(args, [](double x) { return (x + pi) / (2 * pi); }) > kKsLevel);
  }

  TEST_CASE("left invariance: trace(F U) and trace(U F) share a law") {
    RngStream frng(9, 0);
    const DenseMatrix f = haar_unitary(3, frng);
    RngStream a(10, 0);
    RngStream b(11, 0);
    std::vector<double> left;
    std::vector<double> right;
    for (int i = 0; i < 10000; ++i) {
      const DenseMatrix u1 = haar_unitary(3, a);
      const DenseMatrix u2 = haar_unitary(3, b);
      Complex t1{};
      Complex t2{};
      const DenseMatrix fu = f * u1;
      const DenseMatrix uf = u2 * f;
      for (std::size_t k = 0; k < 3; ++k) {
        t1 += fu(k, k);
        t2 += uf(k, k);
      }
      left.push_back(t1.real());
      right.push_back(t2.real());
    }
    CHECK(oracle::ks2_pvalue(left, right) > kKsLevel);
  }

  TEST_CASE("O(3) determinant sign splits evenly") {
    RngStream rng(12, 0);
    int positive = 0;
    for (int i = 0; i < 10000; ++i) {
      const DenseMatrix q = haar_orthogonal(3, rng);
      CHECK(q.is_real());
      positive += determinant(q).real() > 0.0;
    }
    CHECK(positive / 10000.0 >= 0.47);
    CHECK(positive / 10000.0 <= 0.53);
  }

  TEST_CASE("SO(5) has determinant one") {
    RngStream rng(13, 0);
    for (int i = 0; i < 200; ++i) {
      const DenseMatrix q = haar_special_orthogonal(5, rng);
      CHECK(std::abs(determinant(q) - 1.0) <= 1e-10);
      CHECK(orth_defect(q) <= 1e-10);
    }
  }

  TEST_CASE("SO(2) first-column angle is uniform") {
    RngStream rng(14, 0);
    std::vector<double> angles;
    for (int i = 0; i < 10000; ++i) {
      const DenseMatrix q = haar_special_orthogonal(2, rng);
      angles.push_back(std::atan2(q(1, 0).real(), q(0, 0).real()));
    }
    CHECK(oracle::ks_pvalue(angles, [](double x) { return (x + pi) / (2 * pi); }) > kKsLevel);
  }
}

TEST_SUITE("hurwitz") {
  TEST_CASE("always a rotation") {
    RngStream rng(15, 0);
    for (int i = 0; i < 500; ++i) {
      const DenseMatrix q = hurwitz_so3(rng);
      CHECK(std::abs(determinant(q) - 1.0) <= 1e-10);
      CHECK(orth_defect(q) <= 1e-10);
    }
  }

  TEST_CASE("image of e_z is uniform over octants") {
    RngStream rng(16, 0);
    std::array<int, 8> counts{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const DenseMatrix q = hurwitz_so3(rng);
      const int oct = (q(0, 2).real() > 0) + 2 * (q(1, 2).real() > 0) + 4 * (q(2, 2).real() > 0);
      ++counts[oct];
    }
    for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 0.125) <= 0.02);
  }

  TEST_CASE("agrees in law with QR-based SO(3)") {
    RngStream a(17, 0);
    RngStream b(18, 0);
    std::vector<double> tr_h, tr_q, e11_h, e11_q, ang_h, ang_q;
    for (int i = 0; i < 10000; ++i) {
      const DenseMatrix h = hurwitz_so3(a);
      const DenseMatrix q = haar_special_orthogonal(3, b);
      tr_h.push_back(real_trace(h));
      tr_q.push_back(real_trace(q));
      e11_h.push_back(h(0, 0).real());
      e11_q.push_back(q(0, 0).real());
      ang_h.push_back(rotation_angle(h));
      ang_q.push_back(rotation_angle(q));
    }
    CHECK(oracle::ks2_pvalue(tr_h, tr_q) > kKsLevel);
    CHECK(oracle::ks2_pvalue(e11_h, e11_q) > kKsLevel);
    CHECK(oracle::ks2_pvalue(ang_h, ang_q) > kKsLevel);
    // Haar SO(3) angle density is (1 - cos t)/pi on [0, pi].
    CHECK(oracle::ks_pvalue(ang_h, [](double t) { return (t - std::sin(t)) / pi; }) > kKsLevel);
  }
}

TEST_SUITE("skew perturbations") {
  TEST_CASE("bordered skew-Hermitian structure") {
    RngStream rng(19, 0);
    for (int k = 0; k < 50; ++k) {
      const DenseMatrix s = skew_hermitian_bordered(4, rng);
      CHECK(s + s.adjoint() == DenseMatrix::zeros(4, 4));
      CHECK(s(0, 0).real() == 0.0);
      CHECK(s(1, 2) == Complex{});
      CHECK(s(1, 3) == Complex{});
      CHECK(s(2, 3) == Complex{});
      for (std::size_t j = 1; j < 4; ++j) {
        CHECK(s(j, 0).imag() == 0.0);
        CHECK(s(0, j) == -s(j, 0));
      }
    }
  }

  TEST_CASE("E||S||_HS^2 = 2(n-1) + 1 for n = 4") {
    RngStream rng(20, 0);
    double acc = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double h = hs_norm(skew_hermitian_bordered(4, rng));
      acc += h * h;
    }
    CHECK(std::abs(acc / 10000 - 7.0) <= 0.05 * 7.0);
  }

  TEST_CASE("Gaussian skew-symmetric: exact antisymmetry, zero diagonal") {
    RngStream rng(21, 0);
    const DenseMatrix s = gaussian_skew_symmetric(6, rng);
    CHECK(s.transpose() == -s);
    CHECK(s.is_real());
    for (std::size_t i = 0; i < 6; ++i) CHECK(s(i, i) == Complex{});
  }

  TEST_CASE("odd dimension is singular") {
    RngStream rng(22, 0);
    for (int k = 0; k < 20; ++k) CHECK(std::abs(determinant(gaussian_skew_symmetric(3, rng))) <= 1e-10);
  }

  TEST_CASE("above-diagonal entries are standard normal") {
    RngStream rng(23, 0);
    std::vector<double> xs;
    for (int k = 0; k < 2000; ++k) {
      const DenseMatrix s = gaussian_skew_symmetric(4, rng);
      xs.push_back(s(0, 1).real());
      xs.push_back(s(2, 3).real());
    }
    CHECK(oracle::ks_pvalue(xs, oracle::normal_cdf) > kKsLevel);
  }

  TEST_CASE("||S|| <= 4 sqrt(n) with frequency >= 0.99 at n = 20") {
    RngStream rng(24, 0);
    int ok = 0;
    for (int k = 0; k < 1000; ++k) ok += operator_norm(gaussian_skew_symmetric(20, rng)) <= 4.0 * std::sqrt(20.0);
    CHECK(ok >= 990);
  }

  TEST_CASE("dimension errors") {
    RngStream rng(25, 0);
    CHECK_THROWS_AS(skew_hermitian_bordered(1, rng), DimensionError);
    CHECK_THROWS_AS(gaussian_skew_symmetric(1, rng), DimensionError);
    CHECK_THROWS_AS(haar_unitary(0, rng), DimensionError);
  }
}

#include "rvlab/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rvlab/errors.hpp"
#include "rvlab/linalg.hpp"

namespace rvlab {

namespace {

void require_at_least(std::size_t n, std::size_t min, const char* what) {
  if (n < min) {
    throw DimensionError(std::string(what) + ": n must be >= " +
                         std::to_string(min) + ", got " + std::to_string(n));
  }
}

}  // namespace

DenseMatrix gaussian_real_matrix(std::size_t rows, std::size_t cols,
                                 RngStream& rng) {
  require_at_least(rows, 1, "gaussian_real_matrix");
  require_at_least(cols, 1, "gaussian_real_matrix");
  DenseMatrix g(rows, cols);
  for (auto& z : g.data()) z = Complex(rng.normal(), 0.0);
  return g;
}

DenseMatrix gaussian_complex_matrix(std::size_t rows, std::size_t cols,
                                    RngStream& rng) {
  require_at_least(rows, 1, "gaussian_complex_matrix");
  require_at_least(cols, 1, "gaussian_complex_matrix");
  const double s = 1.0 / std::numbers::sqrt2;
  DenseMatrix g(rows, cols);
  for (auto& z : g.data()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(s * re, s * im);
  }
  return g;
}

DenseMatrix haar_unitary(std::size_t n, RngStream& rng) {
  require_at_least(n, 1, "haar_unitary");
  return qr_decompose(gaussian_complex_matrix(n, n, rng)).q;
}

DenseMatrix haar_orthogonal(std::size_t n, RngStream& rng) {
  require_at_least(n, 1, "haar_orthogonal");
  return qr_decompose(gaussian_real_matrix(n, n, rng)).q;
}

DenseMatrix haar_special_orthogonal(std::size_t n, RngStream& rng) {
  DenseMatrix q = haar_orthogonal(n, rng);
  if (determinant(q).real() < 0.0) {
    for (auto& z : q.row(0)) z = -z;
  }
  return q;
}

DenseMatrix hurwitz_rotation(double alpha, double beta, double gamma) {
  auto rz = [](double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    return DenseMatrix{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}};
  };
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const DenseMatrix ry{{cb, 0.0, sb}, {0.0, 1.0, 0.0}, {-sb, 0.0, cb}};
  return rz(alpha) * ry * rz(gamma);
}

DenseMatrix hurwitz_so3(RngStream& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double gamma = rng.uniform(0.0, two_pi);
  const double alpha = rng.uniform(0.0, two_pi);
  const double beta = std::acos(rng.uniform(-1.0, 1.0));
  return hurwitz_rotation(alpha, beta, gamma);
}

DenseMatrix rotation2(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return DenseMatrix{{c, s}, {-s, c}};
}

DenseMatrix skew_hermitian_bordered(std::size_t n, RngStream& rng) {
  require_at_least(n, 2, "skew_hermitian_bordered");
  DenseMatrix s(n, n);
  s(0, 0) = Complex(0.0, rng.normal());
  for (std::size_t j = 1; j < n; ++j) {
    const double z = rng.normal();
    s(j, 0) = z;
    s(0, j) = -z;
  }
  return s;
}

DenseMatrix gaussian_skew_symmetric(std::size_t n, RngStream& rng) {
  require_at_least(n, 2, "gaussian_skew_symmetric");
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double z = rng.normal();
      s(i, j) = z;
      s(j, i) = -z;
    }
  }
  return s;
}

std::string_view to_string(Ensemble e) noexcept {
  switch (e) {
    case Ensemble::unitary:
      return "unitary";
    case Ensemble::orthogonal:
      return "orthogonal";
    case Ensemble::special_orthogonal:
      return "special_orthogonal";
  }
  return "unknown";
}

Ensemble parse_ensemble(std::string_view name) {
  if (name == "unitary" || name == "U") return Ensemble::unitary;
  if (name == "orthogonal" || name == "O") return Ensemble::orthogonal;
  if (name == "special_orthogonal" || name == "special-orthogonal" ||
      name == "SO")
    return Ensemble::special_orthogonal;
  throw ParseError("unknown ensemble '" + std::string(name) + "'", 0);
}

DenseMatrix sample_haar(Ensemble ensemble, std::size_t n, RngStream& rng) {
  switch (ensemble) {
    case Ensemble::unitary:
      return haar_unitary(n, rng);
    case Ensemble::orthogonal:
      return haar_orthogonal(n, rng);
    case Ensemble::special_orthogonal:
      return haar_special_orthogonal(n, rng);
  }
  throw Error("sample_haar: unknown ensemble");
}

}  // namespace rvlab

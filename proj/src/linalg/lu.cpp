#include <algorithm>
#include <cmath>
#include <limits>

#include "rvlab/linalg.hpp"

namespace rvlab {

namespace {

struct Lu {
  DenseMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

Lu lu_factor(const DenseMatrix& a) {
  require_square(a, "lu");
  require_finite(a, "lu");
  const std::size_t n = a.rows();
  Lu f{a, std::vector<std::size_t>(n), 1, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  f.min_pivot = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  DenseMatrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    f.min_pivot = std::min(f.min_pivot, best);
    f.max_pivot = std::max(f.max_pivot, best);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    if (best == 0.0) continue;
    const Complex inv = 1.0 / m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex l = m(i, k) * inv;
      m(i, k) = l;
      if (l == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

void check_pivots(const Lu& f, const SolveOptions& options) {
  if (f.max_pivot == 0.0 ||
      f.min_pivot < options.pivot_ratio_threshold * f.max_pivot) {
    throw SingularMatrixError(
        "solve_linear: matrix is numerically singular (pivot ratio " +
        std::to_string(f.max_pivot == 0.0 ? 0.0 : f.min_pivot / f.max_pivot) +
        ")");
  }
}

Vector lu_solve(const Lu& f, std::span<const Complex> b) {
  const std::size_t n = f.lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

}  // namespace

Complex determinant(const DenseMatrix& a) {
  const Lu f = lu_factor(a);
  Complex det{static_cast<double>(f.sign)};
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

Vector solve_linear(const DenseMatrix& a, std::span<const Complex> b,
                    const SolveOptions& options) {
  if (b.size() != a.rows()) throw DimensionError("solve_linear: rhs length mismatch");
  const Lu f = lu_factor(a);
  check_pivots(f, options);
  return lu_solve(f, b);
}

DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b,
                         const SolveOptions& options) {
  if (b.rows() != a.rows()) throw DimensionError("solve_linear: rhs rows mismatch");
  const Lu f = lu_factor(a);
  check_pivots(f, options);
  DenseMatrix x(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) x.set_column(j, lu_solve(f, b.column(j)));
  return x;
}

DenseMatrix inverse(const DenseMatrix& a, const SolveOptions& options) {
  return solve_linear(a, DenseMatrix::identity(a.rows()), options);
}

}  // namespace rvlab

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rvlab/linalg.hpp"

namespace rvlab {

namespace {

struct JacobiOutput {
  std::vector<Vector> columns;  // A V, columns mutually orthogonal
  std::vector<Vector> right;    // V, empty when not accumulated
};

double squared_norm(const Vector& x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return s;
}

// Hestenes one-sided Jacobi on a tall matrix (m >= n), column-major input.
JacobiOutput one_sided_jacobi(std::vector<Vector> cols, bool accumulate,
                              const SvdOptions& options) {
  const std::size_t n = cols.size();
  JacobiOutput out;
  if (accumulate) {
    out.right.assign(n, Vector(n));
    for (std::size_t j = 0; j < n; ++j) out.right[j][j] = 1.0;
  }
  std::vector<double> sq(n);
  double frob2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sq[j] = squared_norm(cols[j]);
    frob2 += sq[j];
  }
  // Columns that have collapsed to rounding noise can never pass the relative
  // test, so pairs below eps ||A||_F^2 count as orthogonal.
  const double abs_floor = std::numeric_limits<double>::epsilon() * frob2;

  bool converged = n < 2;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq[p];
        const double beta = sq[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const Complex gamma = dot(cols[p], cols[q]);
        const double g = std::abs(gamma);
        if (g <= options.tolerance * std::sqrt(alpha) * std::sqrt(beta) || g <= abs_floor) continue;
        rotated = true;

        // Reduce to the real symmetric 2x2 case with w = gamma / |gamma|.
        const Complex w_conj = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex s_w = s * w_conj;
        const Complex c_w = c * w_conj;

        Vector& ap = cols[p];
        Vector& aq = cols[q];
        for (std::size_t i = 0; i < ap.size(); ++i) {
          const Complex x = ap[i];
          const Complex y = aq[i];
          ap[i] = c * x - s_w * y;
          aq[i] = s * x + c_w * y;
        }
        if (accumulate) {
          Vector& vp = out.right[p];
          Vector& vq = out.right[q];
          for (std::size_t i = 0; i < n; ++i) {
            const Complex x = vp[i];
            const Complex y = vq[i];
            vp[i] = c * x - s_w * y;
            vq[i] = s * x + c_w * y;
          }
        }
        // Recompute rather than update: keeps the norms honest as columns shrink.
        sq[p] = squared_norm(ap);
        sq[q] = squared_norm(aq);
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw ConvergenceError("svd: one-sided Jacobi did not converge within " +
                           std::to_string(options.max_sweeps) + " sweeps");
  }
  out.columns = std::move(cols);
  return out;
}

std::vector<Vector> to_columns(const DenseMatrix& a) {
  std::vector<Vector> cols(a.cols(), Vector(a.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) cols[j][i] = a(i, j);
  return cols;
}

// Replaces columns flagged in `missing` by unit vectors orthogonal to all
// other columns (modified Gram-Schmidt against the standard basis).
void complete_orthonormal(std::vector<Vector>& cols,
                          const std::vector<bool>& missing) {
  if (cols.empty()) return;
  const std::size_t m = cols.front().size();
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!missing[j]) continue;
    for (; next_basis < m; ++next_basis) {
      Vector v(m);
      v[next_basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
          if (k == j || (missing[k] && k > j)) continue;
          const Complex proj = dot(cols[k], v);
          for (std::size_t i = 0; i < m; ++i) v[i] -= proj * cols[k][i];
        }
      }
      const double nv = norm2(v);
      if (nv > 0.5) {
        for (auto& z : v) z /= nv;
        cols[j] = std::move(v);
        ++next_basis;
        break;
      }
    }
  }
}

SvdResult svd_tall(const DenseMatrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  JacobiOutput jac = one_sided_jacobi(to_columns(a), true, options);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(jac.columns[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double sigma_max = n == 0 ? 0.0 : sigma[order.front()];
  const double floor = sigma_max * static_cast<double>(m) *
                       std::numeric_limits<double>::epsilon();

  std::vector<Vector> u(n);
  std::vector<bool> missing(n, false);
  SvdResult out;
  out.singular_values.resize(n);
  out.right = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = jac.right[j][i];
    if (sigma[j] <= floor || sigma[j] == 0.0) {
      // Numerically null column: its direction is noise, rebuild it.
      missing[k] = true;
      u[k] = Vector(m);
    } else {
      u[k] = jac.columns[j];
      for (auto& z : u[k]) z /= sigma[j];
    }
  }
  complete_orthonormal(u, missing);
  out.left = DenseMatrix(m, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < m; ++i) out.left(i, k) = u[k][i];
  return out;
}

}  // namespace

DenseMatrix SvdResult::reconstruct() const {
  DenseMatrix scaled = left;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t k = 0; k < singular_values.size(); ++k)
      scaled(i, k) *= singular_values[k];
  return scaled * right.adjoint();
}

SvdResult svd(const DenseMatrix& a, const SvdOptions& options) {
  require_finite(a, "svd");
  if (a.empty()) throw DimensionError("svd: empty matrix");
  if (a.rows() >= a.cols()) return svd_tall(a, options);
  // A = (A^*)^* = (U S V^*)^* = V S U^*.
  SvdResult t = svd_tall(a.adjoint(), options);
  return SvdResult{std::move(t.right), std::move(t.singular_values),
                   std::move(t.left)};
}

std::vector<double> singular_values(const DenseMatrix& a,
                                    const SvdOptions& options) {
  require_finite(a, "singular_values");
  if (a.empty()) throw DimensionError("singular_values: empty matrix");
  const DenseMatrix& tall_src = a;
  JacobiOutput jac = a.rows() >= a.cols()
                         ? one_sided_jacobi(to_columns(tall_src), false, options)
                         : one_sided_jacobi(to_columns(a.adjoint()), false, options);
  std::vector<double> sigma;
  sigma.reserve(jac.columns.size());
  for (const auto& c : jac.columns) sigma.push_back(norm2(c));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double smallest_singular_value(const DenseMatrix& a) {
  require_square(a, "smallest_singular_value");
  return singular_values(a).back();
}

double operator_norm(const DenseMatrix& a) {
  return singular_values(a).front();
}

double hs_norm(const DenseMatrix& a) {
  require_finite(a, "hs_norm");
  return norm2(a.data());
}

}  // namespace rvlab

#include <cmath>

#include "rvlab/linalg.hpp"

namespace rvlab {

namespace {

// Unit-modulus phase of z, 1 for z == 0.
Complex phase(Complex z) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex{1.0} : z / r;
}

}  // namespace

QrResult qr_decompose(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) {
    throw DimensionError("qr_decompose: needs rows >= cols, got " +
                         std::to_string(m) + "x" + std::to_string(n));
  }
  require_finite(a, "qr_decompose");

  // Column-major working copy: Householder steps touch whole columns.
  std::vector<Vector> cols(n, Vector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = a(i, j);

  std::vector<Vector> reflectors;  // v_k, stored from index k
  std::vector<bool> active(n, false);
  reflectors.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    Vector& x = cols[k];
    const double xnorm = norm2(std::span<const Complex>(x).subspan(k));
    Vector v(m);
    if (xnorm == 0.0) {
      reflectors.push_back(std::move(v));
      continue;
    }
    const Complex alpha = -phase(x[k]) * xnorm;
    for (std::size_t i = k; i < m; ++i) v[i] = x[i];
    v[k] -= alpha;
    const double vnorm = norm2(std::span<const Complex>(v).subspan(k));
    if (vnorm == 0.0) {
      reflectors.push_back(std::move(v));
      continue;
    }
    for (std::size_t i = k; i < m; ++i) v[i] /= vnorm;
    active[k] = true;

    // H = I - 2 v v^*, applied to the trailing columns.
    for (std::size_t j = k; j < n; ++j) {
      Complex s{};
      for (std::size_t i = k; i < m; ++i) s += std::conj(v[i]) * cols[j][i];
      s *= 2.0;
      for (std::size_t i = k; i < m; ++i) cols[j][i] -= s * v[i];
    }
    reflectors.push_back(std::move(v));
  }

  QrResult out{DenseMatrix(m, n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) out.r(i, j) = cols[j][i];

  // Q = H_0 H_1 ... H_{n-1} applied to the first n unit vectors.
  std::vector<Vector> q(n, Vector(m));
  for (std::size_t j = 0; j < n; ++j) q[j][j] = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    if (!active[kk]) continue;
    const Vector& v = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t i = kk; i < m; ++i) s += std::conj(v[i]) * q[j][i];
      if (s == Complex{}) continue;
      s *= 2.0;
      for (std::size_t i = kk; i < m; ++i) q[j][i] -= s * v[i];
    }
  }

  // Absorb diagonal phases so that R has a real non-negative diagonal.
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ph = phase(out.r(k, k));
    if (ph == Complex{1.0}) continue;
    const Complex ph_conj = std::conj(ph);
    for (std::size_t j = k; j < n; ++j) out.r(k, j) *= ph_conj;
    out.r(k, k) = Complex(std::abs(out.r(k, k)), 0.0);
    for (std::size_t i = 0; i < m; ++i) q[k][i] *= ph;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out.q(i, j) = q[j][i];
  return out;
}

}  // namespace rvlab

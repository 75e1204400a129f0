#pragma once

// Test-only statistical and numerical oracles. Nothing here calls into the
// library's samplers or kernels, so they can judge them independently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace rvlab::oracle {

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS p-value (Stephens' small-sample correction).
inline double ks_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

/// Two-sample KS p-value.
inline double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Mean and unbiased variance.
inline std::pair<double, double> moments(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return {m, v / static_cast<double>(xs.size() - 1)};
}

/// Smallest singular value of a 2x2 complex matrix by the closed form for
/// the eigenvalues of A^*A: s^2 = (h - sqrt(h^2 - 4|det|^2)) / 2, h = ||A||_HS^2.
inline double smin_2x2(std::complex<double> a, std::complex<double> b,
                       std::complex<double> c, std::complex<double> d) {
  const double h = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::abs(a * d - b * c);
  // Stable form: s_min^2 = 2 |det|^2 / (h + sqrt(h^2 - 4|det|^2)).
  const double disc = std::sqrt(std::max(0.0, h * h - 4.0 * det * det));
  return std::sqrt(2.0 * det * det / (h + disc));
}

/// Brute-force determinant by cofactor expansion (n <= 8).
inline std::complex<double> det_cofactor(const std::vector<std::vector<std::complex<double>>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::complex<double> acc{};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<std::complex<double>>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::complex<double>> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    acc += (j % 2 == 0 ? 1.0 : -1.0) * m[0][j] * det_cofactor(minor);
  }
  return acc;
}

}  // namespace rvlab::oracle

namespace rvlab::oracle {

using CMat = std::vector<std::vector<std::complex<double>>>;

/// Gauss-Jordan inverse with full row pivoting.
inline CMat inverse_gj(CMat a) {
  const std::size_t n = a.size();
  CMat inv(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const auto d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const auto f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Unitary polar factor by the Newton iteration X <- (X + X^{-*}) / 2.
inline CMat polar_newton(CMat x) {
  const std::size_t n = x.size();
  for (int it = 0; it < 100; ++it) {
    const CMat inv = inverse_gj(x);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto next = 0.5 * (x[i][j] + std::conj(inv[j][i]));
        change = std::max(change, std::abs(next - x[i][j]));
        x[i][j] = next;
      }
    if (change < 1e-15) break;
  }
  return x;
}

}  // namespace rvlab::oracle

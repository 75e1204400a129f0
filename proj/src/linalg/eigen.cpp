#include <algorithm>
#include <cmath>
#include <limits>

#include "rvlab/linalg.hpp"

namespace rvlab {

namespace {

// Parlett-Reinsch balancing by powers of two; similarity, spectrum unchanged.
void balance(DenseMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

struct Givens {
  double c = 1.0;
  Complex s{};
};

// [c s; -conj(s) c] [x; y] = [r; 0]
Givens make_givens(Complex x, Complex y) {
  const double ay = std::abs(y);
  if (ay == 0.0) return {};
  const double ax = std::abs(x);
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double nrm = std::hypot(ax, ay);
  return {ax / nrm, (x / ax) * std::conj(y) / nrm};
}

void rotate_rows(DenseMatrix& h, const Givens& g, std::size_t p, std::size_t q,
                 std::size_t j0, std::size_t j1) {
  for (std::size_t j = j0; j <= j1; ++j) {
    const Complex a = h(p, j);
    const Complex b = h(q, j);
    h(p, j) = g.c * a + g.s * b;
    h(q, j) = -std::conj(g.s) * a + g.c * b;
  }
}

void rotate_cols(DenseMatrix& h, const Givens& g, std::size_t p, std::size_t q,
                 std::size_t i0, std::size_t i1) {
  const Complex s_conj = std::conj(g.s);
  for (std::size_t i = i0; i <= i1; ++i) {
    const Complex a = h(i, p);
    const Complex b = h(i, q);
    h(i, p) = a * g.c + b * s_conj;
    h(i, q) = -a * g.s + b * g.c;
  }
}

// Eigenvalue of the 2x2 block [a b; c d] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_diff = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_diff * half_diff + b * c);
  const Complex mid = 0.5 * (a + d);
  const Complex l1 = mid + disc;
  const Complex l2 = mid - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

Complex Spectrum::product() const {
  Complex p{1.0};
  for (const auto& z : eigenvalues) p *= z;
  return p;
}

DenseMatrix hessenberg(const DenseMatrix& a) {
  require_square(a, "hessenberg");
  const std::size_t n = a.rows();
  DenseMatrix h = a;
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    {
      double scale = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(h(i, k)));
      if (scale == 0.0) continue;
      double sum = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) sum += std::norm(h(i, k) / scale);
      xnorm = scale * std::sqrt(sum);
    }
    const Complex x0 = h(k + 1, k);
    const double ax0 = std::abs(x0);
    const Complex ph = ax0 == 0.0 ? Complex{1.0} : x0 / ax0;
    const Complex alpha = -ph * xnorm;
    std::fill(v.begin(), v.end(), Complex{});
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // Left: H <- (I - 2vv^*) H on rows k+1..n-1.
    for (std::size_t j = k; j < n; ++j) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    // Right: H <- H (I - 2vv^*) on columns k+1..n-1.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
  }
  return h;
}

Spectrum eigenvalues(const DenseMatrix& a, const EigenOptions& options) {
  require_square(a, "eigenvalues");
  require_finite(a, "eigenvalues");
  const std::size_t n = a.rows();
  if (n == 0) throw DimensionError("eigenvalues: empty matrix");

  DenseMatrix work = a;
  if (options.balance) balance(work);
  DenseMatrix h = hessenberg(work);

  const double hnorm = hs_norm(h);
  const double tiny = std::numeric_limits<double>::epsilon() * hnorm;
  const long max_iter = static_cast<long>(options.iterations_per_dimension) *
                        static_cast<long>(n);

  std::vector<Complex> eig(n);
  std::vector<bool> found(n, false);
  long total_iter = 0;
  int iter_since_deflation = 0;
  std::size_t iu = n - 1;

  while (true) {
    // Zero negligible subdiagonals in the active range.
    for (std::size_t i = iu; i > 0; --i) {
      const double scale = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
      const double bound = scale > 0.0 ? options.deflation_tolerance * scale : tiny;
      if (std::abs(h(i, i - 1)) <= bound) h(i, i - 1) = Complex{};
    }
    // Deflate converged trailing 1x1 blocks.
    while (iu > 0 && h(iu, iu - 1) == Complex{}) {
      eig[iu] = h(iu, iu);
      found[iu] = true;
      --iu;
      iter_since_deflation = 0;
    }
    if (iu == 0) {
      eig[0] = h(0, 0);
      found[0] = true;
      break;
    }
    std::size_t il = iu - 1;
    while (il > 0 && h(il, il - 1) != Complex{}) --il;

    if (total_iter >= max_iter) {
      Spectrum partial;
      for (std::size_t i = 0; i < n; ++i)
        if (found[i]) partial.eigenvalues.push_back(eig[i]);
      throw EigenConvergenceError(
          "eigenvalues: QR iteration cap (" + std::to_string(max_iter) +
              ") reached with " + std::to_string(partial.size()) + " of " +
              std::to_string(n) + " eigenvalues deflated",
          std::move(partial));
    }
    ++total_iter;
    ++iter_since_deflation;

    Complex shift;
    if (iter_since_deflation == 10 || iter_since_deflation == 30) {
      // Exceptional shift to break cycles.
      shift = Complex(std::abs(h(iu, iu - 1).real()) +
                          (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0),
                      0.0) +
              h(iu, iu);
    } else {
      shift = wilkinson_shift(h(iu - 1, iu - 1), h(iu - 1, iu), h(iu, iu - 1),
                              h(iu, iu));
    }

    // Implicit single-shift QR sweep restricted to the active block [il, iu].
    Givens g = make_givens(h(il, il) - shift, h(il + 1, il));
    rotate_rows(h, g, il, il + 1, il, iu);
    rotate_cols(h, g, il, il + 1, il, std::min(il + 2, iu));
    for (std::size_t k = il + 1; k < iu; ++k) {
      g = make_givens(h(k, k - 1), h(k + 1, k - 1));
      rotate_rows(h, g, k, k + 1, k - 1, iu);
      h(k + 1, k - 1) = Complex{};
      rotate_cols(h, g, k, k + 1, il, std::min(k + 2, iu));
    }
  }
  return Spectrum{std::move(eig)};
}

}  // namespace rvlab

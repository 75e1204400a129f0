#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

namespace {

struct MinorInverse {
  DenseMatrix inverse;
  double norm = 0.0;     // ||Hbar^-1||
  double hs = 0.0;       // ||Hbar^-1||_HS
};

MinorInverse invert_minor(const DenseMatrix& hbar, const char* what) {
  const SvdResult f = svd(hbar);
  if (!(f.smallest() > 0.0)) throw SingularMatrixError(std::string(what) + ": minor is singular");
  const std::size_t m = hbar.rows();
  MinorInverse r;
  r.inverse = DenseMatrix(m, m);
  double hs2 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double inv = 1.0 / f.singular_values[k];
    hs2 += inv * inv;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        r.inverse(i, j) += f.right(i, k) * inv * std::conj(f.left(j, k));
  }
  r.norm = 1.0 / f.smallest();
  r.hs = std::sqrt(hs2);
  return r;
}

Vector concat(std::span<const Complex> head, double head_weight, std::span<const Complex> tail,
              double tail_weight) {
  Vector x;
  x.reserve(head.size() + tail.size());
  for (auto z : head) x.push_back(head_weight * z);
  for (auto z : tail) x.push_back(tail_weight * z);
  return x;
}

Vector normalized(Vector v) {
  const double s = norm2(v);
  if (s > 0.0)
    for (auto& z : v) z /= s;
  return v;
}

double head_norm2(std::span<const Complex> x, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::norm(x[i]);
  return s;
}

// Unit vector whose first k coordinates carry squared mass >= 1/n. One in
// four draws sits exactly on the boundary of that set.
Vector sample_head_heavy(std::size_t n, std::size_t k, std::uint64_t index, RngStream& rng) {
  const double floor = 1.0 / static_cast<double>(n);
  const double r2 = index % 4 == 0 ? floor : rng.uniform(floor, 1.0);
  const Vector head = detail::random_unit(k, rng);
  const Vector tail = detail::random_unit(n - k, rng);
  return concat(head, std::sqrt(r2), tail, std::sqrt(1.0 - r2));
}

// Pushes x into the head-heavy set: unchanged when already inside, else the
// head is rescaled to squared mass exactly 1/n.
Vector clamp_to_head_set(const Vector& x, std::size_t k) {
  const std::size_t n = x.size();
  const double floor = 1.0 / static_cast<double>(n);
  const double h2 = head_norm2(x, k);
  if (h2 >= floor) return x;
  Vector head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  Vector tail(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
  if (norm2(head) == 0.0) head[0] = 1.0;
  if (norm2(tail) == 0.0) tail[0] = 1.0;
  return concat(normalized(head), std::sqrt(floor), normalized(tail), std::sqrt(1.0 - floor));
}

}  // namespace

LemmaReport verify_well_invertible_minor(const BlockMatrix2& h, double L1, double L2,
                                         std::uint64_t samples, RngStream& rng) {
  h.validate();
  if (h.k() != 3) throw DimensionError("well-invertible minor: top-left block must be 3 x 3");
  const std::size_t n = h.n();
  const MinorInverse inv = invert_minor(h.bottom_right, "well-invertible minor");
  const double y_norm = operator_norm(h.top_right);
  if (inv.norm > L1 * (1.0 + 1e-12) || y_norm > L2 * (1.0 + 1e-12)) {
    throw PreconditionError("well-invertible minor: need ||Hbar^-1|| <= L1 and ||Y|| <= L2 (got " +
                            detail::fmt(inv.norm) + ", " + detail::fmt(y_norm) + ")");
  }
  const DenseMatrix schur = h.top_left - h.top_right * inv.inverse * h.bottom_left;
  const SvdResult fs = svd(schur);
  const double bound = fs.smallest() / (std::sqrt(static_cast<double>(n)) * (1.0 + L1 * L2));
  const DenseMatrix full = h.assemble();
  const double tol = 1e-12 * operator_norm(full);

  std::vector<Vector> candidates;
  const Vector u = fs.right.column(2);
  const Vector zeros(n - 3);
  candidates.push_back(concat(u, 1.0, zeros, 0.0));
  Vector xbar = inv.inverse * (h.bottom_left * std::span<const Complex>(u));
  for (auto& z : xbar) z = -z;
  candidates.push_back(clamp_to_head_set(normalized(concat(u, 1.0, xbar, 1.0)), 3));
  candidates.push_back(clamp_to_head_set(svd(full).right.column(n - 1), 3));

  double worst = std::numeric_limits<double>::infinity();
  double worst_norm = 0.0;
  std::uint64_t bad = 0;
  auto check = [&](const Vector& x) {
    const double hx = norm2(full * std::span<const Complex>(x));
    const double slack = hx - bound;
    if (slack < -tol) ++bad;
    if (slack < worst) {
      worst = slack;
      worst_norm = hx;
    }
  };
  for (const auto& x : candidates) check(x);
  for (std::uint64_t s = 0; s < samples; ++s) check(sample_head_heavy(n, 3, s, rng));

  LemmaReport r;
  r.lemma_id = "well-invertible-minor";
  r.record(bad > 0, worst,
           {{"n", static_cast<double>(n)}, {"bound", bound}, {"min_norm_Hx", worst_norm},
            {"L1", L1}, {"L2", L2}},
           bad > 0 ? "n=" + std::to_string(n) + " violating_x=" + std::to_string(bad) +
                         " bound=" + detail::fmt(bound) + " min=" + detail::fmt(worst_norm)
                   : std::string{});
  return r;
}

LemmaReport verify_well_invertible_minor_random(std::size_t n, std::uint64_t instances,
                                                std::uint64_t samples, const RngStream& rng,
                                                const MonteCarloOptions& options) {
  if (n < 4) throw PreconditionError("well-invertible minor: need n >= 4");
  const auto parts = parallel_map(instances, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const BlockMatrix2 h = BlockMatrix2::split(gaussian_complex_matrix(n, n, stream), 3);
    const double L1 = 1.0 / smallest_singular_value(h.bottom_right);
    const double L2 = operator_norm(h.top_right);
    return verify_well_invertible_minor(h, L1, L2, samples, stream);
  });
  return detail::merge_reports("well-invertible-minor", parts);
}

double small_ball_frequency(const DenseMatrix& m, std::span<const Complex> nu, double epsilon,
                            double t, std::uint64_t draws, RngStream& rng) {
  require_finite(m, "small_ball_frequency");
  if (nu.size() != m.cols()) throw DimensionError("small_ball_frequency: nu length must match M");
  if (draws == 0) throw PreconditionError("small_ball_frequency: draws must be >= 1");
  const double threshold = t * epsilon * hs_norm(m);
  std::uint64_t hits = 0;
  Vector x(nu.size());
  for (std::uint64_t d = 0; d < draws; ++d) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = nu[i] + epsilon * rng.normal();
    if (norm2(m * std::span<const Complex>(x)) <= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

LemmaReport verify_poorly_invertible_minor(const BlockMatrix2& h, double t, double epsilon,
                                           double L, std::uint64_t draws,
                                           std::uint64_t samples_per_draw, RngStream& rng) {
  h.validate();
  if (h.k() != 1) throw DimensionError("poorly-invertible minor: top-left block must be 1 x 1");
  if (!(t > 0.0) || !(epsilon > 0.0) || !(L > 0.0)) {
    throw PreconditionError("poorly-invertible minor: t, epsilon and L must be positive");
  }
  const std::size_t n = h.n();
  const MinorInverse inv = invert_minor(h.bottom_right, "poorly-invertible minor");
  if (inv.norm < L * (1.0 - 1e-12)) {
    throw PreconditionError("poorly-invertible minor: need ||Hbar^-1|| >= L (got " +
                            detail::fmt(inv.norm) + ")");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double bound = t * epsilon / sqrt_n - 1.0 / L;
  const double premise = t * epsilon * inv.hs;
  const Vector nu = h.bottom_left.column(0);

  LemmaReport r;
  r.lemma_id = "poorly-invertible-minor";
  DenseMatrix full = h.assemble();
  const double tol = 1e-12 * (1.0 + operator_norm(full));
  Vector x_col(n - 1);
  for (std::uint64_t d = 0; d < draws; ++d) {
    for (std::size_t i = 0; i < n - 1; ++i) x_col[i] = nu[i] + epsilon * rng.normal();
    const Vector hinv_x = inv.inverse * std::span<const Complex>(x_col);
    if (!(norm2(hinv_x) > premise)) {
      r.skip();
      continue;
    }
    for (std::size_t i = 0; i < n - 1; ++i) full(i + 1, 0) = x_col[i];

    double worst = std::numeric_limits<double>::infinity();
    auto check = [&](const Vector& x) {
      worst = std::min(worst, norm2(full * std::span<const Complex>(x)) - bound);
    };
    // Boundary point |x_0| = 1/sqrt(n) with the tail aligned against Hbar^-1 X.
    const Vector tail = normalized(hinv_x);
    Vector aligned = concat(Vector{Complex(1.0)}, 1.0 / sqrt_n, tail, -std::sqrt(1.0 - 1.0 / n));
    check(aligned);
    check(clamp_to_head_set(svd(full).right.column(n - 1), 1));
    for (std::uint64_t s = 0; s < samples_per_draw; ++s) check(sample_head_heavy(n, 1, s, rng));

    const bool violated = worst < -tol;
    r.record(violated, worst,
             {{"n", static_cast<double>(n)}, {"t", t}, {"epsilon", epsilon}, {"L", L},
              {"bound", bound}},
             violated ? "draw=" + std::to_string(d) + " slack=" + detail::fmt(worst)
                      : std::string{});
  }
  return r;
}

LemmaReport verify_poorly_invertible_minor_random(std::size_t n, std::uint64_t instances,
                                                  std::uint64_t draws_per_instance,
                                                  std::uint64_t samples_per_draw, double t,
                                                  double epsilon, const RngStream& rng,
                                                  const MonteCarloOptions& options) {
  if (n < 2) throw PreconditionError("poorly-invertible minor: need n >= 2");
  const auto parts = parallel_map(instances, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    BlockMatrix2 h = BlockMatrix2::split(gaussian_complex_matrix(n, n, stream), 1);
    // Planted s_min(Hbar) in [1e-5, 1e-3] keeps t eps / sqrt(n) - 1/L positive
    // for the default t = 0.01, eps = 1, n = 10.
    h.bottom_right =
        detail::with_smallest_singular_value(h.bottom_right, std::pow(10.0, stream.uniform(-5.0, -3.0)));
    const double L = 1.0 / smallest_singular_value(h.bottom_right);
    return verify_poorly_invertible_minor(h, t, epsilon, L, draws_per_instance, samples_per_draw,
                                          stream);
  });
  return detail::merge_reports("poorly-invertible-minor", parts);
}

}  // namespace rvlab

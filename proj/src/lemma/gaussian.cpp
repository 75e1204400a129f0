#include <cmath>
#include <numbers>

#include "common.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

namespace {

bool monotone(const TailEstimate& est) {
  for (std::size_t i = 1; i < est.hits.size(); ++i)
    if (est.hits[i] < est.hits[i - 1]) return false;
  return true;
}

StatisticalReport decay_report(const std::string& id, TailEstimate tail, double decay_threshold,
                               std::map<std::string, double> context) {
  StatisticalReport out;
  out.report.lemma_id = id;
  const double p0 = tail.p_hat.front();
  const bool ok = monotone(tail) && p0 <= decay_threshold;
  context["t_min"] = tail.t_grid.front();
  context["p_hat_min"] = p0;
  context["ci_high_min"] = tail.ci_high.front();
  context["trials"] = static_cast<double>(tail.trials);
  out.report.record(!ok, decay_threshold - p0, std::move(context),
                    ok ? std::string{}
                       : "p_hat(" + detail::fmt(tail.t_grid.front()) + ")=" + detail::fmt(p0) +
                             " exceeds " + detail::fmt(decay_threshold));
  try {
    out.fit = fit_tail_exponent(tail);
  } catch (const PreconditionError&) {
    out.fit.reset();
  }
  out.tail = std::move(tail);
  return out;
}

}  // namespace

DenseMatrix GaussianLinearMap::apply(std::span<const double> z) const {
  if (z.size() != m()) throw DimensionError("GaussianLinearMap: argument length must equal m");
  DenseMatrix out(3, 3);
  for (std::size_t r = 0; r < 9; ++r) {
    Complex acc{};
    for (std::size_t k = 0; k < z.size(); ++k) acc += coeffs(r, k) * z[k];
    out(r / 3, r % 3) = acc;
  }
  return out;
}

double GaussianLinearMap::operator_bound() const {
  if (coeffs.rows() != 9) throw DimensionError("GaussianLinearMap: need 9 coefficient rows");
  DenseMatrix real(18, m());
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t k = 0; k < m(); ++k) {
      real(2 * r, k) = coeffs(r, k).real();
      real(2 * r + 1, k) = coeffs(r, k).imag();
    }
  }
  return operator_norm(real);
}

GaussianLinearMap GaussianLinearMap::random(std::size_t m, double K, RngStream& rng) {
  if (m == 0) throw PreconditionError("GaussianLinearMap: need m >= 1");
  GaussianLinearMap f{gaussian_complex_matrix(9, m, rng)};
  f.coeffs *= Complex(K / f.operator_bound());
  return f;
}

StatisticalReport verify_gaussian_perturbation(const GaussianLinearMap& f,
                                               std::span<const double> t_grid,
                                               std::uint64_t trials, const RngStream& rng,
                                               const MonteCarloOptions& options,
                                               double decay_threshold) {
  if (t_grid.empty()) throw PreconditionError("gaussian perturbation: empty t grid");
  if (trials == 0) throw PreconditionError("gaussian perturbation: trials must be >= 1");
  const double K = f.operator_bound();
  const auto samples = parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    std::vector<double> z(f.m());
    for (auto& v : z) v = stream.normal();
    DenseMatrix a = f.apply(z);
    a += DenseMatrix::identity(3);
    return smallest_singular_value(a);
  });
  return decay_report("gaussian-perturbation", tail_from_samples(samples, t_grid, Ensemble::unitary),
                      decay_threshold, {{"K", K}, {"m", static_cast<double>(f.m())}});
}

StatisticalReport verify_breaking_orthogonality(const DenseMatrix& t_matrix,
                                                const DiagonalMatrix& d,
                                                std::span<const double> t_grid,
                                                std::uint64_t trials, const RngStream& rng,
                                                const MonteCarloOptions& options,
                                                double decay_threshold) {
  const std::size_t n = d.size();
  if (n != 2 && n != 3) throw DimensionError("breaking orthogonality: need n in {2, 3}");
  require_square(t_matrix, "breaking orthogonality");
  if (t_matrix.rows() != n) throw DimensionError("breaking orthogonality: T and D sizes differ");
  if (t_grid.empty()) throw PreconditionError("breaking orthogonality: empty t grid");
  if (trials == 0) throw PreconditionError("breaking orthogonality: trials must be >= 1");
  const double delta = std::abs(d.diag[0] * d.diag[0] - d.diag[1] * d.diag[1]);
  if (!(delta > 0.0)) {
    throw PreconditionError("breaking orthogonality: |d1^2 - d2^2| = 0, assumption delta > 0 fails");
  }
  const DenseMatrix dd = d.dense();
  const auto samples = parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const DenseMatrix q = n == 2 ? rotation2(stream.uniform(0.0, 2.0 * std::numbers::pi))
                                 : hurwitz_so3(stream);
    const DenseMatrix b = t_matrix * q * dd * q.transpose();
    const double nb = operator_norm(b);
    return complex_orthogonality_defect(b) / (nb * nb);
  });
  double K = operator_norm(t_matrix);
  for (auto z : d.diag) K = std::max(K, std::abs(z));
  return decay_report("breaking-orthogonality",
                      tail_from_samples(samples, t_grid, Ensemble::special_orthogonal),
                      decay_threshold,
                      {{"n", static_cast<double>(n)}, {"delta", delta}, {"K", K}});
}

}  // namespace rvlab

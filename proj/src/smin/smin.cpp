#include <algorithm>
#include <cmath>
#include <string>

#include "rvlab/errors.hpp"
#include "rvlab/linalg.hpp"
#include "rvlab/parallel.hpp"
#include "rvlab/smin.hpp"

namespace rvlab {

double perturbed_smin(const DenseMatrix& d, Ensemble ensemble, RngStream& rng) {
  require_square(d, "perturbed_smin");
  DenseMatrix a = sample_haar(ensemble, d.rows(), rng);
  a += d;
  return smallest_singular_value(a);
}

double perturbed_smin(const DiagonalMatrix& d, Ensemble ensemble, RngStream& rng) {
  DenseMatrix a = sample_haar(ensemble, d.size(), rng);
  for (std::size_t i = 0; i < d.size(); ++i) a(i, i) += d.diag[i];
  return smallest_singular_value(a);
}

std::vector<double> perturbed_smin_samples(const DenseMatrix& d,
                                           Ensemble ensemble,
                                           std::uint64_t trials,
                                           const RngStream& rng,
                                           const MonteCarloOptions& options) {
  require_square(d, "tail_estimate");
  require_finite(d, "tail_estimate");
  if (trials == 0) throw PreconditionError("tail_estimate: trials must be >= 1");
  return parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    return perturbed_smin(d, ensemble, stream);
  });
}

TailEstimate tail_estimate(const DenseMatrix& d, Ensemble ensemble,
                           std::span<const double> t_grid, std::uint64_t trials,
                           const RngStream& rng,
                           const MonteCarloOptions& options) {
  if (t_grid.empty()) throw PreconditionError("tail_estimate: empty t grid");
  const auto samples = perturbed_smin_samples(d, ensemble, trials, rng, options);
  return tail_from_samples(samples, t_grid, ensemble);
}

AssumptionReport check_assumptions(const DiagonalMatrix& d, double K,
                                   double delta) {
  if (d.diag.empty()) throw PreconditionError("check_assumptions: empty diagonal");
  AssumptionReport r;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double mod = std::abs(d.diag[i]);
    r.K_observed = std::max(r.K_observed, mod);
    // Singular values of a diagonal matrix are the moduli of its entries.
    r.dist_to_orthogonal = std::max(r.dist_to_orthogonal, std::abs(mod - 1.0));
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Complex diff = d.diag[i] * d.diag[i] - d.diag[j] * d.diag[j];
      r.delta_sq_observed = std::max(r.delta_sq_observed, std::abs(diff));
    }
  }
  r.passes_thm13 = r.K_observed <= K && r.delta_sq_observed >= delta;
  r.passes_thm12 = r.K_observed <= K && r.dist_to_orthogonal >= delta;
  return r;
}

DenseMatrix counterexample_matrix(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw PreconditionError("counterexample_matrix: M must be positive and finite");
  }
  return DenseMatrix{{Complex(M, 0.0), Complex(0.0, M)},
                     {Complex(0.0, M), Complex(-M, 0.0)}};
}

}  // namespace rvlab

#include <cmath>

#include "rvlab/parallel.hpp"
#include "rvlab/single_ring.hpp"

namespace rvlab {

Spectrum sample_single_ring(const DiagonalMatrix& d, Field field, RngStream& rng) {
  const RealMeasure mu = singular_measure(d);
  const std::size_t n = mu.size();
  const Ensemble e = field == Field::complex ? Ensemble::unitary : Ensemble::orthogonal;
  DenseMatrix u = sample_haar(e, n, rng);
  const DenseMatrix v = sample_haar(e, n, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) *= mu.atoms[j];
  return eigenvalues(u * v);
}

std::vector<Spectrum> sample_single_ring_trials(const DiagonalMatrix& d, Field field,
                                                std::uint64_t trials, const RngStream& rng,
                                                const MonteCarloOptions& options) {
  singular_measure(d);
  return parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    return sample_single_ring(d, field, stream);
  });
}

AnnulusReport annulus_coverage(std::span<const Complex> eigenvalues, double a, double b,
                               double margin, std::optional<GapInterval> gap) {
  if (!(a <= b)) throw PreconditionError("annulus_coverage: need a <= b");
  if (!(margin >= 0.0)) throw PreconditionError("annulus_coverage: margin must be non-negative");
  AnnulusReport r;
  r.a = a;
  r.b = b;
  r.margin = margin;
  r.gap = gap.value_or(GapInterval{a + (b - a) / 3.0, a + 2.0 * (b - a) / 3.0});
  r.count = eigenvalues.size();
  if (eigenvalues.empty()) return r;
  std::size_t below = 0;
  std::size_t above = 0;
  std::size_t in_gap = 0;
  for (const Complex& z : eigenvalues) {
    const double m = std::abs(z);
    if (m < a - margin) {
      ++below;
    } else if (m > b + margin) {
      ++above;
    }
    if (m >= r.gap.lo && m <= r.gap.hi) ++in_gap;
  }
  const double n = static_cast<double>(eigenvalues.size());
  r.fraction_below_inner = static_cast<double>(below) / n;
  r.fraction_above_outer = static_cast<double>(above) / n;
  r.fraction_inside = static_cast<double>(eigenvalues.size() - below - above) / n;
  r.gap_occupancy = static_cast<double>(in_gap) / n;
  return r;
}

}  // namespace rvlab

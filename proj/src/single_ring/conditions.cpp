#include <algorithm>
#include <cmath>

#include "rvlab/parallel.hpp"
#include "rvlab/single_ring.hpp"

namespace rvlab {

SRConditionReport check_sr_conditions(const DiagonalMatrix& d, double M, double kappa,
                                      double kappa1, std::span<const Complex> z_grid,
                                      Sr2Measure measure) {
  const RealMeasure mu = singular_measure(d);
  if (z_grid.empty()) throw PreconditionError("check_sr_conditions: empty z grid");
  const double floor = std::pow(static_cast<double>(mu.size()), -kappa);
  for (const Complex& z : z_grid) {
    if (!(z.imag() >= floor)) {
      throw PreconditionError("check_sr_conditions: every z needs Im z >= n^-kappa");
    }
  }
  SRConditionReport r;
  r.M_bound = M;
  r.kappa = kappa;
  r.kappa1 = kappa1;
  r.max_atom = *std::max_element(mu.atoms.begin(), mu.atoms.end());
  r.sr1_pass = r.max_atom <= M;

  RealMeasure used = mu;
  if (measure == Sr2Measure::symmetrized) {
    used.atoms.reserve(2 * mu.size());
    for (double x : mu.atoms) used.atoms.push_back(-x);
    r.sr2_symmetrized = true;
  }
  for (const Complex& z : z_grid) {
    r.sr2_max_im = std::max(r.sr2_max_im, std::abs(stieltjes_transform(used, z).imag()));
  }
  r.sr2_pass = r.sr2_max_im <= kappa1;
  return r;
}

Sr3Estimate estimate_sr3_integral(const DiagonalMatrix& d, Complex z, double delta_exp,
                                  std::uint64_t trials, const RngStream& rng,
                                  const MonteCarloOptions& options, Field field) {
  const RealMeasure mu = singular_measure(d);
  if (trials == 0) throw PreconditionError("estimate_sr3_integral: trials must be >= 1");
  const std::size_t n = mu.size();
  const double threshold = std::pow(static_cast<double>(n), -delta_exp);
  const Ensemble e = field == Field::complex ? Ensemble::unitary : Ensemble::orthogonal;
  const auto values = parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    DenseMatrix a = sample_haar(e, n, stream);
    const DenseMatrix v = sample_haar(e, n, stream);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) *= mu.atoms[c];
    a = a * v;
    for (std::size_t k = 0; k < n; ++k) a(k, k) -= z;
    const double sigma = smallest_singular_value(a);
    if (!(sigma < threshold)) return 0.0;
    const double l = std::log(sigma);
    return l * l;
  });
  Sr3Estimate out;
  out.trials = trials;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    if (v != 0.0) ++out.fired;
  }
  out.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  }
  return out;
}

}  // namespace rvlab

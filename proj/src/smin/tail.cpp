#include <algorithm>
#include <cmath>
#include <string>

#include "rvlab/errors.hpp"
#include "rvlab/smin.hpp"

namespace rvlab {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The exact interval always contains p; clamp away rounding at p in {0, 1}.
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

TailEstimate tail_from_samples(std::span<const double> samples,
                               std::span<const double> t_grid,
                               Ensemble ensemble) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw PreconditionError("tail estimate: t grid must be strictly ascending and positive");
    }
  }
  TailEstimate est;
  est.ensemble = ensemble;
  est.trials = samples.size();
  est.t_grid.assign(t_grid.begin(), t_grid.end());
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  for (double t : t_grid) {
    const auto hits = static_cast<std::uint64_t>(
        std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    const Interval ci = wilson_interval(hits, est.trials);
    est.hits.push_back(hits);
    est.p_hat.push_back(est.trials == 0 ? 0.0
                                        : static_cast<double>(hits) /
                                              static_cast<double>(est.trials));
    est.ci_low.push_back(ci.low);
    est.ci_high.push_back(ci.high);
  }
  return est;
}

ExponentFit fit_tail_exponent(const TailEstimate& est) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ts;
  for (std::size_t i = 0; i < est.t_grid.size(); ++i) {
    const double p = est.p_hat[i];
    if (p > 0.0 && p < 1.0) {
      xs.push_back(std::log(est.t_grid[i]));
      ys.push_back(std::log(p));
      ts.push_back(est.t_grid[i]);
    }
  }
  if (xs.size() < 3) {
    throw PreconditionError("fit_tail_exponent: insufficient nondegenerate points (" +
                            std::to_string(xs.size()) + " with 0 < p_hat < 1, need 3)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.c_hat = sxy / sxx;
  fit.logC_hat = my - fit.c_hat * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.logC_hat + fit.c_hat * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.t_range_used = {ts.front(), ts.back()};
  return fit;
}

}  // namespace rvlab

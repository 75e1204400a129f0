#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rvlab/ensembles.hpp"
#include "rvlab/matrix.hpp"
#include "rvlab/rng.hpp"

namespace rvlab {

struct MonteCarloOptions {
  std::size_t threads = 1;
};

/// Two-sided Wilson score interval for a binomial proportion.
struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

/// Monte Carlo estimate of t -> P(s_min(D + U) <= t).
struct TailEstimate {
  std::vector<double> t_grid;
  std::vector<std::uint64_t> hits;
  std::uint64_t trials = 0;
  std::vector<double> p_hat;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  Ensemble ensemble = Ensemble::unitary;
};

/// Builds the cumulative threshold counts of `samples` on `t_grid`.
TailEstimate tail_from_samples(std::span<const double> samples,
                               std::span<const double> t_grid,
                               Ensemble ensemble);

struct ExponentFit {
  double c_hat = 0.0;
  double logC_hat = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> t_range_used{0.0, 0.0};
};

/// Smallest singular value of D + U for a single fresh Haar draw U.
double perturbed_smin(const DenseMatrix& d, Ensemble ensemble, RngStream& rng);
double perturbed_smin(const DiagonalMatrix& d, Ensemble ensemble, RngStream& rng);

/// Trial i uses rng.substream(i), so hit counts do not depend on scheduling.
TailEstimate tail_estimate(const DenseMatrix& d, Ensemble ensemble,
                           std::span<const double> t_grid, std::uint64_t trials,
                           const RngStream& rng,
                           const MonteCarloOptions& options = {});

/// Raw per-trial s_min samples behind tail_estimate, in trial order.
std::vector<double> perturbed_smin_samples(const DenseMatrix& d,
                                           Ensemble ensemble,
                                           std::uint64_t trials,
                                           const RngStream& rng,
                                           const MonteCarloOptions& options = {});

/// Least-squares fit log p = c log t + log C over grid points with
/// 0 < p_hat < 1. PreconditionError with fewer than three such points.
ExponentFit fit_tail_exponent(const TailEstimate& est);

struct AssumptionReport {
  double K_observed = 0.0;
  double delta_sq_observed = 0.0;
  double dist_to_orthogonal = 0.0;
  bool passes_thm13 = false;  // max|d_i| <= K and max|d_i^2 - d_j^2| >= delta
  bool passes_thm12 = false;  // max|d_i| <= K and max_i ||d_i| - 1| >= delta
};

AssumptionReport check_assumptions(const DiagonalMatrix& d, double K, double delta);

/// B = M [[1, i], [i, -1]]: B B^T = 0, yet det(B + U) = 1 on SO(2).
DenseMatrix counterexample_matrix(double M);

}  // namespace rvlab

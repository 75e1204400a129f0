#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rvlab/ensembles.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/linalg.hpp"
#include "rvlab/smin.hpp"

namespace rvlab {

/// Uniform empirical measure (1/count) sum delta_atom.
template <class T>
struct EmpiricalMeasure {
  std::vector<T> atoms;

  std::size_t size() const noexcept { return atoms.size(); }
  double weight() const noexcept { return 1.0 / static_cast<double>(atoms.size()); }
  void validate() const {
    if (atoms.empty()) throw PreconditionError("empirical measure: no atoms");
  }
};

using RealMeasure = EmpiricalMeasure<double>;
using ComplexMeasure = EmpiricalMeasure<Complex>;

/// mu_s of D: atoms d_i, which must be non-negative reals.
RealMeasure singular_measure(const DiagonalMatrix& d);

/// Eigenvalues of U D V with independent Haar U, V (unitary or orthogonal).
/// Throws PreconditionError on entries that are not non-negative reals.
Spectrum sample_single_ring(const DiagonalMatrix& d, Field field, RngStream& rng);

/// `trials` independent spectra; trial i uses rng.substream(i).
std::vector<Spectrum> sample_single_ring_trials(const DiagonalMatrix& d, Field field,
                                                std::uint64_t trials, const RngStream& rng,
                                                const MonteCarloOptions& options = {});

struct RingRadii {
  double a = 0.0;
  double b = 0.0;
};

/// a = (mean x^-2)^{-1/2} (0 when an atom is 0), b = (mean x^2)^{1/2}.
RingRadii ring_radii(const RealMeasure& mu);

struct GapInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct AnnulusReport {
  double a = 0.0;
  double b = 0.0;
  double margin = 0.0;
  double fraction_inside = 0.0;
  double fraction_below_inner = 0.0;
  double fraction_above_outer = 0.0;
  double gap_occupancy = 0.0;
  GapInterval gap;
  std::size_t count = 0;
};

/// Classifies |lambda| against [a - margin, b + margin]. gap_occupancy is the
/// fraction with |lambda| in `gap`, by default the middle third of (a, b).
AnnulusReport annulus_coverage(std::span<const Complex> eigenvalues, double a, double b,
                               double margin, std::optional<GapInterval> gap = std::nullopt);

inline constexpr double kAtomCollision = 1e-12;

/// Atom average of 1 / (z - x). Throws PreconditionError when z is within
/// 1e-12 of an atom.
Complex stieltjes_transform(const RealMeasure& mu, Complex z);

/// Atoms {s_k(A - zI)} followed by {-s_k(A - zI)}.
RealMeasure symmetrized_singular_measure(const DenseMatrix& a, Complex z);

enum class Sr2Measure { plain, symmetrized };

struct SRConditionReport {
  double M_bound = 0.0;
  double max_atom = 0.0;
  bool sr1_pass = false;
  double kappa = 0.0;
  double kappa1 = 0.0;
  double sr2_max_im = 0.0;
  bool sr2_pass = false;
  bool sr2_symmetrized = false;
  double sr3_estimate = std::numeric_limits<double>::quiet_NaN();
  double sr3_standard_error = std::numeric_limits<double>::quiet_NaN();
  double sr3_delta = std::numeric_limits<double>::quiet_NaN();
};

/// SR1: max_i d_i <= M. SR2: max over z_grid of |Im S(z)| <= kappa1 for mu_s
/// (or its symmetrization). Every z must have Im z >= n^-kappa.
SRConditionReport check_sr_conditions(const DiagonalMatrix& d, double M, double kappa,
                                      double kappa1, std::span<const Complex> z_grid,
                                      Sr2Measure measure = Sr2Measure::plain);

struct Sr3Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t fired = 0;  // trials with sigma_n(z) < n^-delta
};

/// Monte Carlo mean of 1{sigma_n(z) < n^-delta} log^2 sigma_n(z),
/// sigma_n(z) = s_min(U D V - z I).
Sr3Estimate estimate_sr3_integral(const DiagonalMatrix& d, Complex z, double delta_exp,
                                  std::uint64_t trials, const RngStream& rng,
                                  const MonteCarloOptions& options = {},
                                  Field field = Field::complex);

}  // namespace rvlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rvlab/ensembles.hpp"
#include "rvlab/matrix.hpp"
#include "rvlab/smin.hpp"

namespace rvlab {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Outcome of a lemma verification run.
///
/// `max_slack` is the worst signed margin seen over all checked instances:
/// rhs - lhs of the asserted inequality (relative for the Remez checks).
/// It is +inf until an instance is recorded. Instances whose hypothesis
/// fails are counted in `skipped` and never as passes.
struct LemmaReport {
  std::string lemma_id;
  std::uint64_t instances = 0;
  std::uint64_t skipped = 0;
  std::uint64_t violations = 0;
  double max_slack = std::numeric_limits<double>::infinity();
  std::map<std::string, double> worst_case;
  std::vector<std::string> details;  // one line per violation, capped

  bool passed() const noexcept { return violations == 0; }

  /// Counts one checked instance. `context` is kept when it is the worst so far.
  void record(bool violated, double slack, std::map<std::string, double> context = {},
              const std::string& detail = {});
  void skip() noexcept { ++skipped; }
  /// Sums counts and keeps the worse of the two worst cases.
  void merge(const LemmaReport& other);
};

inline constexpr std::size_t kMaxReportDetails = 20;

/// Statistical verifiers also return their tail estimate.
struct StatisticalReport {
  LemmaReport report;
  TailEstimate tail;
  std::optional<ExponentFit> fit;
};

/// Inclusive dimension range for randomized batches.
struct DimRange {
  std::size_t min = 2;
  std::size_t max = 2;
};

// ---------------------------------------------------------------------------
// Block matrices
// ---------------------------------------------------------------------------

/// [ top_left (k x k)        top_right (k x (n-k))        ]
/// [ bottom_left ((n-k) x k) bottom_right ((n-k) x (n-k)) ]
struct BlockMatrix2 {
  DenseMatrix top_left;
  DenseMatrix top_right;
  DenseMatrix bottom_left;
  DenseMatrix bottom_right;

  static BlockMatrix2 split(const DenseMatrix& a, std::size_t k);
  DenseMatrix assemble() const;
  std::size_t k() const noexcept { return top_left.rows(); }
  std::size_t n() const noexcept { return top_left.rows() + bottom_right.rows(); }
  /// Throws DimensionError when block shapes are inconsistent.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Perturbations of the identity
// ---------------------------------------------------------------------------

/// Nearest unitary W = U0 V0^* to W0 = I + eps S from the SVD of W0, checked
/// against ||W - W0|| <= 2 eps^2 ||S^2|| and W^* W = I. One instance;
/// skipped when eps^2 ||S^2|| > 1/4.
LemmaReport check_identity_perturbation(const DenseMatrix& s, double epsilon);

/// Complex field draws the bordered skew-Hermitian S; real field draws a
/// Gaussian skew-symmetric S (and additionally requires W to be real).
LemmaReport verify_identity_perturbation(DimRange dims, double epsilon,
                                         std::uint64_t trials, Field field,
                                         const RngStream& rng,
                                         const MonteCarloOptions& options = {});

// ---------------------------------------------------------------------------
// Quadratic form
// ---------------------------------------------------------------------------

/// Unit h with h^T A_i = 0 for i >= 2 (bilinear, no conjugation), from the
/// SVD of the transposed column block. Throws SingularMatrixError when the
/// block is rank deficient.
Vector null_covector(const DenseMatrix& a);

struct QuadraticFormValues {
  double via_covector = 0.0;   // |h^T A_1|
  double closed_form = 0.0;    // |A11 - X^T B^-1 Y| / sqrt(1 + ||B^-1 Y||^2)
  double relative_error = 0.0;
};

/// A = [[A11, Y^T], [X, B^T]] given as a k = 1 block matrix.
QuadraticFormValues evaluate_quadratic_form(const BlockMatrix2& a);

LemmaReport verify_quadratic_form(const BlockMatrix2& a, double tolerance = 1e-8);

/// Random complex instances; skipped when s_min(B) < min_relative_smin * ||B||.
LemmaReport verify_quadratic_form_random(DimRange dims, std::uint64_t instances,
                                         double tolerance, double min_relative_smin,
                                         const RngStream& rng,
                                         const MonteCarloOptions& options = {});

// ---------------------------------------------------------------------------
// Schur-complement bounds
// ---------------------------------------------------------------------------

/// Draws `samples` unit x with ||(x1,x2,x3)||^2 >= 1/n (plus a few structured
/// candidates) and checks ||Hx|| >= s_min(H0 - Y Hbar^-1 X) / (sqrt(n)(1 + L1 L2)).
/// Throws PreconditionError unless ||Hbar^-1|| <= L1 and ||Y|| <= L2.
LemmaReport verify_well_invertible_minor(const BlockMatrix2& h, double L1, double L2,
                                         std::uint64_t samples, RngStream& rng);

/// Random complex n x n instances with L1 = ||Hbar^-1||, L2 = ||Y||.
LemmaReport verify_well_invertible_minor_random(std::size_t n, std::uint64_t instances,
                                                std::uint64_t samples,
                                                const RngStream& rng,
                                                const MonteCarloOptions& options = {});

/// For each of `draws` X = nu + eps Z (nu = h.bottom_left, Z real Gaussian):
/// when ||Hbar^-1 X|| > t eps ||Hbar^-1||_HS, every sampled x in S_1 must
/// satisfy ||Hx|| >= t eps / sqrt(n) - 1/L. Draws where the premise fails are
/// skipped. Throws PreconditionError unless ||Hbar^-1|| >= L.
LemmaReport verify_poorly_invertible_minor(const BlockMatrix2& h, double t, double epsilon,
                                           double L, std::uint64_t draws,
                                           std::uint64_t samples_per_draw, RngStream& rng);

/// Random instances whose minor has a planted small singular value, so that
/// the bound t eps / sqrt(n) - 1/L is non-vacuous.
LemmaReport verify_poorly_invertible_minor_random(std::size_t n, std::uint64_t instances,
                                                  std::uint64_t draws_per_instance,
                                                  std::uint64_t samples_per_draw, double t,
                                                  double epsilon, const RngStream& rng,
                                                  const MonteCarloOptions& options = {});

/// Fraction of draws with ||M (nu + eps Z)|| <= t eps ||M||_HS, Z ~ N_R(0, I).
double small_ball_frequency(const DenseMatrix& m, std::span<const Complex> nu, double epsilon,
                            double t, std::uint64_t draws, RngStream& rng);

// ---------------------------------------------------------------------------
// Gaussian perturbations and random bases
// ---------------------------------------------------------------------------

/// Real-linear f: R^m -> C^{3x3}, vec(f(z)) = coeffs * z with row-major
/// vectorization (entry (i,j) is row 3i+j of the 9 x m coefficient matrix).
/// The 18 real coefficient vectors are the real and imaginary parts of its rows.
struct GaussianLinearMap {
  DenseMatrix coeffs;  // 9 x m

  std::size_t m() const noexcept { return coeffs.cols(); }
  DenseMatrix apply(std::span<const double> z) const;
  /// Smallest K with ||f(z)||_HS <= K ||z||.
  double operator_bound() const;
  /// Random map rescaled to operator_bound() == K.
  static GaussianLinearMap random(std::size_t m, double K, RngStream& rng);
};

/// Tail of s_min(I + f(Z)) on t_grid; a violation is a non-monotone tail or
/// p_hat > decay_threshold at the smallest t.
StatisticalReport verify_gaussian_perturbation(const GaussianLinearMap& f,
                                               std::span<const double> t_grid,
                                               std::uint64_t trials, const RngStream& rng,
                                               const MonteCarloOptions& options = {},
                                               double decay_threshold = 0.05);

/// Tail of ||B B^T - I|| / ||B||^2 for B = T Q D Q^T, Q Haar in SO(n), n in {2,3}.
/// Throws PreconditionError when |d1^2 - d2^2| = 0.
StatisticalReport verify_breaking_orthogonality(const DenseMatrix& t_matrix,
                                                const DiagonalMatrix& d,
                                                std::span<const double> t_grid,
                                                std::uint64_t trials, const RngStream& rng,
                                                const MonteCarloOptions& options = {},
                                                double decay_threshold = 0.05);

// ---------------------------------------------------------------------------
// Vanishing determinant and low dimensions
// ---------------------------------------------------------------------------

/// det(B + U(phi)) = k0 + k1 cos phi + k2 sin phi for U(phi) = rotation2(phi).
struct TrigCoefficients {
  Complex k0;
  Complex k1;
  Complex k2;
};

TrigCoefficients det_trig_coefficients(const DenseMatrix& b);

/// Max over a uniform phi grid of |det(B + U(phi)) - trig expansion|.
double det_trig_identity_error(const DenseMatrix& b, std::size_t grid = 64);

struct DeterminantScan {
  double sup_det = 0.0;      // max |det(B + U)| over the SO(n) grid
  double orth_defect = 0.0;  // ||B B^T - I||
  double norm = 0.0;         // ||B||
};

/// Deterministic SO(n) grid: `grid_size` angles for n = 2 (default 64), a
/// grid_size^3 Hurwitz product grid for n = 3 (default 16).
/// Throws PreconditionError when ||B|| < 1/2.
DeterminantScan vanishing_determinant_scan(const DenseMatrix& b, std::size_t grid_size = 0);

/// Random 2x2 B checked against the trig expansion within `tolerance`.
LemmaReport verify_det_trig_random(std::uint64_t instances, double tolerance,
                                   const RngStream& rng, const MonteCarloOptions& options = {});

/// Random B (n alternating 2, 3; ||B|| uniform in [1/2, 4]) checked against
/// orth_defect <= C sup_det ||B||.
LemmaReport verify_vanishing_determinant_random(std::uint64_t instances, double C,
                                                const RngStream& rng,
                                                const MonteCarloOptions& options = {});

/// ||B B^T - I|| >= delta ||B||^2 is required (PreconditionError otherwise,
/// naming the near complex-orthogonal regime); then a Haar O(n) tail estimate.
TailEstimate low_dim_theorem_check(const DenseMatrix& b, double delta,
                                   std::span<const double> t_grid, std::uint64_t trials,
                                   const RngStream& rng, const MonteCarloOptions& options = {});

/// ||B B^T - I||, the bilinear (complex-orthogonality) defect.
double complex_orthogonality_defect(const DenseMatrix& b);

// ---------------------------------------------------------------------------
// Remez-type inequalities
// ---------------------------------------------------------------------------

/// Real polynomial in `dim` variables, sum of coeff * prod x_i^e_i.
struct Polynomial {
  std::size_t dim = 1;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coeffs;

  double operator()(std::span<const double> x) const;
  int degree() const;
  /// All monomials of total degree <= degree with standard normal coefficients.
  static Polynomial random(std::size_t dim, int degree, RngStream& rng);
  static Polynomial constant(std::size_t dim, double value);
};

struct RemezEvaluation {
  double sup_whole = 0.0;
  double sup_subset = 0.0;
  double factor = 0.0;           // the inequality's multiplier
  double subset_measure = 0.0;   // |E|
  double required_constant = 0.0;  // smallest constant making it hold
  bool holds = false;
  double slack = 0.0;            // (factor sup_E - sup_V) / sup_V
};

inline constexpr double kDefaultRemezC1 = 4.0 * 3.14159265358979323846;

/// V = [-1,1]^dim, E = [-1, -1 + 2 f^{1/dim}]^dim (volume fraction f),
/// factor (4 dim |V| / |E|)^deg. Dense grid evaluation, dim in {1,2}.
RemezEvaluation remez_convex_evaluate(const Polynomial& p, double e_fraction);
LemmaReport remez_convex_check(int degree, std::size_t dim, double e_fraction,
                               std::uint64_t trials, const RngStream& rng,
                               const MonteCarloOptions& options = {});

/// S^m, m in {1,2}; E is an arc starting at angle 0 (m = 1) or a polar cap
/// around +e_z (m = 2) with |E| = e_fraction |S^m|; factor (C1/|E|)^{2 deg}.
RemezEvaluation remez_sphere_evaluate(const Polynomial& p, std::size_t m, double e_fraction,
                                      double C1 = kDefaultRemezC1);
LemmaReport remez_sphere_check(int degree, std::size_t m, double e_fraction,
                               std::uint64_t trials, double C1, const RngStream& rng,
                               const MonteCarloOptions& options = {});

/// T3 = S^1 x S^2 in R^5 with E = arc x cap; factor (C1/|E|)^{4 deg}.
RemezEvaluation remez_torus_evaluate(const Polynomial& p, double arc_fraction,
                                     double cap_fraction, double C1 = kDefaultRemezC1);
LemmaReport remez_torus_check(int degree, double arc_fraction, double cap_fraction,
                              std::uint64_t trials, double C1, const RngStream& rng,
                              const MonteCarloOptions& options = {});

// ---------------------------------------------------------------------------
// Named batch runs (CLI `lemma` / `verify-all`)
// ---------------------------------------------------------------------------

struct LemmaRunConfig {
  std::uint64_t instances = 0;  // 0 selects each lemma's default
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// Identifiers accepted by run_lemma, in verify-all order.
const std::vector<std::string>& lemma_ids();

/// Runs one named verifier with its default configuration.
LemmaReport run_lemma(const std::string& id, const LemmaRunConfig& config);

}  // namespace rvlab

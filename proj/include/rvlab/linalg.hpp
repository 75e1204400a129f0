#pragma once

#include <cstddef>
#include <vector>

#include "rvlab/errors.hpp"
#include "rvlab/matrix.hpp"

namespace rvlab {

// ---------------------------------------------------------------------------
// QR
// ---------------------------------------------------------------------------

struct QrResult {
  DenseMatrix q;  // rows x cols, orthonormal columns
  DenseMatrix r;  // cols x cols, upper triangular, real non-negative diagonal
};

/// Householder QR of a tall (rows >= cols) matrix.
///
/// The diagonal of R is made real and non-negative by absorbing its phases
/// into the columns of Q. With that convention the factorization of a
/// Ginibre matrix yields an exactly Haar-distributed Q.
QrResult qr_decompose(const DenseMatrix& a);

// ---------------------------------------------------------------------------
// SVD
// ---------------------------------------------------------------------------

struct SvdOptions {
  int max_sweeps = 60;
  /// A column pair counts as orthogonal once |a_p^* a_q| <= tol * |a_p||a_q|.
  double tolerance = 1e-13;
};

/// Thin SVD, A = left * diag(singular_values) * right^*.
///
/// For an m x n input with k = min(m, n): left is m x k, right is n x k, both
/// with orthonormal columns; singular values are sorted descending.
struct SvdResult {
  DenseMatrix left;
  std::vector<double> singular_values;
  DenseMatrix right;

  double smallest() const { return singular_values.back(); }
  double largest() const { return singular_values.front(); }
  DenseMatrix reconstruct() const;
};

/// One-sided (Hestenes) Jacobi SVD. Throws ConvergenceError when the sweep
/// limit is reached, NonFiniteError on NaN/Inf input.
SvdResult svd(const DenseMatrix& a, const SvdOptions& options = {});

/// Singular values only, descending. Same algorithm, no vector accumulation.
std::vector<double> singular_values(const DenseMatrix& a,
                                    const SvdOptions& options = {});

double smallest_singular_value(const DenseMatrix& a);

// ---------------------------------------------------------------------------
// Eigenvalues
// ---------------------------------------------------------------------------

struct EigenOptions {
  bool balance = true;
  /// Subdiagonal h(k+1,k) is zeroed once below tol * (|h(k,k)| + |h(k+1,k+1)|).
  double deflation_tolerance = 1e-13;
  /// Total QR iterations allowed, as a multiple of the dimension.
  int iterations_per_dimension = 50;
};

struct Spectrum {
  std::vector<Complex> eigenvalues;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  Complex product() const;
};

/// Raised when the QR iteration cap is hit; carries whatever was deflated.
class EigenConvergenceError : public ConvergenceError {
 public:
  EigenConvergenceError(const std::string& what, Spectrum partial)
      : ConvergenceError(what), partial_(std::move(partial)) {}

  const Spectrum& partial() const noexcept { return partial_; }

 private:
  Spectrum partial_;
};

/// Eigenvalues of a general square complex matrix: balancing, Householder
/// reduction to Hessenberg form, then single-shift complex QR with
/// Wilkinson shifts.
Spectrum eigenvalues(const DenseMatrix& a, const EigenOptions& options = {});

/// Reduces A to upper Hessenberg form by unitary similarity (exposed for tests).
DenseMatrix hessenberg(const DenseMatrix& a);

// ---------------------------------------------------------------------------
// Norms, determinant, solves
// ---------------------------------------------------------------------------

double operator_norm(const DenseMatrix& a);
double hs_norm(const DenseMatrix& a);

/// Determinant through LU with partial pivoting.
Complex determinant(const DenseMatrix& a);

struct SolveOptions {
  /// Fails when min|pivot| / max|pivot| falls below this ratio.
  double pivot_ratio_threshold = 1e-12;
};

/// Solves A x = b with partial pivoting; SingularMatrixError when the pivot
/// ratio indicates near-singularity.
Vector solve_linear(const DenseMatrix& a, std::span<const Complex> b,
                    const SolveOptions& options = {});

/// Solves A X = B column by column with a single factorization.
DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b,
                         const SolveOptions& options = {});

DenseMatrix inverse(const DenseMatrix& a, const SolveOptions& options = {});

}  // namespace rvlab

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rvlab/matrix.hpp"
#include "rvlab/rng.hpp"

namespace rvlab {

/// D = diag(d_1, ..., d_n) with complex entries.
struct DiagonalMatrix {
  std::vector<Complex> diag;

  std::size_t size() const noexcept { return diag.size(); }
  DenseMatrix dense() const { return DenseMatrix::diagonal(diag); }
};

DenseMatrix gaussian_real_matrix(std::size_t rows, std::size_t cols,
                                 RngStream& rng);
/// Entries (x + iy)/sqrt(2) with x, y independent standard normals.
DenseMatrix gaussian_complex_matrix(std::size_t rows, std::size_t cols,
                                    RngStream& rng);

// Haar samplers: QR of a Ginibre draw with R's diagonal forced real
// non-negative. Skipping that phase correction gives a non-Haar law.
DenseMatrix haar_unitary(std::size_t n, RngStream& rng);
DenseMatrix haar_orthogonal(std::size_t n, RngStream& rng);
/// Haar O(n) draw with the first row negated whenever det = -1.
DenseMatrix haar_special_orthogonal(std::size_t n, RngStream& rng);

/// Rz(alpha) * Ry(beta) * Rz(gamma): the rotation of the (x,y) plane by gamma
/// followed by the rotation carrying e_z to
/// (sin beta cos alpha, sin beta sin alpha, cos beta).
DenseMatrix hurwitz_rotation(double alpha, double beta, double gamma);

/// Haar SO(3) via the Hurwitz construction: gamma, alpha uniform on
/// [0, 2pi), cos(beta) uniform on [-1, 1].
DenseMatrix hurwitz_so3(RngStream& rng);

/// Rotation [[cos phi, sin phi], [-sin phi, cos phi]].
DenseMatrix rotation2(double phi);

/// Bordered skew-Hermitian perturbation
///   S = [ i s   -Z^T ]
///       [ Z      0   ]
/// with s ~ N(0,1), Z ~ N(0, I_{n-1}).
DenseMatrix skew_hermitian_bordered(std::size_t n, RngStream& rng);

/// Real S with i.i.d. standard normal entries above the diagonal and S^T = -S.
DenseMatrix gaussian_skew_symmetric(std::size_t n, RngStream& rng);

enum class Ensemble { unitary, orthogonal, special_orthogonal };

/// Scalar field of a model: complex (unitary groups) or real (orthogonal).
enum class Field { complex, real };

std::string_view to_string(Ensemble e) noexcept;
Ensemble parse_ensemble(std::string_view name);

/// One Haar draw from the named group.
DenseMatrix sample_haar(Ensemble ensemble, std::size_t n, RngStream& rng);

}  // namespace rvlab

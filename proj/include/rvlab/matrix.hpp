#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rvlab {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Dense complex matrix stored row-major.
///
/// This is the single carrier type for every matrix in the library: Haar
/// draws, perturbations, diagonal shifts and block pieces. Entries are
/// expected to be finite; operations that consume matrices check this at
/// their boundary rather than on every element write.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static DenseMatrix zeros(std::size_t rows, std::size_t cols);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<Complex> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const Complex> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> values);

  /// Conjugate transpose A*.
  DenseMatrix adjoint() const;
  /// Plain transpose A^T (no conjugation).
  DenseMatrix transpose() const;
  DenseMatrix conj() const;

  /// Copy of the r x c block whose top-left corner is (i0, j0).
  DenseMatrix block(std::size_t i0, std::size_t j0, std::size_t r,
                    std::size_t c) const;
  void set_block(std::size_t i0, std::size_t j0, const DenseMatrix& b);

  bool is_finite() const noexcept;
  /// True when every imaginary part is exactly zero.
  bool is_real() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(Complex s) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(Complex s, DenseMatrix a);
DenseMatrix operator*(DenseMatrix a, Complex s);
Vector operator*(const DenseMatrix& a, std::span<const Complex> x);

/// Largest absolute entry of A - B; shapes must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

double norm2(std::span<const Complex> x);
/// Bilinear product x^T y (no conjugation).
Complex dot_bilinear(std::span<const Complex> x, std::span<const Complex> y);
/// Sesquilinear product x^* y.
Complex dot(std::span<const Complex> x, std::span<const Complex> y);

/// Throws DimensionError unless the matrix is square.
void require_square(const DenseMatrix& a, const char* what);
/// Throws NonFiniteError on any NaN/Inf entry.
void require_finite(const DenseMatrix& a, const char* what);

}  // namespace rvlab

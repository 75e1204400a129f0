#include "rvlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rvlab/errors.hpp"

namespace rvlab {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("DenseMatrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
  return DenseMatrix(rows, cols);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const Complex> values) {
  if (values.size() != rows_) {
    throw DimensionError("set_column: length mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::conj() const {
  DenseMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t i0, std::size_t j0, std::size_t r,
                               std::size_t c) const {
  if (i0 + r > rows_ || j0 + c > cols_) {
    throw DimensionError("block: out of range");
  }
  DenseMatrix out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
  return out;
}

void DenseMatrix::set_block(std::size_t i0, std::size_t j0,
                            const DenseMatrix& b) {
  if (i0 + b.rows() > rows_ || j0 + b.cols() > cols_) {
    throw DimensionError("set_block: out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

bool DenseMatrix::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool DenseMatrix::is_real() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return z.imag() == 0.0; });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Complex s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }

DenseMatrix operator-(DenseMatrix a) {
  for (auto& z : a.data()) z = -z;
  return a;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("operator*: inner dimensions " +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()));
  }
  DenseMatrix out(a.rows(), b.cols());
  // i-k-j order keeps the inner loop on contiguous rows.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DenseMatrix operator*(Complex s, DenseMatrix a) { return a *= s; }
DenseMatrix operator*(DenseMatrix a, Complex s) { return a *= s; }

Vector operator*(const DenseMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) {
    throw DimensionError("matrix-vector: length mismatch");
  }
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    auto r = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
  return m;
}

double norm2(std::span<const Complex> x) {
  // Scaled accumulation avoids overflow for very large entries.
  double scale = 0.0;
  for (const auto& z : x) scale = std::max(scale, std::max(std::abs(z.real()), std::abs(z.imag())));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& z : x) {
    const double re = z.real() / scale;
    const double im = z.imag() / scale;
    sum += re * re + im * im;
  }
  return scale * std::sqrt(sum);
}

Complex dot_bilinear(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw DimensionError("dot_bilinear: length mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void require_square(const DenseMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
}

void require_finite(const DenseMatrix& a, const char* what) {
  if (!a.is_finite()) {
    throw NonFiniteError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace rvlab

#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

BlockMatrix2 BlockMatrix2::split(const DenseMatrix& a, std::size_t k) {
  require_square(a, "BlockMatrix2::split");
  const std::size_t n = a.rows();
  if (k == 0 || k >= n) throw DimensionError("BlockMatrix2::split: need 0 < k < n");
  return {a.block(0, 0, k, k), a.block(0, k, k, n - k), a.block(k, 0, n - k, k),
          a.block(k, k, n - k, n - k)};
}

void BlockMatrix2::validate() const {
  const std::size_t k = top_left.rows();
  const std::size_t m = bottom_right.rows();
  const bool ok = k > 0 && m > 0 && top_left.cols() == k && bottom_right.cols() == m &&
                  top_right.rows() == k && top_right.cols() == m && bottom_left.rows() == m &&
                  bottom_left.cols() == k;
  if (!ok) throw DimensionError("BlockMatrix2: inconsistent block dimensions");
}

DenseMatrix BlockMatrix2::assemble() const {
  validate();
  const std::size_t k = this->k();
  DenseMatrix a(n(), n());
  a.set_block(0, 0, top_left);
  a.set_block(0, k, top_right);
  a.set_block(k, 0, bottom_left);
  a.set_block(k, k, bottom_right);
  return a;
}

Vector null_covector(const DenseMatrix& a) {
  require_square(a, "null_covector");
  require_finite(a, "null_covector");
  const std::size_t n = a.rows();
  if (n < 2) throw DimensionError("null_covector: need n >= 2");
  // Rows of the padded matrix are A_2^T, ..., A_n^T and a zero row, so its
  // kernel is the bilinear annihilator of columns 2..n.
  DenseMatrix p(n, n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) p(i - 1, r) = a(r, i);
  const SvdResult f = svd(p);
  const double rank_floor = 1e-10 * std::max(f.largest(), std::numeric_limits<double>::min());
  if (!(f.singular_values[n - 2] > rank_floor)) {
    throw SingularMatrixError("null_covector: columns 2..n are rank deficient");
  }
  return f.right.column(n - 1);
}

QuadraticFormValues evaluate_quadratic_form(const BlockMatrix2& a) {
  a.validate();
  if (a.k() != 1) throw DimensionError("quadratic form: top-left block must be 1 x 1");
  const DenseMatrix full = a.assemble();
  const DenseMatrix b = a.bottom_right.transpose();
  const double b_norm = operator_norm(b);
  if (!(smallest_singular_value(b) > 1e-10 * b_norm)) {
    throw SingularMatrixError("quadratic form: B is singular");
  }
  const Vector y = a.top_right.transpose().column(0);
  const Vector x = a.bottom_left.column(0);
  const Vector binv_y = solve_linear(b, y);

  QuadraticFormValues v;
  const Vector h = null_covector(full);
  v.via_covector = std::abs(dot_bilinear(h, full.column(0)));
  const Complex num = a.top_left(0, 0) - dot_bilinear(x, binv_y);
  const double z = norm2(binv_y);
  v.closed_form = std::abs(num) / std::sqrt(1.0 + z * z);
  const double scale = std::max({v.via_covector, v.closed_form, std::numeric_limits<double>::min()});
  v.relative_error = std::abs(v.via_covector - v.closed_form) / scale;
  if (v.via_covector == 0.0 && v.closed_form == 0.0) v.relative_error = 0.0;
  return v;
}

LemmaReport verify_quadratic_form(const BlockMatrix2& a, double tolerance) {
  LemmaReport r;
  r.lemma_id = "quadratic-form";
  const QuadraticFormValues v = evaluate_quadratic_form(a);
  const bool violated = !(v.relative_error <= tolerance);
  r.record(violated, tolerance - v.relative_error,
           {{"n", static_cast<double>(a.n())},
            {"via_covector", v.via_covector},
            {"closed_form", v.closed_form},
            {"relative_error", v.relative_error}},
           violated ? "n=" + std::to_string(a.n()) + " relative_error=" +
                          detail::fmt(v.relative_error)
                    : std::string{});
  return r;
}

LemmaReport verify_quadratic_form_random(DimRange dims, std::uint64_t instances,
                                         double tolerance, double min_relative_smin,
                                         const RngStream& rng,
                                         const MonteCarloOptions& options) {
  if (dims.min < 2 || dims.max < dims.min) {
    throw PreconditionError("quadratic form: dimension range must satisfy 2 <= min <= max");
  }
  const auto parts = parallel_map(instances, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const std::size_t n = detail::pick_dimension(dims, stream);
    BlockMatrix2 a = BlockMatrix2::split(gaussian_complex_matrix(n, n, stream), 1);
    // Odd instances get a planted condition number up to 1 / min_relative_smin.
    if (i % 2 == 1 && min_relative_smin > 0.0) {
      const double top = operator_norm(a.bottom_right);
      const double ratio = std::pow(min_relative_smin, stream.uniform());
      a.bottom_right = detail::with_smallest_singular_value(a.bottom_right, ratio * top);
    }
    const DenseMatrix b = a.bottom_right;
    if (smallest_singular_value(b) < min_relative_smin * operator_norm(b)) {
      LemmaReport skipped;
      skipped.lemma_id = "quadratic-form";
      skipped.skip();
      return skipped;
    }
    return verify_quadratic_form(a, tolerance);
  });
  return detail::merge_reports("quadratic-form", parts);
}

}  // namespace rvlab

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

namespace {

using std::numbers::pi;

Complex det3(const DenseMatrix& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Complex det2(const DenseMatrix& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

void require_2x2(const DenseMatrix& b, const char* what) {
  if (b.rows() != 2 || b.cols() != 2) throw DimensionError(std::string(what) + ": B must be 2 x 2");
}

}  // namespace

double complex_orthogonality_defect(const DenseMatrix& b) {
  require_square(b, "complex_orthogonality_defect");
  return operator_norm(b * b.transpose() - DenseMatrix::identity(b.rows()));
}

TrigCoefficients det_trig_coefficients(const DenseMatrix& b) {
  require_2x2(b, "det_trig_coefficients");
  return {det2(b) + 1.0, b(0, 0) + b(1, 1), b(0, 1) - b(1, 0)};
}

double det_trig_identity_error(const DenseMatrix& b, std::size_t grid) {
  const TrigCoefficients k = det_trig_coefficients(b);
  double err = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double phi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(grid);
    const Complex expansion = k.k0 + k.k1 * std::cos(phi) + k.k2 * std::sin(phi);
    err = std::max(err, std::abs(det2(b + rotation2(phi)) - expansion));
  }
  return err;
}

DeterminantScan vanishing_determinant_scan(const DenseMatrix& b, std::size_t grid_size) {
  require_square(b, "vanishing_determinant_scan");
  require_finite(b, "vanishing_determinant_scan");
  const std::size_t n = b.rows();
  if (n != 2 && n != 3) throw DimensionError("vanishing_determinant_scan: need n in {2, 3}");
  DeterminantScan s;
  s.norm = operator_norm(b);
  if (s.norm < 0.5) {
    throw PreconditionError("vanishing_determinant_scan: hypothesis ||B|| >= 1/2 fails (||B|| = " +
                            detail::fmt(s.norm) + ")");
  }
  s.orth_defect = complex_orthogonality_defect(b);
  if (n == 2) {
    const std::size_t g = grid_size == 0 ? 64 : grid_size;
    for (std::size_t i = 0; i < g; ++i) {
      const double phi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(g);
      s.sup_det = std::max(s.sup_det, std::abs(det2(b + rotation2(phi))));
    }
    return s;
  }
  const std::size_t g = grid_size == 0 ? 16 : std::max<std::size_t>(grid_size, 2);
  for (std::size_t i = 0; i < g; ++i) {
    const double alpha = 2.0 * pi * static_cast<double>(i) / static_cast<double>(g);
    for (std::size_t j = 0; j < g; ++j) {
      const double beta = pi * static_cast<double>(j) / static_cast<double>(g - 1);
      for (std::size_t k = 0; k < g; ++k) {
        const double gamma = 2.0 * pi * static_cast<double>(k) / static_cast<double>(g);
        s.sup_det = std::max(s.sup_det, std::abs(det3(b + hurwitz_rotation(alpha, beta, gamma))));
      }
    }
  }
  return s;
}

LemmaReport verify_det_trig_random(std::uint64_t instances, double tolerance,
                                   const RngStream& rng, const MonteCarloOptions& options) {
  const auto parts = parallel_map(instances, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const DenseMatrix b = gaussian_complex_matrix(2, 2, stream);
    const double err = det_trig_identity_error(b, 64);
    LemmaReport r;
    r.lemma_id = "det-trig";
    r.record(!(err <= tolerance), tolerance - err, {{"error", err}},
             err <= tolerance ? std::string{} : "instance=" + std::to_string(i) + " error=" + detail::fmt(err));
    return r;
  });
  return detail::merge_reports("det-trig", parts);
}

LemmaReport verify_vanishing_determinant_random(std::uint64_t instances, double C,
                                                const RngStream& rng,
                                                const MonteCarloOptions& options) {
  const auto parts = parallel_map(instances, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const std::size_t n = i % 2 == 0 ? 2 : 3;
    DenseMatrix b = gaussian_complex_matrix(n, n, stream);
    b *= Complex(stream.uniform(0.5, 4.0) / operator_norm(b));
    const DeterminantScan s = vanishing_determinant_scan(b);
    const double rhs = C * s.sup_det * s.norm;
    const bool violated = s.orth_defect > rhs;
    LemmaReport r;
    r.lemma_id = "vanishing-determinant";
    r.record(violated, rhs - s.orth_defect,
             {{"n", static_cast<double>(n)},
              {"sup_det", s.sup_det},
              {"orth_defect", s.orth_defect},
              {"norm", s.norm},
              {"ratio", s.orth_defect / (s.sup_det * s.norm)}},
             violated ? "instance=" + std::to_string(i) + " ratio=" +
                            detail::fmt(s.orth_defect / (s.sup_det * s.norm))
                      : std::string{});
    return r;
  });
  return detail::merge_reports("vanishing-determinant", parts);
}

TailEstimate low_dim_theorem_check(const DenseMatrix& b, double delta,
                                   std::span<const double> t_grid, std::uint64_t trials,
                                   const RngStream& rng, const MonteCarloOptions& options) {
  require_square(b, "low_dim_theorem_check");
  if (b.rows() != 2 && b.rows() != 3) throw DimensionError("low_dim_theorem_check: need n in {2, 3}");
  const double defect = complex_orthogonality_defect(b);
  const double nb = operator_norm(b);
  if (defect < delta * nb * nb) {
    throw PreconditionError("low_dim_theorem_check: hypothesis ||BB^T - I|| >= delta ||B||^2 fails (" +
                            detail::fmt(defect) + " < " + detail::fmt(delta * nb * nb) +
                            "); B is near the complex-orthogonal regime where no tail bound holds");
  }
  return tail_estimate(b, Ensemble::orthogonal, t_grid, trials, rng, options);
}

}  // namespace rvlab

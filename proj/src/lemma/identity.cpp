#include <cmath>
#include <string>

#include "rvlab/errors.hpp"
#include "rvlab/lemma.hpp"
#include "rvlab/linalg.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

namespace {

constexpr double kRoundoff = 1e-12;
constexpr double kUnitaryTolerance = 1e-10;

double max_imag(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j).imag()));
  return m;
}

LemmaReport identity_instance(const DenseMatrix& s, double epsilon, bool require_real) {
  require_square(s, "identity perturbation");
  require_finite(s, "identity perturbation");
  LemmaReport r;
  r.lemma_id = "identity-perturbation";
  const std::size_t n = s.rows();
  const double s2 = operator_norm(s * s);
  if (epsilon * epsilon * s2 > 0.25) {
    r.skip();
    return r;
  }
  DenseMatrix w0 = DenseMatrix::identity(n);
  w0 += Complex(epsilon) * s;
  const SvdResult f = svd(w0);
  const DenseMatrix w = f.left * f.right.adjoint();
  const double lhs = operator_norm(w - w0);
  const double rhs = 2.0 * epsilon * epsilon * s2;
  const double unitary_defect = max_abs_diff(w.adjoint() * w, DenseMatrix::identity(n));
  const double imag = require_real ? max_imag(w) : 0.0;
  const bool violated =
      lhs > rhs + kRoundoff || unitary_defect > kUnitaryTolerance || imag > kUnitaryTolerance;
  std::string detail;
  if (violated) {
    detail = "n=" + std::to_string(n) + " lhs=" + std::to_string(lhs) + " rhs=" +
             std::to_string(rhs) + " unitary_defect=" + std::to_string(unitary_defect);
  }
  r.record(violated, rhs - lhs,
           {{"n", static_cast<double>(n)},
            {"epsilon", epsilon},
            {"lhs", lhs},
            {"rhs", rhs},
            {"unitary_defect", unitary_defect}},
           detail);
  return r;
}

}  // namespace

LemmaReport check_identity_perturbation(const DenseMatrix& s, double epsilon) {
  return identity_instance(s, epsilon, s.is_real());
}

LemmaReport verify_identity_perturbation(DimRange dims, double epsilon, std::uint64_t trials,
                                         Field field, const RngStream& rng,
                                         const MonteCarloOptions& options) {
  if (dims.min < 2 || dims.max < dims.min) {
    throw PreconditionError("identity perturbation: dimension range must satisfy 2 <= min <= max");
  }
  const auto parts = parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const std::size_t n = dims.min + stream.next_u64() % (dims.max - dims.min + 1);
    const DenseMatrix s = field == Field::complex ? skew_hermitian_bordered(n, stream)
                                                  : gaussian_skew_symmetric(n, stream);
    return identity_instance(s, epsilon, field == Field::real);
  });
  LemmaReport total;
  total.lemma_id = "identity-perturbation";
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace rvlab

#include <cmath>

#include "rvlab/single_ring.hpp"

namespace rvlab {

RealMeasure singular_measure(const DiagonalMatrix& d) {
  if (d.diag.empty()) throw PreconditionError("singular measure: empty diagonal");
  RealMeasure mu;
  mu.atoms.reserve(d.size());
  for (const Complex& z : d.diag) {
    if (z.imag() != 0.0 || !(z.real() >= 0.0) || !std::isfinite(z.real())) {
      throw PreconditionError("single ring: diagonal entries must be non-negative reals");
    }
    mu.atoms.push_back(z.real());
  }
  return mu;
}

RingRadii ring_radii(const RealMeasure& mu) {
  mu.validate();
  double inv2 = 0.0;
  double sq = 0.0;
  bool has_zero = false;
  for (double x : mu.atoms) {
    if (x < 0.0) throw PreconditionError("ring_radii: atoms must be non-negative");
    if (x == 0.0) {
      has_zero = true;
    } else {
      inv2 += 1.0 / (x * x);
    }
    sq += x * x;
  }
  const double w = mu.weight();
  return {has_zero ? 0.0 : 1.0 / std::sqrt(inv2 * w), std::sqrt(sq * w)};
}

Complex stieltjes_transform(const RealMeasure& mu, Complex z) {
  mu.validate();
  Complex acc{};
  for (double x : mu.atoms) {
    const Complex diff = z - x;
    if (std::abs(diff) <= kAtomCollision) {
      throw PreconditionError("stieltjes_transform: z collides with an atom");
    }
    acc += 1.0 / diff;
  }
  return acc * mu.weight();
}

RealMeasure symmetrized_singular_measure(const DenseMatrix& a, Complex z) {
  require_square(a, "symmetrized_singular_measure");
  DenseMatrix shifted = a;
  for (std::size_t i = 0; i < a.rows(); ++i) shifted(i, i) -= z;
  const std::vector<double> s = singular_values(shifted);
  RealMeasure mu;
  mu.atoms.reserve(2 * s.size());
  for (double x : s) mu.atoms.push_back(x);
  for (double x : s) mu.atoms.push_back(-x);
  return mu;
}

}  // namespace rvlab

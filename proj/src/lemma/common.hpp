#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rvlab/ensembles.hpp"
#include "rvlab/lemma.hpp"
#include "rvlab/linalg.hpp"

namespace rvlab::detail {

inline LemmaReport merge_reports(const std::string& id, const std::vector<LemmaReport>& parts) {
  LemmaReport total;
  total.lemma_id = id;
  for (const auto& p : parts) total.merge(p);
  return total;
}

/// Same singular vectors, smallest singular value replaced by `smallest`.
inline DenseMatrix with_smallest_singular_value(const DenseMatrix& a, double smallest) {
  SvdResult f = svd(a);
  f.singular_values.back() = smallest;
  return f.reconstruct();
}

/// Uniform point on the unit sphere of C^n.
inline Vector random_unit(std::size_t n, RngStream& rng) {
  Vector v(n);
  for (auto& z : v) z = Complex(rng.normal(), rng.normal());
  const double s = norm2(v);
  for (auto& z : v) z /= s;
  return v;
}

inline std::size_t pick_dimension(DimRange dims, RngStream& rng) {
  return dims.min + rng.next_u64() % (dims.max - dims.min + 1);
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace rvlab::detail

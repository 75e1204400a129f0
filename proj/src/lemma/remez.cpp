#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

namespace {

using std::numbers::pi;

constexpr double kRelativeRoundoff = 1e-12;

void monomials_rec(std::size_t dim, int budget, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (cur.size() == dim) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= budget; ++e) {
    cur.push_back(e);
    monomials_rec(dim, budget - e, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monomials(std::size_t dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  monomials_rec(dim, degree, cur, out);
  return out;
}

// Points stored row-major, `dim` coordinates each.
struct Grid {
  std::size_t dim = 0;
  std::vector<double> pts;
  std::size_t size() const { return pts.size() / dim; }
};

std::vector<double> linspace(double lo, double hi, std::size_t count, bool include_hi) {
  std::vector<double> v(count);
  const double den = static_cast<double>(include_hi ? count - 1 : count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / den;
  return v;
}

Grid box_grid(std::size_t dim, double lo, double hi, std::size_t per_axis) {
  const auto axis = linspace(lo, hi, per_axis, true);
  Grid g{dim, {}};
  if (dim == 1) {
    g.pts = axis;
  } else {
    for (double x : axis)
      for (double y : axis) g.pts.insert(g.pts.end(), {x, y});
  }
  return g;
}

Grid arc_grid(double hi_angle, std::size_t count, bool closed) {
  Grid g{2, {}};
  for (double th : linspace(0.0, hi_angle, count, closed)) g.pts.insert(g.pts.end(), {std::cos(th), std::sin(th)});
  return g;
}

// Polar cap {z >= cos theta_max} around +e_z.
Grid cap_grid(double theta_max, std::size_t n_theta, std::size_t n_phi) {
  Grid g{3, {}};
  for (double th : linspace(0.0, theta_max, n_theta, true)) {
    for (double ph : linspace(0.0, 2.0 * pi, n_phi, false)) {
      g.pts.insert(g.pts.end(),
                   {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
    }
  }
  return g;
}

Grid product(const Grid& a, const Grid& b) {
  Grid g{a.dim + b.dim, {}};
  g.pts.reserve(a.size() * b.size() * g.dim);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      g.pts.insert(g.pts.end(), a.pts.begin() + static_cast<std::ptrdiff_t>(i * a.dim),
                   a.pts.begin() + static_cast<std::ptrdiff_t>((i + 1) * a.dim));
      g.pts.insert(g.pts.end(), b.pts.begin() + static_cast<std::ptrdiff_t>(j * b.dim),
                   b.pts.begin() + static_cast<std::ptrdiff_t>((j + 1) * b.dim));
    }
  return g;
}

// Monomial values at every grid point, one row per point.
struct Table {
  std::size_t terms = 0;
  std::vector<double> v;
};

Table tabulate(const Grid& g, const std::vector<std::vector<int>>& exps) {
  Table t{exps.size(), std::vector<double>(g.size() * exps.size())};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double* x = &g.pts[p * g.dim];
    for (std::size_t k = 0; k < exps.size(); ++k) {
      double m = 1.0;
      for (std::size_t d = 0; d < g.dim; ++d) m *= std::pow(x[d], exps[k][d]);
      t.v[p * t.terms + k] = m;
    }
  }
  return t;
}

double sup_abs(const Table& t, std::span<const double> coeffs) {
  double best = 0.0;
  for (std::size_t off = 0; off < t.v.size(); off += t.terms) {
    double acc = 0.0;
    for (std::size_t k = 0; k < t.terms; ++k) acc += t.v[off + k] * coeffs[k];
    best = std::max(best, std::abs(acc));
  }
  return best;
}

// `power` is the exponent on (C / |E|); `measure_whole` multiplies C in the
// convex case. The required constant solves sup_V = factor sup_E for C.
struct Setting {
  Grid whole;
  Grid subset;
  double subset_measure = 0.0;
  double base_constant = 0.0;   // 4 m |V| or C1
  double power_per_degree = 0.0;
};

RemezEvaluation finish(double sup_v, double sup_e, const Setting& s, int degree) {
  RemezEvaluation r;
  r.sup_whole = sup_v;
  r.sup_subset = sup_e;
  r.subset_measure = s.subset_measure;
  const double power = s.power_per_degree * degree;
  r.factor = std::pow(s.base_constant / s.subset_measure, power);
  if (sup_v == 0.0) {
    r.holds = true;
    r.slack = 0.0;
    return r;
  }
  r.holds = sup_v <= r.factor * sup_e * (1.0 + kRelativeRoundoff);
  r.slack = (r.factor * sup_e - sup_v) / sup_v;
  r.required_constant = power == 0.0 || sup_e == 0.0
                            ? (sup_e == 0.0 ? std::numeric_limits<double>::infinity() : 0.0)
                            : s.subset_measure * std::pow(sup_v / sup_e, 1.0 / power);
  return r;
}

RemezEvaluation evaluate(const Polynomial& p, const Setting& s) {
  const double sv = sup_abs(tabulate(s.whole, p.exponents), p.coeffs);
  const double se = sup_abs(tabulate(s.subset, p.exponents), p.coeffs);
  return finish(sv, se, s, p.degree());
}

void require_fraction(double f, const char* what) {
  if (!(f > 0.0 && f <= 1.0)) throw PreconditionError(std::string(what) + ": fraction must lie in (0, 1]");
}

Setting convex_setting(std::size_t dim, double f) {
  if (dim != 1 && dim != 2) throw DimensionError("remez convex: dim must be 1 or 2");
  require_fraction(f, "remez convex");
  const double side = 2.0 * std::pow(f, 1.0 / static_cast<double>(dim));
  const std::size_t per_axis = dim == 1 ? 4001 : 201;
  Setting s;
  s.whole = box_grid(dim, -1.0, 1.0, per_axis);
  s.subset = box_grid(dim, -1.0, -1.0 + side, per_axis);
  const double vol = std::pow(2.0, static_cast<double>(dim));
  s.subset_measure = f * vol;
  s.base_constant = 4.0 * static_cast<double>(dim) * vol;
  s.power_per_degree = 1.0;
  return s;
}

Setting sphere_setting(std::size_t m, double f, double C1) {
  require_fraction(f, "remez sphere");
  Setting s;
  s.base_constant = C1;
  s.power_per_degree = 2.0;
  if (m == 1) {
    s.whole = arc_grid(2.0 * pi, 4096, false);
    s.subset = arc_grid(2.0 * pi * f, 2048, true);
    s.subset_measure = 2.0 * pi * f;
  } else if (m == 2) {
    s.whole = cap_grid(pi, 181, 360);
    s.subset = cap_grid(std::acos(1.0 - 2.0 * f), 181, 360);
    s.subset_measure = 4.0 * pi * f;
  } else {
    throw DimensionError("remez sphere: m must be 1 or 2");
  }
  return s;
}

Setting torus_setting(double arc_fraction, double cap_fraction, double C1) {
  require_fraction(arc_fraction, "remez torus");
  require_fraction(cap_fraction, "remez torus");
  Setting s;
  s.whole = product(arc_grid(2.0 * pi, 48, false), cap_grid(pi, 33, 64));
  s.subset = product(arc_grid(2.0 * pi * arc_fraction, 48, true),
                     cap_grid(std::acos(1.0 - 2.0 * cap_fraction), 33, 64));
  s.subset_measure = 2.0 * pi * arc_fraction * 4.0 * pi * cap_fraction;
  s.base_constant = C1;
  s.power_per_degree = 4.0;
  return s;
}

LemmaReport run_trials(const std::string& id, const Setting& s, std::size_t dim, int degree,
                       std::uint64_t trials, const RngStream& rng,
                       const MonteCarloOptions& options) {
  if (degree < 0 || degree > 6) throw PreconditionError(id + ": degree must be in 0..6");
  const auto exps = monomials(dim, degree);
  const Table whole = tabulate(s.whole, exps);
  const Table subset = tabulate(s.subset, exps);
  const auto parts = parallel_map(trials, options.threads, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    std::vector<double> coeffs(exps.size());
    for (auto& c : coeffs) c = stream.normal();
    const RemezEvaluation e = finish(sup_abs(whole, coeffs), sup_abs(subset, coeffs), s, degree);
    LemmaReport r;
    r.lemma_id = id;
    r.record(!e.holds, e.slack,
             {{"sup_whole", e.sup_whole},
              {"sup_subset", e.sup_subset},
              {"factor", e.factor},
              {"required_constant", e.required_constant}},
             e.holds ? std::string{}
                     : "trial=" + std::to_string(i) + " sup_whole=" + detail::fmt(e.sup_whole) +
                           " factor*sup_subset=" + detail::fmt(e.factor * e.sup_subset));
    return std::pair{r, e.required_constant};
  });
  LemmaReport total;
  total.lemma_id = id;
  double needed = 0.0;
  for (const auto& [r, c] : parts) {
    total.merge(r);
    needed = std::max(needed, c);
  }
  total.worst_case["required_constant_max"] = needed;
  total.worst_case["configured_constant"] = s.base_constant;
  total.worst_case["degree"] = degree;
  return total;
}

}  // namespace

double Polynomial::operator()(std::span<const double> x) const {
  if (x.size() != dim) throw DimensionError("Polynomial: point dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    double m = coeffs[k];
    for (std::size_t d = 0; d < dim; ++d) m *= std::pow(x[d], exponents[k][d]);
    acc += m;
  }
  return acc;
}

int Polynomial::degree() const {
  int deg = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    int total = 0;
    for (int e : exponents[k]) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

Polynomial Polynomial::random(std::size_t dim, int degree, RngStream& rng) {
  Polynomial p{dim, monomials(dim, degree), {}};
  p.coeffs.resize(p.exponents.size());
  for (auto& c : p.coeffs) c = rng.normal();
  return p;
}

Polynomial Polynomial::constant(std::size_t dim, double value) {
  return Polynomial{dim, {std::vector<int>(dim, 0)}, {value}};
}

RemezEvaluation remez_convex_evaluate(const Polynomial& p, double e_fraction) {
  return evaluate(p, convex_setting(p.dim, e_fraction));
}

LemmaReport remez_convex_check(int degree, std::size_t dim, double e_fraction,
                               std::uint64_t trials, const RngStream& rng,
                               const MonteCarloOptions& options) {
  return run_trials("remez-convex", convex_setting(dim, e_fraction), dim, degree, trials, rng,
                    options);
}

RemezEvaluation remez_sphere_evaluate(const Polynomial& p, std::size_t m, double e_fraction,
                                      double C1) {
  if (p.dim != m + 1) throw DimensionError("remez sphere: polynomial must have m + 1 variables");
  return evaluate(p, sphere_setting(m, e_fraction, C1));
}

LemmaReport remez_sphere_check(int degree, std::size_t m, double e_fraction,
                               std::uint64_t trials, double C1, const RngStream& rng,
                               const MonteCarloOptions& options) {
  return run_trials("remez-sphere", sphere_setting(m, e_fraction, C1), m + 1, degree, trials, rng,
                    options);
}

RemezEvaluation remez_torus_evaluate(const Polynomial& p, double arc_fraction,
                                     double cap_fraction, double C1) {
  if (p.dim != 5) throw DimensionError("remez torus: polynomial must have 5 variables");
  return evaluate(p, torus_setting(arc_fraction, cap_fraction, C1));
}

LemmaReport remez_torus_check(int degree, double arc_fraction, double cap_fraction,
                              std::uint64_t trials, double C1, const RngStream& rng,
                              const MonteCarloOptions& options) {
  return run_trials("remez-torus", torus_setting(arc_fraction, cap_fraction, C1), 5, degree,
                    trials, rng, options);
}

}  // namespace rvlab

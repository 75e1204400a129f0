#include <cmath>
#include <functional>
#include <numbers>

#include "common.hpp"
#include "rvlab/errors.hpp"

namespace rvlab {

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  return g;
}

std::uint64_t pick(std::uint64_t configured, std::uint64_t fallback) {
  return configured == 0 ? fallback : configured;
}

LemmaReport run_identity(const LemmaRunConfig& c) {
  const MonteCarloOptions opt{c.threads};
  const auto n = pick(c.instances, 1000);
  LemmaReport r = verify_identity_perturbation({2, 20}, 0.01, n, Field::complex, RngStream(c.seed, 1), opt);
  r.merge(verify_identity_perturbation({2, 20}, 0.01, n, Field::real, RngStream(c.seed, 2), opt));
  return r;
}

LemmaReport run_quadratic(const LemmaRunConfig& c) {
  return verify_quadratic_form_random({2, 12}, pick(c.instances, 500), 1e-6, 1e-6,
                                      RngStream(c.seed, 1), {c.threads});
}

LemmaReport run_well(const LemmaRunConfig& c) {
  return verify_well_invertible_minor_random(10, pick(c.instances, 100), 10000,
                                             RngStream(c.seed, 1), {c.threads});
}

LemmaReport run_poorly(const LemmaRunConfig& c) {
  constexpr std::size_t n = 10;
  constexpr double t = 0.01;
  const std::uint64_t instances = pick(c.instances, 100);
  LemmaReport r = verify_poorly_invertible_minor_random(n, instances, 100, 100, t, 1.0,
                                                        RngStream(c.seed, 1), {c.threads});
  // Small-ball frequency for a centered X, the hardest mean.
  RngStream rng(c.seed, 2);
  const DenseMatrix m = inverse(gaussian_complex_matrix(n - 1, n - 1, rng));
  const Vector nu(n - 1);
  const double freq = small_ball_frequency(m, nu, 1.0, t, instances * 100, rng);
  const double limit = 10.0 * t * std::sqrt(static_cast<double>(n));
  r.worst_case["small_ball_frequency"] = freq;
  r.worst_case["small_ball_limit"] = limit;
  ++r.instances;
  if (freq > limit) {
    ++r.violations;
    r.details.push_back("small-ball frequency " + detail::fmt(freq) + " exceeds " + detail::fmt(limit));
  }
  return r;
}

LemmaReport run_gaussian(const LemmaRunConfig& c) {
  RngStream map_rng(c.seed, 1);
  const GaussianLinearMap f = GaussianLinearMap::random(9, 1.0, map_rng);
  const auto grid = log_grid(1e-4, 1e-1, 4);
  return verify_gaussian_perturbation(f, grid, pick(c.instances, 10000), RngStream(c.seed, 2),
                                      {c.threads})
      .report;
}

LemmaReport run_breaking(const LemmaRunConfig& c) {
  const auto grid = log_grid(1e-3, 1e-1, 3);
  return verify_breaking_orthogonality(DenseMatrix::identity(2),
                                       DiagonalMatrix{{Complex(1.0), Complex(2.0)}}, grid,
                                       pick(c.instances, 10000), RngStream(c.seed, 1), {c.threads})
      .report;
}

LemmaReport run_det_trig(const LemmaRunConfig& c) {
  return verify_det_trig_random(pick(c.instances, 200), 1e-10, RngStream(c.seed, 1), {c.threads});
}

LemmaReport run_vanishing(const LemmaRunConfig& c) {
  return verify_vanishing_determinant_random(pick(c.instances, 200), 2.0, RngStream(c.seed, 1),
                                             {c.threads});
}

LemmaReport run_remez_convex(const LemmaRunConfig& c) {
  const auto n = pick(c.instances, 100);
  LemmaReport r = remez_convex_check(4, 1, 0.5, n, RngStream(c.seed, 1), {c.threads});
  r.merge(remez_convex_check(3, 2, 0.25, n, RngStream(c.seed, 2), {c.threads}));
  return r;
}

LemmaReport run_remez_sphere(const LemmaRunConfig& c) {
  const auto n = pick(c.instances, 100);
  LemmaReport r = remez_sphere_check(2, 1, 0.5, n, kDefaultRemezC1, RngStream(c.seed, 1), {c.threads});
  r.merge(remez_sphere_check(3, 2, 0.25, n, kDefaultRemezC1, RngStream(c.seed, 2), {c.threads}));
  return r;
}

LemmaReport run_remez_torus(const LemmaRunConfig& c) {
  return remez_torus_check(2, 0.25, 0.25, pick(c.instances, 100), kDefaultRemezC1,
                           RngStream(c.seed, 1), {c.threads});
}

LemmaReport run_low_dim(const LemmaRunConfig& c) {
  const DenseMatrix b = DiagonalMatrix{{Complex(2.0), Complex(0.1)}}.dense();
  const auto grid = log_grid(1e-4, 1e-1, 4);
  const TailEstimate est =
      low_dim_theorem_check(b, 0.7, grid, pick(c.instances, 10000), RngStream(c.seed, 1), {c.threads});
  LemmaReport r;
  r.lemma_id = "low-dim";
  bool monotone = true;
  for (std::size_t i = 1; i < est.hits.size(); ++i) monotone = monotone && est.hits[i] >= est.hits[i - 1];
  const double p0 = est.p_hat.front();
  const bool ok = monotone && p0 <= 0.05;
  r.record(!ok, 0.05 - p0,
           {{"t_min", est.t_grid.front()}, {"p_hat_min", p0}, {"ci_high_min", est.ci_high.front()},
            {"trials", static_cast<double>(est.trials)}},
           ok ? std::string{} : "p_hat(t_min)=" + detail::fmt(p0));
  return r;
}

using Runner = std::function<LemmaReport(const LemmaRunConfig&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"identity-perturbation", run_identity},
      {"quadratic-form", run_quadratic},
      {"well-invertible-minor", run_well},
      {"poorly-invertible-minor", run_poorly},
      {"gaussian-perturbation", run_gaussian},
      {"breaking-orthogonality", run_breaking},
      {"det-trig", run_det_trig},
      {"vanishing-determinant", run_vanishing},
      {"remez-convex", run_remez_convex},
      {"remez-sphere", run_remez_sphere},
      {"remez-torus", run_remez_torus},
      {"low-dim", run_low_dim},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

LemmaReport run_lemma(const std::string& id, const LemmaRunConfig& config) {
  for (const auto& [name, fn] : registry()) {
    if (name == id) {
      LemmaReport r = fn(config);
      r.lemma_id = id;
      return r;
    }
  }
  std::string known;
  for (const auto& name : lemma_ids()) known += (known.empty() ? "" : ", ") + name;
  throw PreconditionError("unknown lemma id '" + id + "' (known: " + known + ")");
}

}  // namespace rvlab

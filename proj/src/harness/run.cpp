#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "internal.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/harness.hpp"
#include "rvlab/linalg.hpp"
#include "rvlab/parallel.hpp"

#ifndef RVLAB_VERSION
#define RVLAB_VERSION "dev"
#endif

namespace rvlab {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Context {
  const ExperimentConfig& config;
  RunManifest& manifest;
  std::string header;

  fs::path out(const char* default_name) const {
    return config.out_path.empty() ? fs::path(default_name) : fs::path(config.out_path);
  }

  // <stem><suffix> next to `primary`.
  static fs::path sibling(const fs::path& primary, const std::string& suffix) {
    return primary.parent_path() / (primary.stem().string() + suffix);
  }

  void write(const fs::path& path, const std::string& body) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << header << body;
    if (!os) throw Error("write failed for " + path.string());
    manifest.outputs.push_back(path.string());
  }

  void check(bool ok, const std::string& line) const {
    manifest.summary.push_back((ok ? "PASS " : "FAIL ") + line);
    if (!ok) manifest.passed = false;
  }

  MonteCarloOptions mc() const { return {config.threads}; }
};

Field field_of(Ensemble e) { return e == Ensemble::unitary ? Field::complex : Field::real; }

Json reparse(const std::string& text) { return Json::parse(text); }

void run_tail(const Context& ctx) {
  const auto& c = ctx.config;
  const DenseMatrix d = parse_d_spec(c.d_spec, c.n).dense();
  const std::vector<double> grid = parse_t_grid(c.t_grid);
  const TailEstimate est = tail_estimate(d, c.ensemble, grid, c.trials, RngStream(c.seed), ctx.mc());

  const fs::path csv = ctx.out("tail.csv");
  std::ostringstream body;
  write_tail_csv(body, est);
  ctx.write(csv, body.str());

  std::string fit_text;
  try {
    const ExponentFit fit = fit_tail_exponent(est);
    fit_text = fit_json(fit);
    ctx.manifest.summary.push_back("fit c_hat=" + format_double(fit.c_hat) +
                                   " r_squared=" + format_double(fit.r_squared));
  } catch (const PreconditionError& e) {
    Json j;
    j["c_hat"] = nullptr;
    j["logC_hat"] = nullptr;
    j["r_squared"] = nullptr;
    j["t_min"] = nullptr;
    j["t_max"] = nullptr;
    j["error"] = e.what();
    fit_text = j.dump(2) + "\n";
    ctx.manifest.summary.push_back(std::string("fit unavailable: ") + e.what());
  }
  ctx.write(Context::sibling(csv, ".fit.json"), fit_text);

  if (c.plot) {
    std::ostringstream dat;
    write_tail_plotdata(dat, est);
    ctx.write(Context::sibling(csv, ".dat"), dat.str());
  }
}

void run_one_lemma(const Context& ctx) {
  const auto& c = ctx.config;
  const LemmaReport r = run_lemma(c.lemma, {c.instances, c.seed, c.threads});
  ctx.write(ctx.out((c.lemma + ".json").c_str()), lemma_report_json(r));
  ctx.check(r.passed(), r.lemma_id + " instances=" + std::to_string(r.instances) +
                            " skipped=" + std::to_string(r.skipped) +
                            " violations=" + std::to_string(r.violations));
}

void run_verify_all(const Context& ctx) {
  const auto& c = ctx.config;
  Json all = Json::array();
  for (const std::string& id : lemma_ids()) {
    const LemmaReport r = run_lemma(id, {c.instances, c.seed, c.threads});
    all.push_back(reparse(lemma_report_json(r)));
    ctx.check(r.passed(), r.lemma_id + " instances=" + std::to_string(r.instances) +
                              " skipped=" + std::to_string(r.skipped) +
                              " violations=" + std::to_string(r.violations));
  }
  ctx.write(ctx.out("verify-all.json"), all.dump(2) + "\n");
}

void run_single_ring(const Context& ctx) {
  const auto& c = ctx.config;
  const DiagonalMatrix d = parse_d_spec(c.d_spec, c.n);
  const auto spectra =
      sample_single_ring_trials(d, field_of(c.ensemble), c.trials, RngStream(c.seed), ctx.mc());
  const RingRadii radii = ring_radii(singular_measure(d));
  std::vector<Complex> cloud;
  for (const Spectrum& s : spectra) cloud.insert(cloud.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  const AnnulusReport report = annulus_coverage(cloud, radii.a, radii.b, c.margin);

  const fs::path csv = ctx.out("single-ring.csv");
  std::ostringstream body;
  write_eigen_csv(body, spectra);
  ctx.write(csv, body.str());
  ctx.write(Context::sibling(csv, ".annulus.json"), annulus_json(report));
  if (c.plot) {
    std::ostringstream dat;
    write_radial_plotdata(dat, cloud);
    ctx.write(Context::sibling(csv, ".dat"), dat.str());
  }
  ctx.check(report.fraction_inside >= c.min_inside,
            "annulus a=" + format_double(report.a) + " b=" + format_double(report.b) +
                " fraction_inside=" + format_double(report.fraction_inside) +
                " gap_occupancy=" + format_double(report.gap_occupancy));
}

void run_sr_check(const Context& ctx) {
  const auto& c = ctx.config;
  const DiagonalMatrix d = parse_d_spec(c.d_spec, c.n);
  const double im = std::pow(static_cast<double>(c.n), -c.kappa);
  const auto grid = detail::parse_z_grid(c.z_grid, im);
  SRConditionReport report = check_sr_conditions(
      d, c.M, c.kappa, c.kappa1, grid, c.symmetrized ? Sr2Measure::symmetrized : Sr2Measure::plain);

  const auto sr3_points = detail::parse_z_grid(c.sr3_z, 0.0);
  Json sr3 = Json::array();
  bool sr3_pass = true;
  report.sr3_delta = c.sr3_delta;
  for (std::size_t k = 0; k < sr3_points.size(); ++k) {
    const Complex z = sr3_points[k];
    const Sr3Estimate est = estimate_sr3_integral(d, z, c.sr3_delta, c.trials,
                                                  RngStream(c.seed).substream(k), ctx.mc(),
                                                  field_of(c.ensemble));
    const bool ok = est.mean <= c.sr3_bound;
    sr3_pass = sr3_pass && ok;
    if (std::isnan(report.sr3_estimate) || est.mean > report.sr3_estimate) {
      report.sr3_estimate = est.mean;
      report.sr3_standard_error = est.standard_error;
    }
    Json e;
    e["z_re"] = z.real();
    e["z_im"] = z.imag();
    e["estimate"] = est.mean;
    e["standard_error"] = est.standard_error;
    e["trials"] = est.trials;
    e["fired"] = est.fired;
    e["pass"] = ok;
    sr3.push_back(e);
    ctx.check(ok, "sr3 z=" + format_double(z.real()) + (z.imag() < 0 ? "" : "+") +
                      format_double(z.imag()) + "i estimate=" + format_double(est.mean) +
                      " se=" + format_double(est.standard_error) + " bound=" + format_double(c.sr3_bound));
  }
  Json j = reparse(sr_report_json(report));
  j["sr3_bound"] = c.sr3_bound;
  j["sr3"] = sr3;
  ctx.write(ctx.out("sr-check.json"), j.dump(2) + "\n");
  ctx.check(report.sr1_pass, "sr1 max_atom=" + format_double(report.max_atom) +
                                 " M=" + format_double(report.M_bound));
  ctx.check(report.sr2_pass, "sr2 max_im=" + format_double(report.sr2_max_im) +
                                 " kappa1=" + format_double(report.kappa1));
}

struct CounterexampleDraw {
  Complex det;
  double smin = 0.0;
  double det_u = 0.0;
};

void run_counterexample(const Context& ctx) {
  const auto& c = ctx.config;
  const DenseMatrix b = counterexample_matrix(c.M);
  const RngStream base(c.seed);
  const auto draws = parallel_map(c.trials, c.threads, [&](std::size_t i) {
    RngStream rng = base.substream(i);
    const DenseMatrix u = sample_haar(c.ensemble, 2, rng);
    const DenseMatrix sum = b + u;
    return CounterexampleDraw{determinant(sum), smallest_singular_value(sum), determinant(u).real()};
  });

  double bbt = 0.0;
  const DenseMatrix prod = b * b.transpose();
  for (const Complex& z : prod.data()) bbt = std::max(bbt, std::abs(z));

  std::ostringstream body;
  body << "trial,det_re,det_im,smin,det_u\n";
  double det_err = 0.0, smin_max = 0.0, so2_det_err = 0.0, so2_smin_max = 0.0;
  std::uint64_t det_ok = 0, smin_ok = 0, so2 = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& r = draws[i];
    body << i << ',' << format_double(r.det.real()) << ',' << format_double(r.det.imag()) << ','
         << format_double(r.smin) << ',' << format_double(r.det_u) << '\n';
    const double err = std::abs(r.det - 1.0);
    det_err = std::max(det_err, err);
    smin_max = std::max(smin_max, r.smin);
    det_ok += err <= 1e-8;
    smin_ok += r.smin <= 0.1;
    if (r.det_u > 0.0) {
      ++so2;
      so2_det_err = std::max(so2_det_err, err);
      so2_smin_max = std::max(so2_smin_max, r.smin);
    }
  }
  const fs::path csv = ctx.out("counterexample.csv");
  ctx.write(csv, body.str());

  const bool det_pass = det_ok == draws.size();
  const bool smin_pass = smin_ok == draws.size();
  const bool so2_pass = so2_det_err <= 1e-8 && so2_smin_max <= 0.1;
  Json j;
  j["M"] = c.M;
  j["ensemble"] = std::string(to_string(c.ensemble));
  j["trials"] = c.trials;
  j["bbt_max_abs"] = bbt;
  j["max_det_error"] = det_err;
  j["max_smin"] = smin_max;
  j["det_within_1e-8"] = det_ok;
  j["smin_at_most_0.1"] = smin_ok;
  j["so2_draws"] = so2;
  j["so2_max_det_error"] = so2_det_err;
  j["so2_max_smin"] = so2_smin_max;
  j["so2_pass"] = so2_pass;
  j["passed"] = bbt == 0.0 && det_pass && smin_pass;
  ctx.write(Context::sibling(csv, ".summary.json"), j.dump(2) + "\n");

  ctx.check(bbt == 0.0, "BB^T = 0 max_abs=" + format_double(bbt));
  ctx.check(det_pass, "|det(B+U) - 1| <= 1e-8 on " + std::to_string(det_ok) + "/" +
                          std::to_string(draws.size()) + " draws");
  ctx.check(smin_pass, "s_min(B+U) <= 0.1 on " + std::to_string(smin_ok) + "/" +
                           std::to_string(draws.size()) + " draws");
  ctx.manifest.summary.push_back(std::string(so2_pass ? "PASS" : "FAIL") + " SO(2) coset: " +
                                 std::to_string(so2) + " draws, max |det - 1| = " +
                                 format_double(so2_det_err) + ", max s_min = " +
                                 format_double(so2_smin_max));
}

}  // namespace

std::string_view tool_version() noexcept { return RVLAB_VERSION; }

RunManifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_hash = config_hash(config);
  manifest.tool_version = std::string(tool_version());
  const Context ctx{config, manifest, provenance_header(config)};
  const std::string prefix = std::string(to_string(config.experiment)) + ": ";
  try {
    switch (config.experiment) {
      case ExperimentKind::tail:
        run_tail(ctx);
        break;
      case ExperimentKind::lemma:
        run_one_lemma(ctx);
        break;
      case ExperimentKind::verify_all:
        run_verify_all(ctx);
        break;
      case ExperimentKind::single_ring:
        run_single_ring(ctx);
        break;
      case ExperimentKind::sr_conditions:
        run_sr_check(ctx);
        break;
      case ExperimentKind::counterexample:
        run_counterexample(ctx);
        break;
    }
  } catch (const PreconditionError& e) {
    throw PreconditionError(prefix + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
  manifest.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return manifest;
}

}  // namespace rvlab

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rvlab/errors.hpp"
#include "rvlab/harness.hpp"

namespace rvlab {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kRadialBins = 64;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

// Finite doubles stay numbers; inf and nan become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

std::string provenance_header(const ExperimentConfig& config) {
  return "# rvlab " + std::string(tool_version()) + " config=" + config_hash(config) +
         " seed=" + std::to_string(config.seed) + "\n";
}

void write_tail_csv(std::ostream& os, const TailEstimate& est) {
  os << "t,hits,trials,p_hat,ci_low,ci_high\n";
  for (std::size_t i = 0; i < est.t_grid.size(); ++i) {
    os << format_double(est.t_grid[i]) << ',' << est.hits[i] << ',' << est.trials << ','
       << format_double(est.p_hat[i]) << ',' << format_double(est.ci_low[i]) << ','
       << format_double(est.ci_high[i]) << '\n';
  }
}

void write_eigen_csv(std::ostream& os, const std::vector<Spectrum>& spectra) {
  os << "trial,re,im\n";
  for (std::size_t t = 0; t < spectra.size(); ++t) {
    for (const Complex& z : spectra[t].eigenvalues)
      os << t << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
  }
}

std::string fit_json(const ExponentFit& fit) {
  Json j;
  j["c_hat"] = number(fit.c_hat);
  j["logC_hat"] = number(fit.logC_hat);
  j["r_squared"] = number(fit.r_squared);
  j["t_min"] = number(fit.t_range_used.first);
  j["t_max"] = number(fit.t_range_used.second);
  return j.dump(2) + "\n";
}

std::string lemma_report_json(const LemmaReport& report) {
  Json j;
  j["lemma_id"] = report.lemma_id;
  j["instances"] = report.instances;
  j["skipped"] = report.skipped;
  j["violations"] = report.violations;
  j["max_slack"] = number(report.max_slack);
  Json worst = Json::object();
  for (const auto& [k, v] : report.worst_case) worst[k] = number(v);
  j["worst_case"] = worst;
  if (!report.details.empty()) j["details"] = report.details;
  return j.dump(2) + "\n";
}

std::string annulus_json(const AnnulusReport& r) {
  Json j;
  j["a"] = number(r.a);
  j["b"] = number(r.b);
  j["margin"] = number(r.margin);
  j["fraction_inside"] = number(r.fraction_inside);
  j["fraction_below_inner"] = number(r.fraction_below_inner);
  j["fraction_above_outer"] = number(r.fraction_above_outer);
  j["gap_occupancy"] = number(r.gap_occupancy);
  j["gap_lo"] = number(r.gap.lo);
  j["gap_hi"] = number(r.gap.hi);
  j["count"] = r.count;
  return j.dump(2) + "\n";
}

std::string sr_report_json(const SRConditionReport& r) {
  Json j;
  j["M_bound"] = number(r.M_bound);
  j["max_atom"] = number(r.max_atom);
  j["sr1_pass"] = r.sr1_pass;
  j["kappa"] = number(r.kappa);
  j["kappa1"] = number(r.kappa1);
  j["sr2_max_im"] = number(r.sr2_max_im);
  j["sr2_pass"] = r.sr2_pass;
  j["sr2_symmetrized"] = r.sr2_symmetrized;
  j["sr3_estimate"] = number(r.sr3_estimate);
  j["sr3_standard_error"] = number(r.sr3_standard_error);
  j["sr3_delta"] = number(r.sr3_delta);
  return j.dump(2) + "\n";
}

void write_tail_plotdata(std::ostream& os, const TailEstimate& est) {
  if (est.t_grid.empty()) throw Error("nothing to plot");
  for (std::size_t i = 0; i < est.t_grid.size(); ++i) {
    os << format_double(est.t_grid[i]) << ' ' << format_double(est.p_hat[i]) << ' '
       << format_double(0.5 * (est.ci_high[i] - est.ci_low[i])) << '\n';
  }
}

void write_radial_plotdata(std::ostream& os, std::span<const Complex> eigenvalues) {
  if (eigenvalues.empty()) throw Error("nothing to plot");
  double r_max = 0.0;
  for (const Complex& z : eigenvalues) r_max = std::max(r_max, std::abs(z));
  if (r_max == 0.0) r_max = 1.0;
  const double width = r_max / kRadialBins;
  std::array<std::uint64_t, kRadialBins> counts{};
  for (const Complex& z : eigenvalues) {
    const auto bin = static_cast<std::size_t>(std::abs(z) / width);
    ++counts[std::min(bin, kRadialBins - 1)];
  }
  const double total = static_cast<double>(eigenvalues.size());
  for (std::size_t k = 0; k < kRadialBins; ++k) {
    os << format_double((static_cast<double>(k) + 0.5) * width) << ' ' << counts[k] << ' '
       << format_double(static_cast<double>(counts[k]) / (total * width)) << '\n';
  }
}

std::filesystem::path emit_plotdata(const TailEstimate& est, const std::filesystem::path& csv_path,
                                    const std::string& header) {
  if (est.t_grid.empty()) throw Error("nothing to plot");
  auto path = csv_path;
  path.replace_extension(".dat");
  auto os = open_output(path);
  os << header;
  write_tail_plotdata(os, est);
  return path;
}

std::filesystem::path emit_plotdata(std::span<const Complex> eigenvalues,
                                    const std::filesystem::path& csv_path, const std::string& header) {
  if (eigenvalues.empty()) throw Error("nothing to plot");
  auto path = csv_path;
  path.replace_extension(".dat");
  auto os = open_output(path);
  os << header;
  write_radial_plotdata(os, eigenvalues);
  return path;
}

std::string manifest_json(const RunManifest& m) {
  Json j;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["wall_time"] = m.wall_time;
  j["outputs"] = m.outputs;
  j["passed"] = m.passed;
  j["summary"] = m.summary;
  return j.dump(2) + "\n";
}

}  // namespace rvlab

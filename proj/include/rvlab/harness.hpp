#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvlab/ensembles.hpp"
#include "rvlab/lemma.hpp"
#include "rvlab/single_ring.hpp"
#include "rvlab/smin.hpp"

namespace rvlab {

// ---------------------------------------------------------------------------
// Spec strings
// ---------------------------------------------------------------------------

/// zero | ident | neg-ident | scalar:<re>[+<im>i] | diag:<v1,...,vn> | uniform:<lo>:<hi>
/// Complex list entries are written re, re+imi, re-imi or imi. `uniform`
/// is the deterministic equispaced grid lo..hi. Throws ParseError.
DiagonalMatrix parse_d_spec(std::string_view spec, std::size_t n);

/// log:<lo>:<hi>:<points> (log-equispaced, inclusive) | list:<v1,...>.
std::vector<double> parse_t_grid(std::string_view spec);

/// Complex scalar in the d-spec entry syntax.
Complex parse_complex(std::string_view text);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class ExperimentKind { tail, lemma, single_ring, sr_conditions, counterexample, verify_all };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::tail;
  std::size_t n = 8;
  std::string d_spec = "zero";
  Ensemble ensemble = Ensemble::unitary;
  std::string t_grid = "log:1e-6:1e-1:25";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out_path;
  bool plot = false;

  std::string lemma;            // lemma
  std::uint64_t instances = 0;  // lemma, verify-all (0 = per-lemma default)

  double margin = 0.15;         // single-ring
  double min_inside = 0.0;      // single-ring assertion threshold

  double M = 100.0;             // counterexample scale, SR1 bound for sr-check
  double kappa = 0.5;           // sr-check
  double kappa1 = 10.0;
  std::string z_grid = "line:0:3:100";  // SR2 grid: Re z equispaced, Im z = n^-kappa
  bool symmetrized = false;
  std::string sr3_z = "list:0.5,1.5,2.5";
  double sr3_delta = 0.2;
  double sr3_bound = 1.0;

  /// Validates invariants (trials >= 1, parsable specs, ...). Throws ParseError
  /// or PreconditionError.
  void validate() const;
};

/// Applies one key=value setting; keys match the long CLI flag names.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Sorted key=value lines of every field that affects results (threads and
/// output paths excluded).
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_config, as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// 17 significant digits, '.' radix, locale independent.
std::string format_double(double x);

/// `# rvlab <version> config=<hash> seed=<seed>` plus newline.
std::string provenance_header(const ExperimentConfig& config);

void write_tail_csv(std::ostream& os, const TailEstimate& est);
void write_eigen_csv(std::ostream& os, const std::vector<Spectrum>& spectra);
std::string fit_json(const ExponentFit& fit);
std::string lemma_report_json(const LemmaReport& report);
std::string annulus_json(const AnnulusReport& report);
std::string sr_report_json(const SRConditionReport& report);

/// `t p_hat ci_half_width` per grid point. Throws Error("nothing to plot")
/// on an empty estimate.
void write_tail_plotdata(std::ostream& os, const TailEstimate& est);
/// 64-bin radial histogram `r_center count density` over [0, max |lambda|].
void write_radial_plotdata(std::ostream& os, std::span<const Complex> eigenvalues);

/// Writes plot data next to `csv_path` (same stem, .dat) and returns that path.
std::filesystem::path emit_plotdata(const TailEstimate& est, const std::filesystem::path& csv_path,
                                    const std::string& header);
std::filesystem::path emit_plotdata(std::span<const Complex> eigenvalues,
                                    const std::filesystem::path& csv_path, const std::string& header);

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  double wall_time = 0.0;
  std::vector<std::string> outputs;
  bool passed = true;
  std::vector<std::string> summary;  // one human-readable line per check
};

std::string manifest_json(const RunManifest& manifest);

/// Dispatches to the owning module and writes every output file. Module
/// errors are rethrown with the experiment name prefixed.
RunManifest run_experiment(const ExperimentConfig& config);

std::string_view tool_version() noexcept;

}  // namespace rvlab

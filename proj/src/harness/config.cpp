#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>

#include "internal.hpp"
#include "rvlab/errors.hpp"
#include "rvlab/harness.hpp"

namespace rvlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(key + ": expected a non-negative integer, got '" + value + "'",
                     static_cast<std::size_t>(ptr - value.data()));
  }
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(key + ": expected a finite number, got '" + value + "'",
                     static_cast<std::size_t>(ptr - value.data()));
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ParseError(key + ": expected true or false, got '" + value + "'", 0);
}

std::string join_values(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ",") + format_double(x);
  return out;
}

std::string join_values(const std::vector<Complex>& zs) {
  std::string out;
  for (const Complex& z : zs) {
    out += (out.empty() ? "" : ",") + format_double(z.real()) + (z.imag() < 0 ? "" : "+") +
           format_double(z.imag()) + "i";
  }
  return out;
}

std::string field_name(Ensemble e) { return e == Ensemble::unitary ? "complex" : "real"; }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::tail:
      return "tail";
    case ExperimentKind::lemma:
      return "lemma";
    case ExperimentKind::single_ring:
      return "single-ring";
    case ExperimentKind::sr_conditions:
      return "sr-check";
    case ExperimentKind::counterexample:
      return "counterexample";
    case ExperimentKind::verify_all:
      return "verify-all";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  if (name == "tail") return ExperimentKind::tail;
  if (name == "lemma") return ExperimentKind::lemma;
  if (name == "single-ring" || name == "single_ring") return ExperimentKind::single_ring;
  if (name == "sr-check" || name == "sr-conditions") return ExperimentKind::sr_conditions;
  if (name == "counterexample") return ExperimentKind::counterexample;
  if (name == "verify-all") return ExperimentKind::verify_all;
  throw ParseError("unknown experiment '" + std::string(name) + "'", 0);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  if (threads < 1) throw PreconditionError("threads must be >= 1");
  if (n < 1) throw PreconditionError("n must be >= 1");
  switch (experiment) {
    case ExperimentKind::tail:
      parse_d_spec(d_spec, n);
      parse_t_grid(t_grid);
      break;
    case ExperimentKind::lemma: {
      const auto& ids = lemma_ids();
      if (std::find(ids.begin(), ids.end(), lemma) == ids.end()) {
        std::string known;
        for (const auto& id : ids) known += (known.empty() ? "" : ", ") + id;
        throw ParseError("unknown lemma '" + lemma + "' (one of: " + known + ")", 0);
      }
      break;
    }
    case ExperimentKind::single_ring:
      parse_d_spec(d_spec, n);
      if (!(margin >= 0.0)) throw PreconditionError("margin must be >= 0");
      if (min_inside < 0.0 || min_inside > 1.0) throw PreconditionError("min-inside must lie in [0, 1]");
      break;
    case ExperimentKind::sr_conditions:
      parse_d_spec(d_spec, n);
      if (detail::parse_z_grid(z_grid, 1.0).empty()) throw PreconditionError("z-grid is empty");
      detail::parse_z_grid(sr3_z, 0.0);
      break;
    case ExperimentKind::counterexample:
      if (!(M > 0.0)) throw PreconditionError("M must be > 0");
      break;
    case ExperimentKind::verify_all:
      break;
  }
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&)>> setters = {
      {"experiment", [](auto& c, const auto& v) { c.experiment = parse_experiment(v); }},
      {"n", [](auto& c, const auto& v) { c.n = parse_uint("n", v); }},
      {"d", [](auto& c, const auto& v) { c.d_spec = v; }},
      {"ensemble", [](auto& c, const auto& v) { c.ensemble = parse_ensemble(v); }},
      {"t-grid", [](auto& c, const auto& v) { c.t_grid = v; }},
      {"trials", [](auto& c, const auto& v) { c.trials = parse_uint("trials", v); }},
      {"seed", [](auto& c, const auto& v) { c.seed = parse_uint("seed", v); }},
      {"threads", [](auto& c, const auto& v) { c.threads = parse_uint("threads", v); }},
      {"out", [](auto& c, const auto& v) { c.out_path = v; }},
      {"plot", [](auto& c, const auto& v) { c.plot = parse_bool("plot", v); }},
      {"lemma", [](auto& c, const auto& v) { c.lemma = v; }},
      {"instances", [](auto& c, const auto& v) { c.instances = parse_uint("instances", v); }},
      {"margin", [](auto& c, const auto& v) { c.margin = parse_double("margin", v); }},
      {"min-inside", [](auto& c, const auto& v) { c.min_inside = parse_double("min-inside", v); }},
      {"M", [](auto& c, const auto& v) { c.M = parse_double("M", v); }},
      {"kappa", [](auto& c, const auto& v) { c.kappa = parse_double("kappa", v); }},
      {"kappa1", [](auto& c, const auto& v) { c.kappa1 = parse_double("kappa1", v); }},
      {"z-grid", [](auto& c, const auto& v) { c.z_grid = v; }},
      {"symmetrized", [](auto& c, const auto& v) { c.symmetrized = parse_bool("symmetrized", v); }},
      {"sr3-z", [](auto& c, const auto& v) { c.sr3_z = v; }},
      {"sr3-delta", [](auto& c, const auto& v) { c.sr3_delta = parse_double("sr3-delta", v); }},
      {"sr3-bound", [](auto& c, const auto& v) { c.sr3_bound = parse_double("sr3-bound", v); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ParseError("unknown setting '" + key + "'", 0);
  it->second(c, value);
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::map<std::string, std::string> settings;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value in " + path.string(), line_start);
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.starts_with("--")) key.erase(0, 2);
    settings[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return settings;
}

std::string canonical_config(const ExperimentConfig& c) {
  // Only fields the experiment reads; specs are canonicalized by value.
  std::map<std::string, std::string> kv;
  kv["experiment"] = std::string(to_string(c.experiment));
  kv["seed"] = std::to_string(c.seed);
  auto diagonal = [&] { kv["d"] = join_values(parse_d_spec(c.d_spec, c.n).diag); };
  switch (c.experiment) {
    case ExperimentKind::tail:
      kv["n"] = std::to_string(c.n);
      diagonal();
      kv["ensemble"] = std::string(to_string(c.ensemble));
      kv["t-grid"] = join_values(parse_t_grid(c.t_grid));
      kv["trials"] = std::to_string(c.trials);
      kv["plot"] = c.plot ? "true" : "false";
      break;
    case ExperimentKind::lemma:
      kv["lemma"] = c.lemma;
      kv["instances"] = std::to_string(c.instances);
      break;
    case ExperimentKind::verify_all:
      kv["instances"] = std::to_string(c.instances);
      break;
    case ExperimentKind::single_ring:
      kv["n"] = std::to_string(c.n);
      diagonal();
      kv["field"] = field_name(c.ensemble);
      kv["trials"] = std::to_string(c.trials);
      kv["margin"] = format_double(c.margin);
      kv["min-inside"] = format_double(c.min_inside);
      kv["plot"] = c.plot ? "true" : "false";
      break;
    case ExperimentKind::sr_conditions:
      kv["n"] = std::to_string(c.n);
      diagonal();
      kv["field"] = field_name(c.ensemble);
      kv["trials"] = std::to_string(c.trials);
      kv["M"] = format_double(c.M);
      kv["kappa"] = format_double(c.kappa);
      kv["kappa1"] = format_double(c.kappa1);
      kv["z-grid"] = join_values(detail::parse_z_grid(
          c.z_grid, std::pow(static_cast<double>(c.n), -c.kappa)));
      kv["symmetrized"] = c.symmetrized ? "true" : "false";
      kv["sr3-z"] = join_values(detail::parse_z_grid(c.sr3_z, 0.0));
      kv["sr3-delta"] = format_double(c.sr3_delta);
      kv["sr3-bound"] = format_double(c.sr3_bound);
      break;
    case ExperimentKind::counterexample:
      kv["M"] = format_double(c.M);
      kv["ensemble"] = std::string(to_string(c.ensemble));
      kv["trials"] = std::to_string(c.trials);
      break;
  }
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::uint64_t h = fnv1a(canonical_config(config));
  std::string hex(16, '0');
  const auto [ptr, ec] = std::to_chars(hex.data(), hex.data() + hex.size(), h, 16);
  std::string digits(hex.data(), ptr);
  return std::string(16 - digits.size(), '0') + digits;
}

}  // namespace rvlab

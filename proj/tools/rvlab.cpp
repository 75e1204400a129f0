#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvlab/errors.hpp"
#include "rvlab/harness.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flag {
  const char* key;
  const char* help;
  bool boolean = false;
};

const std::map<std::string, Flag>& flag_table() {
  static const std::map<std::string, Flag> table = {
      {"n", {"n", "dimension"}},
      {"d", {"d", "diagonal: zero | ident | neg-ident | scalar:<c> | diag:<v1,...> | uniform:<lo>:<hi>"}},
      {"ensemble", {"ensemble", "unitary | orthogonal | special_orthogonal"}},
      {"t-grid", {"t-grid", "log:<lo>:<hi>:<points> | list:<v1,...>"}},
      {"trials", {"trials", "Monte Carlo trials"}},
      {"seed", {"seed", "64-bit seed"}},
      {"threads", {"threads", "worker threads (never changes results)"}},
      {"out", {"out", "primary output path"}},
      {"plot", {"plot", "also write gnuplot data next to the output", true}},
      {"lemma", {"lemma", "lemma id"}},
      {"instances", {"instances", "instances per lemma (0 = default)"}},
      {"margin", {"margin", "annulus margin"}},
      {"min-inside", {"min-inside", "required fraction inside the annulus"}},
      {"M", {"M", "counterexample scale / SR1 bound"}},
      {"kappa", {"kappa", "SR2 exponent: Im z = n^-kappa"}},
      {"kappa1", {"kappa1", "SR2 bound on |Im S|"}},
      {"z-grid", {"z-grid", "line:<lo>:<hi>:<points> | list:<c1,...>"}},
      {"symmetrized", {"symmetrized", "SR2 on the symmetrized singular measure", true}},
      {"sr3-z", {"sr3-z", "SR3 points, list:<c1,...>"}},
      {"sr3-delta", {"sr3-delta", "SR3 threshold exponent"}},
      {"sr3-bound", {"sr3-bound", "SR3 bound"}},
  };
  return table;
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> keys;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"tail", "tail probability P(s_min(D + U) <= t)",
       {"n", "d", "ensemble", "t-grid", "trials", "seed", "threads", "out", "plot"}},
      {"lemma", "verify one lemma", {"lemma", "instances", "seed", "threads", "out"}},
      {"single-ring", "eigenvalues of U D V and annulus coverage",
       {"n", "d", "ensemble", "trials", "seed", "threads", "out", "margin", "min-inside", "plot"}},
      {"sr-check", "single ring conditions SR1, SR2, SR3",
       {"n", "d", "ensemble", "trials", "seed", "threads", "out", "M", "kappa", "kappa1", "z-grid",
        "symmetrized", "sr3-z", "sr3-delta", "sr3-bound"}},
      {"counterexample", "det(B + U) for the complex-orthogonal counterexample",
       {"M", "ensemble", "trials", "seed", "threads", "out"}},
      {"verify-all", "verify every lemma", {"instances", "seed", "threads", "out"}},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rvlab: random matrix invertibility laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rvlab::tool_version()));

  std::string config_path;
  std::string manifest_path;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> switches;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;

  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "key = value settings file; flags override it");
    sub->add_option("--manifest", manifest_path, "write the run manifest JSON here");
    for (const std::string& key : cmd.keys) {
      const Flag& f = flag_table().at(key);
      if (f.boolean) {
        options[cmd.name][key] = sub->add_flag("--" + key, switches[cmd.name][key], f.help);
      } else {
        options[cmd.name][key] = sub->add_option("--" + key, values[cmd.name][key], f.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  rvlab::RunManifest manifest;
  try {
    rvlab::ExperimentConfig config;
    config.experiment = rvlab::parse_experiment(name);
    if (config.experiment == rvlab::ExperimentKind::counterexample) {
      config.ensemble = rvlab::Ensemble::orthogonal;
    }
    if (!config_path.empty()) {
      for (const auto& [key, value] : rvlab::read_config_file(config_path)) {
        if (key == "experiment") continue;
        rvlab::apply_setting(config, key, value);
      }
    }
    for (const auto& [key, opt] : options[name]) {
      if (opt->count() == 0) continue;
      if (flag_table().at(key).boolean) {
        rvlab::apply_setting(config, key, switches[name][key] ? "true" : "false");
      } else {
        rvlab::apply_setting(config, key, values[name][key]);
      }
    }
    manifest = rvlab::run_experiment(config);
  } catch (const rvlab::ParseError& e) {
    std::cerr << "rvlab " << name << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const rvlab::PreconditionError& e) {
    std::cerr << "rvlab " << name << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rvlab " << name << ": " << e.what() << '\n';
    return kExitFail;
  }

  for (const std::string& line : manifest.summary) std::cout << line << '\n';
  const std::string json = rvlab::manifest_json(manifest);
  if (manifest_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream(manifest_path, std::ios::binary) << json;
  }
  return manifest.passed ? 0 : kExitFail;
}

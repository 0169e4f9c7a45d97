#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "exrings/experiments.hpp"

namespace exrings {

// Shared command-line overrides; config-file values apply where unset.
struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;     // --out
  std::optional<unsigned> jobs;           // --jobs
  std::optional<std::uint64_t> seed;      // --seed
  Profile profile = Profile::Fast;        // --profile
  std::string dump_hamiltonian;           // simulate: debug CSV path
};

// Single trajectory from a config file; writes ring populations and the
// diffusion series as CSV plus a manifest.  Exit 0 ok / 1 config / 2 numerical.
int cmd_simulate(const CommonOptions& options);

// Parameter-sweep experiment from a config file; writes results.csv and
// manifest.json.
int cmd_sweep(const CommonOptions& options);

struct AnalyticRequest {
  int n = 5;
  int rings = 31;
  double radius = 1.0;
  double spacing = 10.0;
  double t = 1.0;
  double strength = 1.0;
  bool nearest_neighbor_only = false;
  std::optional<double> gamma;   // print the dephased-chain reference
  bool print_spectrum = false;
  std::string spectrum_csv;      // optional CSV path for the spectrum
  bool interference_demo = false;
};

// Evaluates the closed-form predictions directly (no config file).
int cmd_analytic(const AnalyticRequest& request);

struct ValidateRequest {
  Profile profile = Profile::Fast;
  unsigned jobs = 1;
  std::string out_dir = "out";
};

// Runs the full acceptance suite and prints one pass/fail line per criterion.
int cmd_validate(const ValidateRequest& request);

}  // namespace exrings

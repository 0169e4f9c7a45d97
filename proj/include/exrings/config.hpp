#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "exrings/dynamics.hpp"
#include "exrings/experiments.hpp"
#include "exrings/lattice.hpp"

namespace exrings {

// Raised on any malformed or out-of-range config field; the message always
// carries the dotted key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  GeometryKind kind = GeometryKind::RingStack;
  int n = 1;
  int rings = 3;
  double radius = 1.0;
  double spacing = 10.0;
};

struct CouplingConfig {
  double strength = 1.0;  // J
};

struct InitialStateConfig {
  StateKind kind = StateKind::Delocalized;
  int ring = 0;              // delocalized support (centered index)
  std::optional<int> site;   // localized site; default first site of ring 0
};

struct DynamicsConfig {
  double gamma = 0.0;
  double kappa = 0.0;
  double t_max = 1.0;
  int samples = 51;
  std::optional<double> dt_override;
  bool renormalize = false;
};

struct DisorderConfig {
  double sigma = 0.0;
  std::uint64_t seed = 12345;
  int realizations = 1;
};

struct OutputConfig {
  std::string dir = "out";
  std::string prefix = "run";
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Scaling;
  SweepSpec spec;  // defaults for (kind, profile), overridden by config keys
};

struct RunConfig {
  GeometryConfig geometry;
  CouplingConfig coupling;
  InitialStateConfig initial_state;
  DynamicsConfig dynamics;
  DisorderConfig disorder;
  std::optional<ExperimentConfig> experiment;
  OutputConfig output;
};

RunConfig load_run_config(const std::string& path, Profile profile);
RunConfig parse_run_config(const std::string& json_text, Profile profile);

// Default-filled echo of the effective configuration (JSON), for manifests.
std::string run_config_json(const RunConfig& config);

// Human-readable table of every config key with its default, for --help.
std::string config_key_reference();

}  // namespace exrings

#include "exrings/config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

#include "exrings/io.hpp"

namespace exrings {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Walks a JSON object with dotted-path error reporting and unknown-key
// rejection.
class Section {
 public:
  Section(const json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section child(const std::string& key) const {
    return Section(node_.at(key), qualified(key));
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    if (!node_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) const {
    if (!node_.contains(key))
      throw ConfigError(qualified(key) + ": missing required key");
    return convert<T>(key);
  }

  void finish(const std::set<std::string>& allowed) const {
    for (const auto& item : node_.items())
      if (!allowed.contains(item.key()))
        throw ConfigError(qualified(item.key()) + ": unknown key");
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  template <typename T>
  T convert(const std::string& key) const {
    try {
      return node_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(qualified(key) + ": wrong type");
    }
  }

  const json& node_;
  std::string path_;
};

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path + ": " + message);
}

GeometryConfig parse_geometry(const Section& root) {
  GeometryConfig geometry;
  if (!root.has("geometry")) return geometry;
  const Section s = root.child("geometry");
  s.finish({"kind", "n", "N", "R", "spacing"});
  try {
    geometry.kind = geometry_kind_from_string(
        s.get<std::string>("kind", to_string(geometry.kind)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.qualified("kind") + ": " + e.what());
  }
  geometry.n = s.get<int>("n", geometry.n);
  geometry.rings = s.get<int>("N", geometry.rings);
  geometry.radius = s.get<double>("R", geometry.radius);
  geometry.spacing = s.get<double>("spacing", geometry.spacing);
  check(geometry.n >= 1, s.qualified("n"), "must be >= 1");
  check(geometry.rings >= 1, s.qualified("N"), "must be >= 1");
  check(geometry.radius > 0.0, s.qualified("R"), "must be > 0");
  check(geometry.spacing > 0.0, s.qualified("spacing"), "must be > 0");
  return geometry;
}

CouplingConfig parse_coupling(const Section& root) {
  CouplingConfig coupling;
  if (!root.has("coupling")) return coupling;
  const Section s = root.child("coupling");
  s.finish({"J"});
  coupling.strength = s.get<double>("J", coupling.strength);
  check(coupling.strength > 0.0, s.qualified("J"), "must be > 0");
  return coupling;
}

InitialStateConfig parse_initial_state(const Section& root) {
  InitialStateConfig state;
  if (!root.has("initial_state")) return state;
  const Section s = root.child("initial_state");
  s.finish({"kind", "ring", "site"});
  try {
    state.kind =
        state_kind_from_string(s.get<std::string>("kind", to_string(state.kind)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.qualified("kind") + ": " + e.what());
  }
  state.ring = s.get<int>("ring", state.ring);
  if (s.has("site")) state.site = s.require<int>("site");
  return state;
}

DynamicsConfig parse_dynamics(const Section& root) {
  DynamicsConfig dynamics;
  if (!root.has("dynamics")) return dynamics;
  const Section s = root.child("dynamics");
  s.finish({"gamma", "kappa", "t_max", "n_time_samples", "integrator",
            "renormalize"});
  dynamics.gamma = s.get<double>("gamma", dynamics.gamma);
  dynamics.kappa = s.get<double>("kappa", dynamics.kappa);
  dynamics.t_max = s.get<double>("t_max", dynamics.t_max);
  dynamics.samples = s.get<int>("n_time_samples", dynamics.samples);
  dynamics.renormalize = s.get<bool>("renormalize", dynamics.renormalize);
  if (s.has("integrator")) {
    const Section integ = s.child("integrator");
    integ.finish({"dt_override"});
    if (integ.has("dt_override")) {
      const double dt = integ.require<double>("dt_override");
      check(dt > 0.0, integ.qualified("dt_override"), "must be > 0");
      dynamics.dt_override = dt;
    }
  }
  check(dynamics.gamma >= 0.0, s.qualified("gamma"), "must be >= 0");
  check(dynamics.kappa >= 0.0, s.qualified("kappa"), "must be >= 0");
  check(dynamics.t_max > 0.0, s.qualified("t_max"), "must be > 0");
  check(dynamics.samples >= 1, s.qualified("n_time_samples"), "must be >= 1");
  return dynamics;
}

DisorderConfig parse_disorder(const Section& root) {
  DisorderConfig disorder;
  if (!root.has("disorder")) return disorder;
  const Section s = root.child("disorder");
  s.finish({"sigma", "seed", "realizations"});
  disorder.sigma = s.get<double>("sigma", disorder.sigma);
  disorder.seed = s.get<std::uint64_t>("seed", disorder.seed);
  disorder.realizations = s.get<int>("realizations", disorder.realizations);
  check(disorder.sigma >= 0.0, s.qualified("sigma"), "must be >= 0");
  check(disorder.realizations >= 1, s.qualified("realizations"), "must be >= 1");
  return disorder;
}

TimeGrid parse_time_grid(const Section& parent, TimeGrid fallback) {
  if (!parent.has("time_grid")) return fallback;
  const Section s = parent.child("time_grid");
  s.finish({"kind", "t_min", "t_max", "samples"});
  TimeGrid grid = fallback;
  const std::string kind = s.get<std::string>(
      "kind", grid.kind == TimeGrid::Kind::Linear ? "linear" : "log");
  if (kind == "linear") {
    grid.kind = TimeGrid::Kind::Linear;
  } else if (kind == "log") {
    grid.kind = TimeGrid::Kind::Log;
  } else {
    throw ConfigError(s.qualified("kind") + ": expected \"linear\" or \"log\"");
  }
  grid.t_min = s.get<double>("t_min", grid.t_min);
  grid.t_max = s.get<double>("t_max", grid.t_max);
  grid.samples = s.get<int>("samples", grid.samples);
  check(grid.t_max > 0.0, s.qualified("t_max"), "must be > 0");
  check(grid.samples >= 1, s.qualified("samples"), "must be >= 1");
  if (grid.kind == TimeGrid::Kind::Log)
    check(grid.t_min > 0.0 && grid.t_min < grid.t_max, s.qualified("t_min"),
          "log grids need 0 < t_min < t_max");
  return grid;
}

std::vector<StateKind> parse_states(const Section& s,
                                    std::vector<StateKind> fallback) {
  if (!s.has("states")) return fallback;
  const auto names = s.require<std::vector<std::string>>("states");
  check(!names.empty(), s.qualified("states"), "must be non-empty");
  std::vector<StateKind> states;
  for (const auto& name : names) {
    try {
      states.push_back(state_kind_from_string(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.qualified("states") + ": " + e.what());
    }
  }
  return states;
}

ExperimentConfig parse_experiment(const Section& root, Profile profile) {
  const Section s = root.child("experiment");
  s.finish({"kind", "n_values", "N", "R", "J", "spacings", "states", "gammas",
            "kappa", "sigmas", "realizations", "base_seed", "sigma_levels",
            "time_grid"});
  ExperimentConfig experiment;
  try {
    experiment.kind = experiment_kind_from_string(s.require<std::string>("kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.qualified("kind") + ": " + e.what());
  }
  SweepSpec spec = default_sweep_spec(experiment.kind, profile);
  spec.n_values = s.get<std::vector<int>>("n_values", spec.n_values);
  spec.rings = s.get<int>("N", spec.rings);
  spec.radius = s.get<double>("R", spec.radius);
  spec.strength = s.get<double>("J", spec.strength);
  spec.spacings = s.get<std::vector<double>>("spacings", spec.spacings);
  spec.states = parse_states(s, spec.states);
  spec.gammas = s.get<std::vector<double>>("gammas", spec.gammas);
  spec.kappa = s.get<double>("kappa", spec.kappa);
  spec.disorder_sigmas = s.get<std::vector<double>>("sigmas", spec.disorder_sigmas);
  spec.realizations = s.get<int>("realizations", spec.realizations);
  spec.base_seed = s.get<std::uint64_t>("base_seed", spec.base_seed);
  spec.sigma_levels = s.get<std::vector<double>>("sigma_levels", spec.sigma_levels);
  spec.times = parse_time_grid(s, spec.times);
  check(!spec.n_values.empty(), s.qualified("n_values"), "must be non-empty");
  check(!spec.spacings.empty(), s.qualified("spacings"), "must be non-empty");
  check(spec.rings >= 1 && spec.rings % 2 == 1, s.qualified("N"),
        "must be odd and >= 1");
  check(spec.radius > 0.0, s.qualified("R"), "must be > 0");
  check(spec.strength > 0.0, s.qualified("J"), "must be > 0");
  check(spec.realizations >= 1, s.qualified("realizations"), "must be >= 1");
  check(spec.kappa >= 0.0, s.qualified("kappa"), "must be >= 0");
  experiment.spec = std::move(spec);
  return experiment;
}

OutputConfig parse_output(const Section& root) {
  OutputConfig output;
  if (!root.has("output")) return output;
  const Section s = root.child("output");
  s.finish({"dir", "prefix"});
  output.dir = s.get<std::string>("dir", output.dir);
  output.prefix = s.get<std::string>("prefix", output.prefix);
  check(!output.prefix.empty(), s.qualified("prefix"), "must be non-empty");
  return output;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, Profile profile) {
  json parsed;
  try {
    parsed = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const Section root(parsed, "");
  root.finish({"geometry", "coupling", "initial_state", "dynamics", "disorder",
               "experiment", "output"});

  RunConfig config;
  config.geometry = parse_geometry(root);
  config.coupling = parse_coupling(root);
  config.initial_state = parse_initial_state(root);
  config.dynamics = parse_dynamics(root);
  config.disorder = parse_disorder(root);
  if (root.has("experiment"))
    config.experiment = parse_experiment(root, profile);
  config.output = parse_output(root);
  return config;
}

RunConfig load_run_config(const std::string& path, Profile profile) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text, profile);
}

std::string run_config_json(const RunConfig& config) {
  ordered_json j;
  j["geometry"] = {{"kind", to_string(config.geometry.kind)},
                   {"n", config.geometry.n},
                   {"N", config.geometry.rings},
                   {"R", config.geometry.radius},
                   {"spacing", config.geometry.spacing}};
  j["coupling"] = {{"J", config.coupling.strength}};
  ordered_json initial = {{"kind", to_string(config.initial_state.kind)},
                          {"ring", config.initial_state.ring}};
  if (config.initial_state.site) initial["site"] = *config.initial_state.site;
  j["initial_state"] = initial;
  ordered_json dynamics = {{"gamma", config.dynamics.gamma},
                           {"kappa", config.dynamics.kappa},
                           {"t_max", config.dynamics.t_max},
                           {"n_time_samples", config.dynamics.samples},
                           {"renormalize", config.dynamics.renormalize}};
  dynamics["integrator"] =
      config.dynamics.dt_override
          ? ordered_json{{"dt_override", *config.dynamics.dt_override}}
          : ordered_json{{"dt_override", nullptr}};
  j["dynamics"] = dynamics;
  j["disorder"] = {{"sigma", config.disorder.sigma},
                   {"seed", config.disorder.seed},
                   {"realizations", config.disorder.realizations}};
  if (config.experiment) {
    const auto& spec = config.experiment->spec;
    ordered_json grid = {{"kind", spec.times.kind == TimeGrid::Kind::Linear
                                      ? "linear"
                                      : "log"},
                         {"t_min", spec.times.t_min},
                         {"t_max", spec.times.t_max},
                         {"samples", spec.times.samples}};
    std::vector<std::string> states;
    for (auto s : spec.states) states.push_back(to_string(s));
    j["experiment"] = {{"kind", to_string(config.experiment->kind)},
                       {"n_values", spec.n_values},
                       {"N", spec.rings},
                       {"R", spec.radius},
                       {"J", spec.strength},
                       {"spacings", spec.spacings},
                       {"states", states},
                       {"gammas", spec.gammas},
                       {"kappa", spec.kappa},
                       {"sigmas", spec.disorder_sigmas},
                       {"realizations", spec.realizations},
                       {"base_seed", spec.base_seed},
                       {"sigma_levels", spec.sigma_levels},
                       {"time_grid", grid}};
  }
  j["output"] = {{"dir", config.output.dir}, {"prefix", config.output.prefix}};
  return j.dump(2) + "\n";
}

std::string config_key_reference() {
  std::ostringstream os;
  os << "Config keys (JSON) and defaults:\n"
     << "  geometry.kind            \"rings\" | \"helix\"        (default \"rings\")\n"
     << "  geometry.n               sites per ring/turn        (default 1)\n"
     << "  geometry.N               rings/turns                (default 3)\n"
     << "  geometry.R               ring radius                (default 1)\n"
     << "  geometry.spacing         ring separation or pitch   (default 10)\n"
     << "  coupling.J               kernel strength            (default 1)\n"
     << "  initial_state.kind       \"delocalized\"|\"localized\" (default \"delocalized\")\n"
     << "  initial_state.ring       support ring (centered)    (default 0)\n"
     << "  initial_state.site       localized site             (default: first site of ring 0)\n"
     << "  dynamics.gamma           dephasing rate             (default 0)\n"
     << "  dynamics.kappa           recombination rate         (default 0)\n"
     << "  dynamics.t_max           final time (1/J)           (default 1)\n"
     << "  dynamics.n_time_samples  samples in [0, t_max]      (default 51)\n"
     << "  dynamics.integrator.dt_override  fixed RK4 step     (default: auto)\n"
     << "  dynamics.renormalize     divide populations by trace (default false)\n"
     << "  disorder.sigma           on-site std deviation      (default 0)\n"
     << "  disorder.seed            RNG seed                   (default 12345)\n"
     << "  disorder.realizations    ensemble size              (default 1)\n"
     << "  experiment.kind          scaling|helix|disorder|dephasing (required for sweep)\n"
     << "  experiment.n_values, .N, .R, .J, .spacings, .states, .gammas,\n"
     << "  experiment.kappa, .sigmas, .realizations, .base_seed, .sigma_levels,\n"
     << "  experiment.time_grid.{kind,t_min,t_max,samples}\n"
     << "                           defaults depend on kind and --profile (see README)\n"
     << "  output.dir               output directory           (default \"out\")\n"
     << "  output.prefix            output file prefix         (default \"run\")\n";
  return os.str();
}

}  // namespace exrings

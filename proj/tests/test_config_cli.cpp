#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <string>

#include "exrings/cli.hpp"
#include "exrings/config.hpp"
#include "exrings/io.hpp"
#include "exrings/observables.hpp"

using namespace exrings;
namespace fs = std::filesystem;

namespace {

// Scratch directory under the build tree, wiped per test case.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("exrings_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string full = (path / name).string();
    std::ofstream out(full);
    out << content;
    return full;
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("config parsing: defaults, overrides and path-qualified errors") {
  const RunConfig defaults = parse_run_config("{}", Profile::Fast);
  CHECK(defaults.geometry.n == 1);
  CHECK(defaults.geometry.rings == 3);
  CHECK(defaults.coupling.strength == 1.0);
  CHECK(defaults.dynamics.t_max == 1.0);
  CHECK_FALSE(defaults.experiment.has_value());

  const RunConfig parsed = parse_run_config(R"({
    "geometry": {"kind": "helix", "n": 4, "N": 5, "R": 1.5, "spacing": 3.0},
    "dynamics": {"gamma": 0.2, "t_max": 2.0, "integrator": {"dt_override": 0.005}},
    "disorder": {"sigma": 0.1, "seed": 77, "realizations": 3},
    "output": {"dir": "results", "prefix": "case"}
  })",
                                            Profile::Fast);
  CHECK(parsed.geometry.kind == GeometryKind::Helix);
  CHECK(parsed.geometry.radius == 1.5);
  CHECK(parsed.dynamics.dt_override == 0.005);
  CHECK(parsed.disorder.seed == 77);
  CHECK(parsed.output.prefix == "case");

  auto message_of = [](const std::string& text) {
    try {
      parse_run_config(text, Profile::Fast);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message_of(R"({"geometry": {"n": 0}})").find("geometry.n") == 0);
  CHECK(message_of(R"({"geometry": {"radius": 1}})").find("geometry.radius") == 0);
  CHECK(message_of(R"({"dynamics": {"gamma": -1}})").find("dynamics.gamma") == 0);
  CHECK(message_of(R"({"experiment": {}})").find("experiment.kind") == 0);
  CHECK(message_of(R"({"experiment": {"kind": "melting"}})")
            .find("experiment.kind") == 0);
  CHECK(message_of(R"({"initial_state": {"kind": "smeared"}})")
            .find("initial_state.kind") == 0);
  CHECK(message_of("[1, 2]").find("expected an object") != std::string::npos);
  CHECK(message_of("{") .find("not valid JSON") != std::string::npos);
}

TEST_CASE("experiment config: profile defaults overridden field by field") {
  const RunConfig config = parse_run_config(R"({
    "experiment": {"kind": "disorder", "n_values": [1, 2], "sigmas": [0.1],
                    "realizations": 9, "base_seed": 5,
                    "time_grid": {"kind": "log", "t_min": 0.5, "t_max": 2.0, "samples": 5}}
  })",
                                            Profile::Fast);
  REQUIRE(config.experiment.has_value());
  const SweepSpec& spec = config.experiment->spec;
  CHECK(spec.n_values == std::vector<int>{1, 2});
  CHECK(spec.realizations == 9);
  CHECK(spec.base_seed == 5);
  CHECK(spec.rings == 31);  // default preserved
  CHECK(spec.times.kind == TimeGrid::Kind::Log);

  // the config echo is a stable, parseable document
  const std::string echo = run_config_json(config);
  const auto parsed = nlohmann::json::parse(echo);
  CHECK(parsed["experiment"]["kind"] == "disorder");
  CHECK(parsed["experiment"]["realizations"] == 9);
  CHECK(parsed["geometry"]["N"] == 3);

  CHECK(config_key_reference().find("geometry.n") != std::string::npos);
  CHECK(config_key_reference().find("disorder.seed") != std::string::npos);
}

TEST_CASE("cmd_simulate writes populations, sigma series and manifest") {
  TempDir dir;
  const std::string config = dir.file("run.json", R"({
    "geometry": {"kind": "rings", "n": 1, "N": 3, "R": 1.0, "spacing": 10.0},
    "dynamics": {"gamma": 0.0, "t_max": 1.0, "n_time_samples": 5},
    "output": {"dir": ")" + dir.at("out") + R"(", "prefix": "mini"}
  })");
  CommonOptions options;
  options.config_path = config;
  CHECK(cmd_simulate(options) == 0);

  const std::string sigma_csv = read_text_file(dir.at("out") + "/mini_sigma.csv");
  CHECK(sigma_csv.rfind("time,sigma\n0,0\n", 0) == 0);  // sigma(0) = 0
  CHECK(count_lines(sigma_csv) == 6);
  const std::string pops_csv =
      read_text_file(dir.at("out") + "/mini_populations.csv");
  CHECK(pops_csv.rfind("time,ring,population\n", 0) == 0);
  CHECK(count_lines(pops_csv) == 1 + 5 * 3);
  const auto manifest = nlohmann::json::parse(
      read_text_file(dir.at("out") + "/mini_manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["config"]["geometry"]["n"] == 1);
}

TEST_CASE("cmd_simulate under weak dephasing stays close to the closed form") {
  TempDir dir;
  const std::string config = dir.file("run.json", R"({
    "geometry": {"kind": "rings", "n": 3, "N": 31, "R": 1.0, "spacing": 10.0},
    "initial_state": {"kind": "delocalized"},
    "dynamics": {"gamma": 0.1, "t_max": 1.0, "n_time_samples": 3},
    "output": {"dir": ")" + dir.at("out") + R"(", "prefix": "deph"}
  })");
  CommonOptions options;
  options.config_path = config;
  REQUIRE(cmd_simulate(options) == 0);
  const std::string csv = read_text_file(dir.at("out") + "/deph_sigma.csv");
  const auto last_comma = csv.find_last_of(',');
  const double sigma_final = std::stod(csv.substr(last_comma + 1));
  const auto bc = extract_block_coefficients(3, 31, 1.0, 10.0, CouplingKernel(1.0));
  const double analytic = sigma_deloc_analytic(bc, 1.0);
  CHECK(std::abs(sigma_final - analytic) / analytic < 0.03);
}

TEST_CASE("cmd_simulate exit codes distinguish config from success") {
  CommonOptions missing;
  missing.config_path = "/nonexistent/config.json";
  CHECK(cmd_simulate(missing) == 1);

  TempDir dir;
  CommonOptions bad_key;
  bad_key.config_path = dir.file("bad.json", R"({"geometry": {"n": -3}})");
  CHECK(cmd_simulate(bad_key) == 1);

  CommonOptions unknown;
  unknown.config_path = dir.file("unknown.json", R"({"geom": {}})");
  CHECK(cmd_simulate(unknown) == 1);
}

TEST_CASE("cmd_sweep: deterministic bytes and closed-run consistency") {
  TempDir dir;
  const std::string config = dir.file("sweep.json", R"({
    "experiment": {"kind": "disorder", "n_values": [1, 2], "N": 7,
                    "sigmas": [0.0], "realizations": 1,
                    "time_grid": {"kind": "log", "t_min": 0.5, "t_max": 2.0, "samples": 5}},
    "output": {"dir": ")" + dir.at("out") + R"(", "prefix": "sweep"}
  })");
  CommonOptions options;
  options.config_path = config;
  options.jobs = 1;
  REQUIRE(cmd_sweep(options) == 0);
  const std::string first = read_text_file(dir.at("out") + "/sweep_results.csv");
  REQUIRE(cmd_sweep(options) == 0);
  CHECK(first == read_text_file(dir.at("out") + "/sweep_results.csv"));
  CHECK(first.find("sigma_mean") != std::string::npos);

  CommonOptions no_experiment;
  no_experiment.config_path = dir.file("plain.json", "{}");
  CHECK(cmd_sweep(no_experiment) == 1);
}

TEST_CASE("cmd_analytic computes the closed forms") {
  AnalyticRequest request;  // defaults: n=5, N=31, D=10, t=1
  request.nearest_neighbor_only = true;
  CHECK(cmd_analytic(request) == 0);

  AnalyticRequest full;
  full.print_spectrum = false;
  CHECK(cmd_analytic(full) == 0);

  TempDir dir;
  AnalyticRequest spectrum;
  spectrum.n = 3;
  spectrum.rings = 5;
  spectrum.spectrum_csv = dir.at("spectrum.csv");
  CHECK(cmd_analytic(spectrum) == 0);
  const std::string csv = read_text_file(dir.at("spectrum.csv"));
  CHECK(csv.rfind("p,q,eigenvalue\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 15);

  AnalyticRequest demo;
  demo.interference_demo = true;
  CHECK(cmd_analytic(demo) == 0);

  AnalyticRequest invalid;
  invalid.rings = 4;  // even N
  CHECK(cmd_analytic(invalid) == 1);
  AnalyticRequest bad_time;
  bad_time.t = -1.0;
  CHECK(cmd_analytic(bad_time) == 1);
}

TEST_CASE("formatting is stable and copes with special values") {
  CHECK(fmt_g12(0.1) == "0.1");
  CHECK(fmt_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt_g12(12345.0) == "12345");
  CHECK(fmt_g12(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "exrings/cli.hpp"
#include "exrings/config.hpp"
#include "exrings/threadpool.hpp"
#include "exrings/version.hpp"

namespace {

// --profile validator shared by the subcommands.
std::string check_profile(const std::string& value) {
  if (value != "paper" && value != "fast") return "must be 'paper' or 'fast'";
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exciton diffusion on stacked-ring and helical chromophore "
               "arrays: simulation, parameter sweeps, closed-form predictions "
               "and a validation suite"};
  app.set_version_flag("--version", std::string(exrings::kVersion));
  app.require_subcommand(1);
  app.footer(exrings::config_key_reference());

  std::string config_path;
  std::string out_dir;
  std::string profile_name = "fast";
  unsigned jobs = exrings::ThreadPool::default_jobs();
  bool jobs_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string dump_hamiltonian;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config_opt =
        cmd->add_option("--config", config_path, "Run configuration file (JSON)");
    if (needs_config) config_opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    cmd->add_option("--jobs", jobs, "Worker threads (default: available cores)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { jobs_set = true; });
    cmd->add_option("--seed", seed, "Base RNG seed (overrides the config)")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--profile", profile_name,
                    "Parameter profile: paper | fast (default fast)")
        ->check(CLI::Validator(check_profile, "PROFILE"));
  };

  auto* simulate = app.add_subcommand(
      "simulate", "Run one trajectory and write populations + sigma CSV");
  add_common(simulate, true);
  simulate->add_option("--dump-hamiltonian", dump_hamiltonian,
                       "Also write the Hamiltonian as row,col,value CSV");

  auto* sweep = app.add_subcommand(
      "sweep", "Run a parameter-sweep experiment (results.csv + manifest.json)");
  add_common(sweep, true);

  exrings::AnalyticRequest analytic_request;
  auto* analytic = app.add_subcommand(
      "analytic", "Evaluate the closed-form diffusion predictions");
  analytic->add_option("--n", analytic_request.n, "Sites per ring (default 5)");
  analytic->add_option("--N", analytic_request.rings, "Rings (odd, default 31)");
  analytic->add_option("--R", analytic_request.radius, "Ring radius (default 1)");
  analytic->add_option("--D", analytic_request.spacing,
                       "Ring separation (default 10)");
  analytic->add_option("--t", analytic_request.t, "Time in 1/J (default 1)");
  analytic->add_option("--J", analytic_request.strength,
                       "Coupling strength (default 1)");
  analytic->add_flag("--nearest-neighbor-only",
                     analytic_request.nearest_neighbor_only,
                     "Use the symmetric nearest-neighbour closed forms");
  double gamma_value = 0.0;
  auto* gamma_opt = analytic->add_option(
      "--gamma", gamma_value,
      "Also print the dephased tight-binding reference sigma");
  analytic->add_flag("--spectrum", analytic_request.print_spectrum,
                     "Print the block-circulant spectrum as CSV");
  analytic->add_option("--spectrum-csv", analytic_request.spectrum_csv,
                       "Write the block-circulant spectrum to a CSV file");
  analytic->add_flag("--demo-interference", analytic_request.interference_demo,
                     "Evaluate a coupling table whose inter-ring rows sum to "
                     "zero (the delocalized state does not propagate)");

  auto* validate = app.add_subcommand(
      "validate", "Run the acceptance suite and print one line per criterion");
  add_common(validate, false);

  CLI11_PARSE(app, argc, argv);

  const exrings::Profile profile = exrings::profile_from_string(profile_name);

  if (simulate->parsed()) {
    exrings::CommonOptions options;
    options.config_path = config_path;
    if (!out_dir.empty()) options.out_dir = out_dir;
    if (seed_set) options.seed = seed;
    options.profile = profile;
    options.dump_hamiltonian = dump_hamiltonian;
    return exrings::cmd_simulate(options);
  }
  if (sweep->parsed()) {
    exrings::CommonOptions options;
    options.config_path = config_path;
    if (!out_dir.empty()) options.out_dir = out_dir;
    options.jobs = jobs_set ? jobs : exrings::ThreadPool::default_jobs();
    if (seed_set) options.seed = seed;
    options.profile = profile;
    return exrings::cmd_sweep(options);
  }
  if (analytic->parsed()) {
    if (gamma_opt->count() > 0) analytic_request.gamma = gamma_value;
    return exrings::cmd_analytic(analytic_request);
  }
  exrings::ValidateRequest request;
  request.profile = profile;
  request.jobs = jobs_set ? jobs : exrings::ThreadPool::default_jobs();
  request.out_dir = out_dir.empty() ? "out" : out_dir;
  return exrings::cmd_validate(request);
}

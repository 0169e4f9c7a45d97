#include "exrings/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <json.hpp>

#include "exrings/config.hpp"
#include "exrings/io.hpp"
#include "exrings/log.hpp"
#include "exrings/observables.hpp"
#include "exrings/spectral.hpp"
#include "exrings/validation.hpp"
#include "exrings/version.hpp"

namespace exrings {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Config errors and invalid parameters exit 1; numerical failures exit 2.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

SiteLattice lattice_from_config(const GeometryConfig& geometry) {
  return geometry.kind == GeometryKind::RingStack
             ? build_ring_stack(geometry.n, geometry.rings, geometry.radius,
                                geometry.spacing)
             : build_helix(geometry.n, geometry.rings, geometry.radius,
                           geometry.spacing);
}

void write_manifest(const std::string& path, const std::string& command,
                    const RunConfig& config, unsigned jobs, double wall_seconds,
                    const std::vector<std::string>& outputs) {
  ordered_json manifest;
  manifest["tool"] = "exrings";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["jobs"] = jobs;
  manifest["wall_time_s"] = wall_seconds;
  manifest["outputs"] = outputs;
  manifest["config"] = nlohmann::ordered_json::parse(run_config_json(config));
  write_text_file(path, manifest.dump(2) + "\n");
}

}  // namespace

int cmd_simulate(const CommonOptions& options) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = load_run_config(options.config_path, options.profile);
    if (options.out_dir) config.output.dir = *options.out_dir;
    if (options.seed) config.disorder.seed = *options.seed;

    const SiteLattice lattice = lattice_from_config(config.geometry);
    const CouplingKernel kernel(config.coupling.strength);
    std::optional<VectorXd> offsets;
    if (config.disorder.sigma > 0.0)
      offsets = sample_disorder({config.disorder.sigma, config.disorder.seed},
                                lattice.size());
    const Hamiltonian hamiltonian = assemble_hamiltonian(lattice, kernel, offsets);

    const QuantumState psi0 =
        config.initial_state.kind == StateKind::Delocalized
            ? delocalized_state(lattice, config.initial_state.ring)
            : (config.initial_state.site
                   ? localized_state(lattice, *config.initial_state.site)
                   : localized_state(lattice));

    const TimeGrid grid{TimeGrid::Kind::Linear, 0.0, config.dynamics.t_max,
                        config.dynamics.samples};
    const VectorXd times = grid.build();

    MatrixXd populations(lattice.ring_count(), times.size());
    const bool closed =
        config.dynamics.gamma == 0.0 && config.dynamics.kappa == 0.0;
    if (closed) {
      populations = closed_ring_population_series(hamiltonian, lattice, psi0, times);
    } else {
      LindbladOptions lindblad;
      lindblad.dt_override = config.dynamics.dt_override;
      const int n = lattice.sites_per_ring();
      evolve_lindblad_observe(
          hamiltonian, {config.dynamics.gamma, config.dynamics.kappa}, psi0,
          times,
          [&](Eigen::Index i, double, const Eigen::MatrixXcd& rho) {
            populations.col(i).setZero();
            for (Eigen::Index s = 0; s < rho.rows(); ++s)
              populations(static_cast<int>(s) / n, i) += rho(s, s).real();
          },
          lindblad);
    }
    if (config.dynamics.renormalize)
      for (Eigen::Index i = 0; i < times.size(); ++i) {
        const double total = populations.col(i).sum();
        if (total > 0.0) populations.col(i) /= total;
      }

    DiffusionSeries series;
    series.times = times;
    series.meta = {{"geometry", to_string(config.geometry.kind)},
                   {"n", std::to_string(config.geometry.n)},
                   {"N", std::to_string(config.geometry.rings)},
                   {"state", to_string(config.initial_state.kind)},
                   {"gamma", fmt_g12(config.dynamics.gamma)},
                   {"kappa", fmt_g12(config.dynamics.kappa)},
                   {"Sigma", fmt_g12(config.disorder.sigma)}};
    series.sigma.resize(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
      RingPopulations p;
      p.p = populations.col(i);
      p.first_ring = lattice.min_ring();
      series.sigma[i] = diffusion_length(p, config.geometry.spacing);
    }

    ensure_directory(config.output.dir);
    const std::string base = config.output.dir + "/" + config.output.prefix;
    std::vector<std::string> outputs;
    write_text_file(base + "_populations.csv",
                    ring_population_series_csv(times, populations,
                                               lattice.min_ring()));
    outputs.push_back(base + "_populations.csv");
    write_text_file(base + "_sigma.csv", diffusion_series_csv(series));
    outputs.push_back(base + "_sigma.csv");
    if (!options.dump_hamiltonian.empty()) {
      write_text_file(options.dump_hamiltonian, hamiltonian_csv(hamiltonian));
      outputs.push_back(options.dump_hamiltonian);
    }
    write_manifest(base + "_manifest.json", "simulate", config, 1,
                   elapsed_seconds(start), outputs);

    std::cout << "sigma(t=" << fmt_g12(times[times.size() - 1])
              << ") = " << fmt_g12(series.sigma[series.sigma.size() - 1])
              << "  [" << base << "_sigma.csv]\n";
    return kExitOk;
  });
}

int cmd_sweep(const CommonOptions& options) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    RunConfig config = load_run_config(options.config_path, options.profile);
    if (!config.experiment)
      throw ConfigError("experiment: missing required section for sweep");
    if (options.out_dir) config.output.dir = *options.out_dir;
    if (options.seed) config.experiment->spec.base_seed = *options.seed;
    const unsigned jobs = options.jobs.value_or(1);
    config.experiment->spec.jobs = static_cast<int>(jobs);

    SweepGrid grid;
    switch (config.experiment->kind) {
      case ExperimentKind::Scaling:
        grid = run_scaling_experiment(config.experiment->spec);
        break;
      case ExperimentKind::Helix:
        grid = run_helix_approximation(config.experiment->spec);
        break;
      case ExperimentKind::Disorder:
        grid = run_disorder_sweep(config.experiment->spec);
        break;
      case ExperimentKind::Dephasing:
        grid = run_dephasing_sweep(config.experiment->spec);
        break;
    }

    ensure_directory(config.output.dir);
    const std::string base = config.output.dir + "/" + config.output.prefix;
    write_text_file(base + "_results.csv", grid.to_csv());
    write_manifest(base + "_manifest.json", "sweep", config, jobs,
                   elapsed_seconds(start), {base + "_results.csv"});

    std::cout << to_string(config.experiment->kind) << " sweep: "
              << grid.cell_count() << " grid points, "
              << grid.derived.size() << " derived records  [" << base
              << "_results.csv]\n";
    return kExitOk;
  });
}

int cmd_analytic(const AnalyticRequest& request) {
  return guarded([&] {
    if (request.t <= 0.0) throw std::invalid_argument("t must be > 0");
    const CouplingKernel kernel(request.strength);

    if (request.interference_demo) {
      // Two sites per ring with equal and opposite couplings to every other
      // ring: every inter-ring row sums to zero, so the delocalized state
      // does not propagate while the localized one does.
      const int rings = request.rings;
      if (rings < 3 || rings % 2 == 0)
        throw std::invalid_argument("interference demo needs odd N >= 3");
      Eigen::MatrixXd table = Eigen::MatrixXd::Zero(rings, 2);
      for (int j = 1; j < rings; ++j) {
        const int sep = std::min(j, rings - j);
        const double v = kernel(sep * request.spacing);
        table(j, 0) = v;
        table(j, 1) = -v;
      }
      const BlockCoefficients demo(2, rings, request.radius, request.spacing,
                                   request.strength, table);
      std::cout << "sigma_deloc = " << fmt_g12(sigma_deloc_analytic(demo, request.t))
                << "\n"
                << "sigma_loc = " << fmt_g12(sigma_loc_analytic(demo, request.t))
                << "\n";
      return kExitOk;
    }

    if (request.nearest_neighbor_only) {
      std::cout << "sigma_deloc = "
                << fmt_g12(sigma_deloc_nearest_neighbor(
                       request.strength, request.t, request.n, request.spacing))
                << "\n"
                << "sigma_loc = "
                << fmt_g12(sigma_loc_nearest_neighbor(
                       request.strength, request.t, request.n, request.spacing))
                << "\n"
                << "all_interaction_factor = "
                << fmt_g12(far_field_interaction_factor((request.rings - 1) / 2))
                << "\n";
    } else {
      const auto coefficients = extract_block_coefficients(
          request.n, request.rings, request.radius, request.spacing, kernel);
      std::cout << "sigma_deloc = "
                << fmt_g12(sigma_deloc_analytic(coefficients, request.t)) << "\n"
                << "sigma_loc = "
                << fmt_g12(sigma_loc_analytic(coefficients, request.t)) << "\n";
      if (request.print_spectrum || !request.spectrum_csv.empty()) {
        const CirculantSpectrum spectrum = circulant_eigenvalues(coefficients);
        if (!request.spectrum_csv.empty())
          write_text_file(request.spectrum_csv, spectrum_csv(spectrum));
        if (request.print_spectrum) std::cout << spectrum_csv(spectrum);
      }
    }
    if (request.gamma) {
      std::cout << "haken_strobl_sigma = "
                << fmt_g12(haken_strobl_reference_sigma(request.strength,
                                                        *request.gamma, request.t))
                << "\n";
    }
    return kExitOk;
  });
}

int cmd_validate(const ValidateRequest& request) {
  return guarded([&] {
    AcceptanceOptions options;
    options.profile = request.profile;
    options.jobs = request.jobs;
    const auto results = run_acceptance_suite(options);
    std::cout << acceptance_table(results);
    ensure_directory(request.out_dir);
    write_text_file(request.out_dir + "/validation_report.json",
                    acceptance_report_json(results, options));
    std::cout << "report: " << request.out_dir << "/validation_report.json\n";
    return all_passed(results) ? kExitOk : kExitNumerical;
  });
}

}  // namespace exrings

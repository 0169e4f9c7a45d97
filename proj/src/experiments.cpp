#include "exrings/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "exrings/io.hpp"
#include "exrings/observables.hpp"
#include "exrings/rng.hpp"
#include "exrings/threadpool.hpp"

namespace exrings {

namespace {

using Eigen::ArrayXd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kAutoTimeBudget = 0.1;       // t * coupling norm for near field
constexpr double kExponentCrossing = 0.75;    // midpoint between 1 and 1/2

bool is_near_field(double spacing, double radius) { return spacing <= radius; }

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_closed(const SweepSpec& spec, const std::string& who) {
  for (double g : spec.gammas)
    require(g == 0.0, who + " requires gamma = 0");
  for (double s : spec.disorder_sigmas)
    require(s == 0.0, who + " requires zero disorder");
  require(spec.kappa == 0.0, who + " requires kappa = 0");
}

void require_common(const SweepSpec& spec, const std::string& who) {
  require(!spec.n_values.empty(), who + ": n list must be non-empty");
  require(!spec.spacings.empty(), who + ": spacing list must be non-empty");
  require(!spec.states.empty(), who + ": state list must be non-empty");
  require(spec.rings >= 1 && spec.rings % 2 == 1,
          who + ": N must be odd and >= 1");
  require(spec.radius > 0.0, who + ": R must be > 0");
  require(spec.realizations >= 1, who + ": realizations must be >= 1");
  for (int n : spec.n_values) require(n >= 1, who + ": n must be >= 1");
  for (double d : spec.spacings) require(d > 0.0, who + ": spacing must be > 0");
}

Axis int_axis(const std::string& name, const std::vector<int>& values) {
  Axis axis{name, {}};
  for (int v : values) axis.labels.push_back(std::to_string(v));
  return axis;
}

Axis double_axis(const std::string& name, const std::vector<double>& values) {
  Axis axis{name, {}};
  for (double v : values) axis.labels.push_back(fmt_g12(v));
  return axis;
}

Axis state_axis(const std::vector<StateKind>& states) {
  Axis axis{"state", {}};
  for (auto s : states) axis.labels.push_back(to_string(s));
  return axis;
}

// Runs one task per cell of the leading axes; collects the first failure.
template <typename Fn>
void parallel_cells(std::size_t count, int jobs, Fn&& fn) {
  ThreadPool pool(static_cast<unsigned>(std::max(1, jobs)));
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (std::size_t i = 0; i < count; ++i) {
    pool.submit([i, &fn, &first_error, &error_mu] {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  pool.wait();
  if (first_error) std::rethrow_exception(first_error);
}

double sigma_from_column(const VectorXd& column, int first_ring, double spacing) {
  RingPopulations populations;
  populations.p = column;
  populations.first_ring = first_ring;
  return diffusion_length(populations, spacing);
}

double analytic_sigma(StateKind state, const BlockCoefficients& coefficients,
                      double t) {
  return state == StateKind::Delocalized ? sigma_deloc_analytic(coefficients, t)
                                         : sigma_loc_analytic(coefficients, t);
}

// First downward crossing of `level` on (log x, y); NaN when absent.
double log_interp_crossing(const VectorXd& xs, const VectorXd& ys, double level) {
  for (Index i = 0; i + 1 < xs.size(); ++i) {
    const double a = ys[i];
    const double b = ys[i + 1];
    if (std::isnan(a) || std::isnan(b)) continue;
    if (a >= level && b < level) {
      const double f = (level - a) / (b - a);
      return std::exp(std::log(xs[i]) + f * (std::log(xs[i + 1]) - std::log(xs[i])));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ExperimentKind experiment_kind_from_string(std::string_view s) {
  if (s == "scaling") return ExperimentKind::Scaling;
  if (s == "helix") return ExperimentKind::Helix;
  if (s == "disorder") return ExperimentKind::Disorder;
  if (s == "dephasing") return ExperimentKind::Dephasing;
  throw std::invalid_argument("unknown experiment kind '" + std::string(s) + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Helix: return "helix";
    case ExperimentKind::Disorder: return "disorder";
    case ExperimentKind::Dephasing: return "dephasing";
  }
  return "scaling";
}

Profile profile_from_string(std::string_view s) {
  if (s == "paper") return Profile::Paper;
  if (s == "fast") return Profile::Fast;
  throw std::invalid_argument("unknown profile '" + std::string(s) +
                              "' (expected \"paper\" or \"fast\")");
}

std::string to_string(Profile profile) {
  return profile == Profile::Paper ? "paper" : "fast";
}

VectorXd TimeGrid::build() const {
  if (samples < 1) throw std::invalid_argument("time grid needs samples >= 1");
  if (!(t_max > 0.0)) throw std::invalid_argument("time grid needs t_max > 0");
  VectorXd times(samples);
  if (kind == Kind::Linear) {
    if (samples == 1) {
      times[0] = t_max;
    } else {
      for (int i = 0; i < samples; ++i)
        times[i] = t_max * static_cast<double>(i) / (samples - 1);
    }
    return times;
  }
  if (!(t_min > 0.0) || !(t_min < t_max))
    throw std::invalid_argument("log time grid needs 0 < t_min < t_max");
  if (samples == 1) {
    times[0] = t_max;
    return times;
  }
  const double la = std::log(t_min);
  const double lb = std::log(t_max);
  for (int i = 0; i < samples; ++i)
    times[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (samples - 1));
  return times;
}

SweepSpec default_sweep_spec(ExperimentKind kind, Profile profile) {
  const bool paper = profile == Profile::Paper;
  SweepSpec spec;
  spec.kind = kind;
  spec.rings = 31;
  spec.radius = 1.0;
  spec.strength = 1.0;
  spec.base_seed = 20110520;
  switch (kind) {
    case ExperimentKind::Scaling:
      spec.geometry = GeometryKind::RingStack;
      spec.n_values = {1, 2, 3, 4, 5, 6, 7};
      spec.spacings = {0.1, 1.0, 10.0};
      spec.states = {StateKind::Delocalized, StateKind::Localized};
      spec.times = {TimeGrid::Kind::Linear, 0.0, 1.0, 1};
      break;
    case ExperimentKind::Helix:
      spec.geometry = GeometryKind::Helix;
      spec.n_values = {1, 2, 3, 4, 5, 6, 7};
      spec.spacings = {0.1, 1.0, 10.0};
      spec.states = {StateKind::Delocalized, StateKind::Localized};
      spec.times = {TimeGrid::Kind::Linear, 0.0, 1.0, 1};
      break;
    case ExperimentKind::Disorder: {
      spec.geometry = GeometryKind::RingStack;
      spec.n_values.clear();
      for (int n = 1; n <= (paper ? 10 : 6); ++n) spec.n_values.push_back(n);
      spec.spacings = {10.0};
      spec.states = {StateKind::Delocalized};
      spec.disorder_sigmas.clear();
      for (int i = 0; i <= 12; ++i)
        spec.disorder_sigmas.push_back(std::pow(10.0, -4.0 + 0.5 * i));
      spec.realizations = paper ? 500 : 50;
      // five-sample log window centred on t = 1 for the local exponent
      spec.times = {TimeGrid::Kind::Log, 0.5, 2.0, 5};
      break;
    }
    case ExperimentKind::Dephasing:
      spec.geometry = GeometryKind::RingStack;
      spec.n_values.clear();
      for (int n = 1; n <= (paper ? 10 : 6); ++n) spec.n_values.push_back(n);
      spec.spacings = {10.0};
      spec.states = {StateKind::Delocalized};
      spec.gammas = {0.1, 1.0, 10.0};
      spec.times = {TimeGrid::Kind::Log, 0.01, paper ? 10.0 : 4.0,
                    paper ? 31 : 21};
      break;
  }
  return spec;
}

std::size_t SweepGrid::cell_count() const {
  std::size_t count = 1;
  for (const auto& axis : axes) count *= axis.labels.size();
  return count;
}

std::size_t SweepGrid::flat_index(const std::vector<int>& indices) const {
  if (indices.size() != axes.size())
    throw std::invalid_argument("index rank does not match axes");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto extent = axes[a].labels.size();
    if (indices[a] < 0 || static_cast<std::size_t>(indices[a]) >= extent)
      throw std::out_of_range("axis index out of range");
    flat = flat * extent + static_cast<std::size_t>(indices[a]);
  }
  return flat;
}

double SweepGrid::cell(const std::string& stat,
                       const std::vector<int>& indices) const {
  const auto it = cells.find(stat);
  if (it == cells.end()) throw std::out_of_range("unknown statistic " + stat);
  return it->second[static_cast<Index>(flat_index(indices))];
}

std::string SweepGrid::to_csv() const {
  std::ostringstream os;
  for (const auto& axis : axes) os << axis.name << ',';
  os << "stat,value\n";

  const std::size_t count = cell_count();
  std::vector<int> idx(axes.size(), 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::string prefix;
    for (std::size_t a = 0; a < axes.size(); ++a)
      prefix += axes[a].labels[static_cast<std::size_t>(idx[a])] + ",";
    for (const auto& stat : stat_names) {
      const auto it = cells.find(stat);
      if (it == cells.end()) continue;
      os << prefix << stat << ',' << fmt_g12(it->second[static_cast<Index>(flat)])
         << '\n';
    }
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < static_cast<int>(axes[a].labels.size())) break;
      idx[a] = 0;
    }
  }

  for (const auto& record : derived) {
    for (const auto& axis : axes) {
      const auto it = std::find_if(record.where.begin(), record.where.end(),
                                   [&axis](const auto& kv) {
                                     return kv.first == axis.name;
                                   });
      os << (it == record.where.end() ? std::string() : it->second) << ',';
    }
    os << record.stat << ',' << fmt_g12(record.value) << '\n';
  }
  return os.str();
}

namespace {

// Shared implementation of the two closed-system comparisons; the lattice
// factory is the only difference between stacked rings and helices.
SweepGrid run_closed_comparison(const SweepSpec& spec, bool helix,
                                const std::string& who) {
  require_common(spec, who);
  require_closed(spec, who);
  require(!helix || spec.geometry == GeometryKind::Helix,
          who + " requires helix geometry");
  require(helix || spec.geometry == GeometryKind::RingStack,
          who + " requires ring-stack geometry");

  const double t_far = spec.times.t_max;
  require(t_far > 0.0, who + ": t_max must be > 0");

  SweepGrid grid;
  grid.axes = {double_axis("spacing", spec.spacings), state_axis(spec.states),
               int_axis("n", spec.n_values)};
  grid.stat_names = {"sigma_over_Dt", "analytic_over_Dt", "rel_error", "t_used",
                     "coupling_norm"};
  const std::size_t count = grid.cell_count();
  for (const auto& stat : grid.stat_names)
    grid.cells[stat] = ArrayXd::Zero(static_cast<Index>(count));

  const std::size_t n_count = spec.n_values.size();
  const std::size_t state_count = spec.states.size();
  const CouplingKernel kernel(spec.strength);

  parallel_cells(count, spec.jobs, [&](std::size_t flat) {
    const int ni = static_cast<int>(flat % n_count);
    const int si = static_cast<int>((flat / n_count) % state_count);
    const int di = static_cast<int>(flat / (n_count * state_count));
    const int n = spec.n_values[ni];
    const StateKind state = spec.states[si];
    const double spacing = spec.spacings[di];

    const auto coefficients = extract_block_coefficients(
        n, spec.rings, spec.radius, spacing, kernel);
    const double norm = inter_ring_coupling_norm(coefficients);
    const double t_used = is_near_field(spacing, spec.radius)
                              ? kAutoTimeBudget / norm
                              : t_far;

    const SiteLattice lattice =
        helix ? build_helix(n, spec.rings, spec.radius, spacing)
              : build_ring_stack(n, spec.rings, spec.radius, spacing);
    const Hamiltonian hamiltonian = assemble_hamiltonian(lattice, kernel);
    const QuantumState psi0 = state == StateKind::Delocalized
                                  ? delocalized_state(lattice)
                                  : localized_state(lattice);
    VectorXd times(1);
    times[0] = t_used;
    const MatrixXd populations =
        closed_ring_population_series(hamiltonian, lattice, psi0, times);
    const double sigma =
        sigma_from_column(populations.col(0), lattice.min_ring(), spacing);
    const double analytic = analytic_sigma(state, coefficients, t_used);

    const Index cell = static_cast<Index>(flat);
    grid.cells["sigma_over_Dt"][cell] = sigma / (spacing * t_used);
    grid.cells["analytic_over_Dt"][cell] = analytic / (spacing * t_used);
    grid.cells["rel_error"][cell] =
        analytic > 0.0 ? std::abs(sigma - analytic) / analytic
                       : std::numeric_limits<double>::quiet_NaN();
    grid.cells["t_used"][cell] = t_used;
    grid.cells["coupling_norm"][cell] = norm;
  });

  // Scaling exponents sigma ~ n^alpha per (spacing, state).
  if (spec.n_values.size() >= 3) {
    VectorXd ns(spec.n_values.size());
    for (std::size_t i = 0; i < spec.n_values.size(); ++i)
      ns[static_cast<Index>(i)] = spec.n_values[i];
    for (std::size_t di = 0; di < spec.spacings.size(); ++di) {
      for (std::size_t si = 0; si < state_count; ++si) {
        VectorXd sigmas(spec.n_values.size());
        for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni)
          sigmas[static_cast<Index>(ni)] =
              grid.cell("sigma_over_Dt", {static_cast<int>(di),
                                          static_cast<int>(si),
                                          static_cast<int>(ni)});
        if (sigmas.minCoeff() <= 0.0) continue;
        const PowerLawFit fit = fit_power_law(ns, sigmas);
        const std::vector<std::pair<std::string, std::string>> where{
            {"spacing", grid.axes[0].labels[di]},
            {"state", grid.axes[1].labels[si]}};
        grid.derived.push_back({where, "alpha_exponent", fit.exponent});
        grid.derived.push_back({where, "alpha_r_squared", fit.r_squared});
      }
    }
  }
  return grid;
}

}  // namespace

SweepGrid run_scaling_experiment(const SweepSpec& spec) {
  return run_closed_comparison(spec, /*helix=*/false, "scaling experiment");
}

SweepGrid run_helix_approximation(const SweepSpec& spec) {
  return run_closed_comparison(spec, /*helix=*/true, "helix approximation");
}

SweepGrid run_disorder_sweep(const SweepSpec& spec) {
  require_common(spec, "disorder sweep");
  for (double g : spec.gammas)
    require(g == 0.0, "disorder sweep requires gamma = 0");
  require(spec.kappa == 0.0, "disorder sweep requires kappa = 0");
  require(spec.geometry == GeometryKind::RingStack,
          "disorder sweep requires ring-stack geometry");
  require(spec.spacings.size() == 1, "disorder sweep uses a single spacing");
  require(!spec.disorder_sigmas.empty(),
          "disorder sweep: sigma list must be non-empty");
  for (double s : spec.disorder_sigmas)
    require(s >= 0.0, "disorder sweep: sigma must be >= 0");

  const double spacing = spec.spacings.front();
  const VectorXd times = spec.times.build();
  const Index center = times.size() / 2;

  SweepGrid grid;
  grid.axes = {state_axis(spec.states), int_axis("n", spec.n_values),
               double_axis("Sigma", spec.disorder_sigmas)};
  // sigma_mean is the second moment of the disorder-averaged ring
  // distribution (the sigma of the ensemble-mean density matrix); the mean of
  // the per-realization sigma values is kept as a secondary statistic.
  grid.stat_names = {"sigma_mean", "sigma_realization_mean", "sigma_stderr",
                     "lambda", "t_center"};
  const std::size_t count = grid.cell_count();
  for (const auto& stat : grid.stat_names)
    grid.cells[stat] = ArrayXd::Zero(static_cast<Index>(count));

  const std::size_t sigma_count = spec.disorder_sigmas.size();
  const std::size_t n_count = spec.n_values.size();
  const CouplingKernel kernel(spec.strength);

  parallel_cells(count, spec.jobs, [&](std::size_t flat) {
    const int gi = static_cast<int>(flat % sigma_count);
    const int ni = static_cast<int>((flat / sigma_count) % n_count);
    const int si = static_cast<int>(flat / (sigma_count * n_count));
    const int n = spec.n_values[ni];
    const double sigma_disorder = spec.disorder_sigmas[gi];
    const StateKind state = spec.states[si];

    const SiteLattice lattice =
        build_ring_stack(n, spec.rings, spec.radius, spacing);
    const Hamiltonian base = assemble_hamiltonian(lattice, kernel);
    const QuantumState psi0 = state == StateKind::Delocalized
                                  ? delocalized_state(lattice)
                                  : localized_state(lattice);

    MatrixXd population_sum = MatrixXd::Zero(lattice.ring_count(), times.size());
    double center_sum = 0.0;
    double center_sq_sum = 0.0;
    for (int k = 0; k < spec.realizations; ++k) {
      Hamiltonian h = base;
      if (sigma_disorder > 0.0) {
        const DisorderSpec draw{sigma_disorder,
                                mix_seed(spec.base_seed, flat, k)};
        h.diagonal_offsets = sample_disorder(draw, lattice.size());
        h.matrix.diagonal() = h.diagonal_offsets;
      }
      const MatrixXd populations =
          closed_ring_population_series(h, lattice, psi0, times);
      if (k == 0) {
        // invariant spot check: closed evolution conserves probability
        for (Index i = 0; i < times.size(); ++i)
          if (std::abs(populations.col(i).sum() - 1.0) > 1e-6)
            throw std::runtime_error("probability not conserved in closed run");
      }
      population_sum += populations;
      const double s =
          sigma_from_column(populations.col(center), lattice.min_ring(), spacing);
      center_sum += s;
      center_sq_sum += s * s;
    }
    population_sum /= spec.realizations;
    VectorXd sigma_of_mean(times.size());
    for (Index i = 0; i < times.size(); ++i)
      sigma_of_mean[i] =
          sigma_from_column(population_sum.col(i), lattice.min_ring(), spacing);
    const double realization_mean = center_sum / spec.realizations;
    double stderr_center = 0.0;
    if (spec.realizations > 1) {
      const double var =
          (center_sq_sum - spec.realizations * realization_mean * realization_mean) /
          (spec.realizations - 1);
      stderr_center = std::sqrt(std::max(0.0, var) / spec.realizations);
    }
    double lambda = std::numeric_limits<double>::quiet_NaN();
    if (times.size() >= kLocalExponentWindow && sigma_of_mean.minCoeff() > 0.0)
      lambda = local_exponents(times, sigma_of_mean)[center];

    const Index cell = static_cast<Index>(flat);
    grid.cells["sigma_mean"][cell] = sigma_of_mean[center];
    grid.cells["sigma_realization_mean"][cell] = realization_mean;
    grid.cells["sigma_stderr"][cell] = stderr_center;
    grid.cells["lambda"][cell] = lambda;
    grid.cells["t_center"][cell] = times[center];
  });

  VectorXd ns(spec.n_values.size());
  for (std::size_t i = 0; i < n_count; ++i)
    ns[static_cast<Index>(i)] = spec.n_values[i];
  VectorXd sigmas_axis(sigma_count);
  for (std::size_t i = 0; i < sigma_count; ++i)
    sigmas_axis[static_cast<Index>(i)] = spec.disorder_sigmas[i];

  for (std::size_t si = 0; si < spec.states.size(); ++si) {
    // alpha(n) per disorder strength
    if (n_count >= 3) {
      for (std::size_t gi = 0; gi < sigma_count; ++gi) {
        VectorXd mean(n_count);
        for (std::size_t ni = 0; ni < n_count; ++ni)
          mean[static_cast<Index>(ni)] =
              grid.cell("sigma_mean", {static_cast<int>(si),
                                       static_cast<int>(ni),
                                       static_cast<int>(gi)});
        if (mean.minCoeff() <= 0.0) continue;
        const PowerLawFit fit = fit_power_law(ns, mean);
        grid.derived.push_back({{{"state", grid.axes[0].labels[si]},
                                 {"Sigma", grid.axes[2].labels[gi]}},
                                "alpha_exponent",
                                fit.exponent});
      }
    }
    // lambda crossover Sigma* and optional level curves per n
    for (std::size_t ni = 0; ni < n_count; ++ni) {
      VectorXd lambdas(sigma_count);
      VectorXd means(sigma_count);
      for (std::size_t gi = 0; gi < sigma_count; ++gi) {
        lambdas[static_cast<Index>(gi)] =
            grid.cell("lambda", {static_cast<int>(si), static_cast<int>(ni),
                                 static_cast<int>(gi)});
        means[static_cast<Index>(gi)] =
            grid.cell("sigma_mean", {static_cast<int>(si), static_cast<int>(ni),
                                     static_cast<int>(gi)});
      }
      if (sigmas_axis.minCoeff() > 0.0) {
        const double star =
            log_interp_crossing(sigmas_axis, lambdas, kExponentCrossing);
        if (!std::isnan(star))
          grid.derived.push_back({{{"state", grid.axes[0].labels[si]},
                                   {"n", grid.axes[1].labels[ni]}},
                                  "Sigma_star",
                                  star});
        for (double level : spec.sigma_levels) {
          const double cross = log_interp_crossing(sigmas_axis, means, level);
          if (!std::isnan(cross))
            grid.derived.push_back({{{"state", grid.axes[0].labels[si]},
                                     {"n", grid.axes[1].labels[ni]}},
                                    "Sigma_at_sigma_level_" + fmt_g12(level),
                                    cross});
        }
      }
    }
  }
  return grid;
}

SweepGrid run_dephasing_sweep(const SweepSpec& spec) {
  require_common(spec, "dephasing sweep");
  for (double s : spec.disorder_sigmas)
    require(s == 0.0, "dephasing sweep requires zero disorder");
  require(spec.geometry == GeometryKind::RingStack,
          "dephasing sweep requires ring-stack geometry");
  require(!spec.gammas.empty(), "dephasing sweep: gamma list must be non-empty");
  for (double g : spec.gammas)
    require(g >= 0.0, "dephasing sweep: gamma must be >= 0");
  require(spec.kappa >= 0.0, "dephasing sweep: kappa must be >= 0");

  const VectorXd requested_times = spec.times.build();
  for (double spacing : spec.spacings)
    require(!is_near_field(spacing, spec.radius) || requested_times.size() == 1,
            "near-field dephasing runs use a single time sample (the evolution "
            "time is auto-scaled)");

  SweepGrid grid;
  std::vector<double> time_values(requested_times.begin(), requested_times.end());
  grid.axes = {double_axis("spacing", spec.spacings),
               double_axis("gamma", spec.gammas), state_axis(spec.states),
               int_axis("n", spec.n_values), double_axis("t", time_values)};
  grid.stat_names = {"sigma", "sigma_analytic", "rel_error", "lambda", "t_used"};
  const std::size_t count = grid.cell_count();
  for (const auto& stat : grid.stat_names)
    grid.cells[stat] = ArrayXd::Zero(static_cast<Index>(count));

  const std::size_t t_count = requested_times.size();
  const std::size_t n_count = spec.n_values.size();
  const std::size_t state_count = spec.states.size();
  const std::size_t gamma_count = spec.gammas.size();
  const std::size_t run_count =
      spec.spacings.size() * gamma_count * state_count * n_count;
  const CouplingKernel kernel(spec.strength);

  parallel_cells(run_count, spec.jobs, [&](std::size_t run) {
    const int ni = static_cast<int>(run % n_count);
    const int si = static_cast<int>((run / n_count) % state_count);
    const int gi = static_cast<int>((run / (n_count * state_count)) % gamma_count);
    const int di = static_cast<int>(run / (n_count * state_count * gamma_count));
    const int n = spec.n_values[ni];
    const StateKind state = spec.states[si];
    const double gamma = spec.gammas[gi];
    const double spacing = spec.spacings[di];

    const auto coefficients = extract_block_coefficients(
        n, spec.rings, spec.radius, spacing, kernel);
    const MatrixXd open_table = open_chain_coupling_table(
        n, spec.rings, spec.radius, spacing, kernel);

    VectorXd times_used = requested_times;
    if (is_near_field(spacing, spec.radius)) {
      times_used.resize(1);
      times_used[0] = kAutoTimeBudget / inter_ring_coupling_norm(coefficients);
    }
    MatrixXd populations = ring_population_dynamics(
        open_table, gamma, state, spec.rings / 2, times_used);
    if (spec.kappa > 0.0)
      for (Index i = 0; i < times_used.size(); ++i)
        populations.col(i) *= std::exp(-2.0 * spec.kappa * times_used[i]);

    VectorXd sigmas(times_used.size());
    for (Index i = 0; i < times_used.size(); ++i)
      sigmas[i] = sigma_from_column(populations.col(i), -(spec.rings / 2), spacing);
    VectorXd lambdas = VectorXd::Constant(
        times_used.size(), std::numeric_limits<double>::quiet_NaN());
    if (times_used.size() >= kLocalExponentWindow && sigmas.minCoeff() > 0.0)
      lambdas = local_exponents(times_used, sigmas);

    for (std::size_t ti = 0; ti < t_count; ++ti) {
      const Index cell = static_cast<Index>(run * t_count + ti);
      const double t_used = times_used[static_cast<Index>(ti)];
      const double analytic = analytic_sigma(state, coefficients, t_used);
      grid.cells["sigma"][cell] = sigmas[static_cast<Index>(ti)];
      grid.cells["sigma_analytic"][cell] = analytic;
      grid.cells["rel_error"][cell] =
          analytic > 0.0
              ? std::abs(sigmas[static_cast<Index>(ti)] - analytic) / analytic
              : std::numeric_limits<double>::quiet_NaN();
      grid.cells["lambda"][cell] = lambdas[static_cast<Index>(ti)];
      grid.cells["t_used"][cell] = t_used;
    }
  });

  // alpha(t) across n and its crossing of 0.75, per (spacing, gamma, state)
  if (n_count >= 3) {
    VectorXd ns(n_count);
    for (std::size_t i = 0; i < n_count; ++i)
      ns[static_cast<Index>(i)] = spec.n_values[i];
    for (std::size_t di = 0; di < spec.spacings.size(); ++di) {
      for (std::size_t gi = 0; gi < gamma_count; ++gi) {
        for (std::size_t si = 0; si < state_count; ++si) {
          VectorXd alphas(t_count);
          for (std::size_t ti = 0; ti < t_count; ++ti) {
            VectorXd sig(n_count);
            for (std::size_t ni = 0; ni < n_count; ++ni)
              sig[static_cast<Index>(ni)] = grid.cell(
                  "sigma",
                  {static_cast<int>(di), static_cast<int>(gi),
                   static_cast<int>(si), static_cast<int>(ni),
                   static_cast<int>(ti)});
            alphas[static_cast<Index>(ti)] =
                sig.minCoeff() > 0.0
                    ? fit_power_law(ns, sig).exponent
                    : std::numeric_limits<double>::quiet_NaN();
            grid.derived.push_back(
                {{{"spacing", grid.axes[0].labels[di]},
                  {"gamma", grid.axes[1].labels[gi]},
                  {"state", grid.axes[2].labels[si]},
                  {"t", grid.axes[4].labels[ti]}},
                 "alpha_exponent",
                 alphas[static_cast<Index>(ti)]});
          }
          if (t_count >= 2 && requested_times.minCoeff() > 0.0) {
            const double crossing = log_interp_crossing(
                requested_times, alphas, kExponentCrossing);
            if (!std::isnan(crossing))
              grid.derived.push_back({{{"spacing", grid.axes[0].labels[di]},
                                       {"gamma", grid.axes[1].labels[gi]},
                                       {"state", grid.axes[2].labels[si]}},
                                      "alpha_crossing_time",
                                      crossing});
          }
        }
      }
    }
  }
  return grid;
}

}  // namespace exrings

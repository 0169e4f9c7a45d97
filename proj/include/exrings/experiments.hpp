#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "exrings/coupling.hpp"
#include "exrings/dynamics.hpp"

namespace exrings {

enum class ExperimentKind { Scaling, Helix, Disorder, Dephasing };
ExperimentKind experiment_kind_from_string(std::string_view s);
std::string to_string(ExperimentKind kind);

enum class Profile { Paper, Fast };
Profile profile_from_string(std::string_view s);
std::string to_string(Profile profile);

struct TimeGrid {
  enum class Kind { Linear, Log };
  Kind kind = Kind::Linear;
  double t_min = 0.0;  // log grids only; must be > 0 there
  double t_max = 1.0;
  int samples = 1;

  // Linear grids include t = 0 when samples > 1; log grids span
  // [t_min, t_max] with uniform log spacing.
  Eigen::VectorXd build() const;
};

// One declarative description shared by all sweep kinds; each runner uses the
// axes relevant to it and validates the rest.
struct SweepSpec {
  ExperimentKind kind = ExperimentKind::Scaling;
  GeometryKind geometry = GeometryKind::RingStack;
  std::vector<int> n_values{1, 2, 3, 4, 5, 6, 7};
  int rings = 31;
  double radius = 1.0;
  std::vector<double> spacings{10.0};
  double strength = 1.0;  // J
  std::vector<StateKind> states{StateKind::Delocalized};
  std::vector<double> gammas{0.0};
  double kappa = 0.0;
  TimeGrid times;
  std::vector<double> disorder_sigmas{0.0};
  int realizations = 1;
  std::uint64_t base_seed = 1;
  std::vector<double> sigma_levels;  // level-curve extraction (disorder sweep)
  int jobs = 1;
};

// Paper-scale and CI-scale defaults for each experiment kind.
SweepSpec default_sweep_spec(ExperimentKind kind, Profile profile);

struct Axis {
  std::string name;
  std::vector<std::string> labels;
};

// Long-form result grid: per-cell statistics over the axis product plus
// free-form derived records (fits, crossovers).  CSV output is byte-stable
// for identical specs.
struct SweepGrid {
  std::vector<Axis> axes;
  std::vector<std::string> stat_names;
  std::map<std::string, Eigen::ArrayXd> cells;  // stat -> flat row-major array

  struct DerivedRecord {
    std::vector<std::pair<std::string, std::string>> where;  // axis -> label
    std::string stat;
    double value;
  };
  std::vector<DerivedRecord> derived;

  std::size_t cell_count() const;
  std::size_t flat_index(const std::vector<int>& indices) const;
  double cell(const std::string& stat, const std::vector<int>& indices) const;
  std::string to_csv() const;
};

// Closed-system sigma/(D t) versus n per spacing, against the analytic
// short-time predictions; fits the scaling exponent alpha per (spacing,
// state).  Requires gamma = 0, disorder = 0, kappa = 0.
SweepGrid run_scaling_experiment(const SweepSpec& spec);

// Helix evolution versus the facing-rings analytic approximation (ring stack
// with D = pitch).
SweepGrid run_helix_approximation(const SweepSpec& spec);

// Ensemble over quenched disorder: mean sigma, standard error and local time
// exponent lambda per (state, n, Sigma); derived alpha fits, lambda-crossover
// Sigma* per n, optional level curves.  Requires gamma = 0.
SweepGrid run_disorder_sweep(const SweepSpec& spec);

// Dephasing sweep over (spacing, gamma, state, n, t): sigma surfaces with the
// analytic references, local exponents lambda(t), alpha(t) fits across n and
// the alpha = 0.75 crossing time per gamma.  Requires disorder = 0.
SweepGrid run_dephasing_sweep(const SweepSpec& spec);

}  // namespace exrings

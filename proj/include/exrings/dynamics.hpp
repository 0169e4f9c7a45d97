#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "exrings/coupling.hpp"
#include "exrings/lattice.hpp"

namespace exrings {

// Canonical initial-state preparations.
enum class StateKind { Delocalized, Localized };

StateKind state_kind_from_string(std::string_view s);
std::string to_string(StateKind kind);

// Either a pure amplitude vector or a density matrix over the site basis.
// The checked factories enforce the preparation invariants (unit norm; unit
// trace, Hermiticity, positivity); the unchecked ones are for propagation
// output, where e.g. recombination legitimately decays the trace.
class QuantumState {
 public:
  static QuantumState pure(Eigen::VectorXcd amplitudes);
  static QuantumState density(Eigen::MatrixXcd rho);
  static QuantumState pure_unchecked(Eigen::VectorXcd amplitudes);
  static QuantumState density_unchecked(Eigen::MatrixXcd rho);

  bool is_pure() const;
  Eigen::Index dim() const;

  const Eigen::VectorXcd& amplitudes() const;      // pure only
  const Eigen::MatrixXcd& density_matrix() const;  // mixed only
  Eigen::MatrixXcd to_density() const;
  Eigen::VectorXd site_populations() const;

 private:
  explicit QuantumState(std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> s)
      : state_(std::move(s)) {}
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> state_;
};

// Haken-Strobl bath parameters: site dephasing rate gamma and recombination
// rate kappa (1/kappa is the exciton lifetime), both in units of J.
struct OpenSystemParams {
  double gamma = 0.0;
  double kappa = 0.0;
};

struct Trajectory {
  Eigen::VectorXd times;  // strictly increasing, units of 1/J
  std::vector<QuantumState> states;
};

// Equal-weight superposition over the sites of one ring (default: middle).
QuantumState delocalized_state(const SiteLattice& lattice, int ring = 0);
// Basis state on one site; the overload without a site uses the first site of
// the middle ring.
QuantumState localized_state(const SiteLattice& lattice, int site);
QuantumState localized_state(const SiteLattice& lattice);

// Unitary evolution psi(t) = V exp(-i Lambda t) V^T psi0 via the dense
// eigendecomposition (hbar = 1).
Trajectory evolve_closed(const Hamiltonian& hamiltonian,
                         const QuantumState& psi0, const Eigen::VectorXd& times);

struct LindbladOptions {
  std::optional<double> dt_override;  // fixed RK4 step instead of the default
};

// Fixed-step RK4 integration of
//   drho/dt = -i[H, rho] + gamma sum_m (S_m rho S_m - {S_m, rho}/2) - 2 kappa rho
// with S_m = |m><m|.  In the single-excitation manifold the recombination term
// is kappa times the identity, so it is applied as an exact exp(-2 kappa t)
// prefactor rather than integrated.  Default step: min(0.01, 0.1/max(gamma,
// normbound(H), 1)).  Detected positivity or trace violations at sample times
// halve the step and restart; persistent failure raises a step-underflow error.
Trajectory evolve_lindblad(const Hamiltonian& hamiltonian,
                           const OpenSystemParams& params,
                           const QuantumState& rho0, const Eigen::VectorXd& times,
                           const LindbladOptions& options = {});

// Observer form: on_sample(sample_index, t, rho_t) is called at each requested
// time without storing the trajectory.
void evolve_lindblad_observe(
    const Hamiltonian& hamiltonian, const OpenSystemParams& params,
    const QuantumState& rho0, const Eigen::VectorXd& times,
    const std::function<void(Eigen::Index, double, const Eigen::MatrixXcd&)>&
        on_sample,
    const LindbladOptions& options = {});

// Ring-resolved populations p_r(t) for the canonical states under the same
// master equation, reduced onto the ring-rotation Fourier sectors.  For a
// ring-symmetric problem rho(t) stays block diagonal over the n sectors (one
// N x N block each), coupled only through the shared dephasing repopulation
// term; the localized state enters as the uniform single-ring mixture, which
// has the same ring populations by symmetry.  Exact for ring stacks, and ~n^2
// cheaper than the dense integrator.  Rows are rings in chain order 0..N-1,
// columns the requested times.
Eigen::MatrixXd ring_population_dynamics(const Eigen::MatrixXd& open_table,
                                         double gamma, StateKind initial,
                                         int source_ring,
                                         const Eigen::VectorXd& times,
                                         std::optional<double> dt_override = {});

// Ring populations over time for closed pure-state evolution (dense path).
// Rows are rings in chain order 0..N-1.
Eigen::MatrixXd closed_ring_population_series(const Hamiltonian& hamiltonian,
                                              const SiteLattice& lattice,
                                              const QuantumState& psi0,
                                              const Eigen::VectorXd& times);

}  // namespace exrings

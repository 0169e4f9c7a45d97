#include "exrings/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "exrings/log.hpp"
#include "exrings/spectral.hpp"

namespace exrings {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

constexpr double kNormTol = 1e-10;
constexpr double kHermTol = 1e-10;
constexpr double kPsdTol = -1e-8;
constexpr double kPopulationFloor = -1e-7;  // sampled-diagonal positivity gate
constexpr double kTraceTol = 1e-6;
constexpr int kMaxRefinements = 12;
constexpr int kMaxNonFiniteAttempts = 2;  // NaN/inf samples never refine away

void check_times(const VectorXd& times) {
  if (times.size() == 0) throw std::invalid_argument("times must be non-empty");
  if (times[0] < 0.0) throw std::invalid_argument("times must be >= 0");
  for (Index i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("times must be strictly increasing");
}

// Signals that the current step size produced an invalid sample.
struct RefineNeeded {
  bool finite = true;
};

}  // namespace

StateKind state_kind_from_string(std::string_view s) {
  if (s == "delocalized") return StateKind::Delocalized;
  if (s == "localized") return StateKind::Localized;
  throw std::invalid_argument("unknown initial state kind '" + std::string(s) +
                              "' (expected \"delocalized\" or \"localized\")");
}

std::string to_string(StateKind kind) {
  return kind == StateKind::Delocalized ? "delocalized" : "localized";
}

QuantumState QuantumState::pure(VectorXcd amplitudes) {
  if (amplitudes.size() == 0)
    throw std::invalid_argument("pure state must be non-empty");
  if (std::abs(amplitudes.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("pure state must have unit norm");
  return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::density(MatrixXcd rho) {
  if (rho.rows() == 0 || rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kNormTol ||
      std::abs(rho.trace().imag()) > kNormTol)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(rho);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("density matrix eigensolver failed");
  if (solver.eigenvalues().minCoeff() <= kPsdTol)
    throw std::invalid_argument("density matrix must be positive semidefinite");
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::pure_unchecked(VectorXcd amplitudes) {
  return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::density_unchecked(MatrixXcd rho) {
  return QuantumState(std::move(rho));
}

bool QuantumState::is_pure() const {
  return std::holds_alternative<VectorXcd>(state_);
}

Index QuantumState::dim() const {
  return is_pure() ? std::get<VectorXcd>(state_).size()
                   : std::get<MatrixXcd>(state_).rows();
}

const VectorXcd& QuantumState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("state is not pure");
  return std::get<VectorXcd>(state_);
}

const MatrixXcd& QuantumState::density_matrix() const {
  if (is_pure()) throw std::logic_error("state is not a density matrix");
  return std::get<MatrixXcd>(state_);
}

MatrixXcd QuantumState::to_density() const {
  if (is_pure()) {
    const auto& psi = std::get<VectorXcd>(state_);
    return psi * psi.adjoint();
  }
  return std::get<MatrixXcd>(state_);
}

VectorXd QuantumState::site_populations() const {
  if (is_pure()) return std::get<VectorXcd>(state_).cwiseAbs2();
  return std::get<MatrixXcd>(state_).diagonal().real();
}

QuantumState delocalized_state(const SiteLattice& lattice, int ring) {
  const int first = lattice.first_site_of_ring(ring);
  const int n = lattice.sites_per_ring();
  VectorXcd psi = VectorXcd::Zero(lattice.size());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) psi[first + k] = amp;
  return QuantumState::pure(std::move(psi));
}

QuantumState localized_state(const SiteLattice& lattice, int site) {
  if (site < 0 || site >= lattice.size())
    throw std::out_of_range("site index " + std::to_string(site) +
                            " outside 0.." + std::to_string(lattice.size() - 1));
  VectorXcd psi = VectorXcd::Zero(lattice.size());
  psi[site] = 1.0;
  return QuantumState::pure(std::move(psi));
}

QuantumState localized_state(const SiteLattice& lattice) {
  return localized_state(lattice, lattice.first_site_of_ring(0));
}

Trajectory evolve_closed(const Hamiltonian& hamiltonian,
                         const QuantumState& psi0, const VectorXd& times) {
  if (!psi0.is_pure())
    throw std::invalid_argument("evolve_closed requires a pure state");
  if (psi0.dim() != hamiltonian.dim())
    throw std::invalid_argument("state dimension does not match Hamiltonian");
  check_times(times);

  const auto eig = dense_eigendecomposition(hamiltonian);
  const VectorXcd coeffs = eig.eigenvectors.transpose() * psi0.amplitudes();

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  for (Index i = 0; i < times.size(); ++i) {
    if (times[i] == 0.0) {  // exact, avoids the V V^T round trip
      traj.states.push_back(psi0);
      continue;
    }
    const VectorXcd phased =
        (Eigen::exp((complex<double>(0, -times[i]) * eig.eigenvalues.array())
                        .cast<complex<double>>()) *
         coeffs.array())
            .matrix();
    traj.states.push_back(QuantumState::pure_unchecked(eig.eigenvectors * phased));
  }
  return traj;
}

namespace {

// Hermitian matrix as (symmetric real, antisymmetric imaginary) pair; keeps
// every product in fast real GEMM paths.
struct HermitianPair {
  MatrixXd re, im;
  void resize(Index d) {
    re.setZero(d, d);
    im.setZero(d, d);
  }
};

double norm_upper_bound(const MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();  // >= operator norm
}

double default_step(double gamma, double norm_bound) {
  if (!std::isfinite(norm_bound)) norm_bound = 1.0;  // caught at the sample checks
  return std::min(0.01, 0.1 / std::max({gamma, norm_bound, 1.0}));
}

// drho/dt = -i[H, rho] - gamma (rho - diag rho), split into re/im parts.
class DenseLindbladRhs {
 public:
  DenseLindbladRhs(const MatrixXd& h, double gamma) : h_(h), gamma_(gamma) {
    const Index d = h.rows();
    wr_.setZero(d, d);
    wi_.setZero(d, d);
  }

  void operator()(const HermitianPair& rho, HermitianPair& out) {
    wr_.noalias() = h_ * rho.re;
    wi_.noalias() = h_ * rho.im;
    out.re = wi_ + wi_.transpose();
    out.im = wr_.transpose() - wr_;
    if (gamma_ != 0.0) {
      out.re -= gamma_ * rho.re;
      out.re.diagonal() += gamma_ * rho.re.diagonal();
      out.im -= gamma_ * rho.im;
      out.im.diagonal() += gamma_ * rho.im.diagonal();
    }
  }

 private:
  const MatrixXd& h_;
  double gamma_;
  MatrixXd wr_, wi_;
};

template <typename State, typename Rhs>
class Rk4 {
 public:
  Rk4(Rhs rhs, const State& prototype) : rhs_(std::move(rhs)) {
    k1_ = k2_ = k3_ = k4_ = stage_ = prototype;
  }

  void step(State& y, double h) {
    rhs_(y, k1_);
    stage_.assign_axpy(y, 0.5 * h, k1_);
    rhs_(stage_, k2_);
    stage_.assign_axpy(y, 0.5 * h, k2_);
    rhs_(stage_, k3_);
    stage_.assign_axpy(y, h, k3_);
    rhs_(stage_, k4_);
    y.accumulate(h / 6.0, k1_, k2_, k3_, k4_);
  }

 private:
  Rhs rhs_;
  State k1_, k2_, k3_, k4_, stage_;
};

// State adaptor for a single Hermitian pair.
struct DenseState {
  HermitianPair m;
  void assign_axpy(const DenseState& base, double a, const DenseState& k) {
    m.re = base.m.re + a * k.m.re;
    m.im = base.m.im + a * k.m.im;
  }
  void accumulate(double w, const DenseState& k1, const DenseState& k2,
                  const DenseState& k3, const DenseState& k4) {
    m.re += w * (k1.m.re + 2.0 * k2.m.re + 2.0 * k3.m.re + k4.m.re);
    m.im += w * (k1.m.im + 2.0 * k2.m.im + 2.0 * k3.m.im + k4.m.im);
  }
};

struct DenseStateRhs {
  DenseLindbladRhs* rhs;
  void operator()(const DenseState& y, DenseState& out) { (*rhs)(y.m, out.m); }
};

void check_sampled_diagonal(const VectorXd& diag) {
  if (!diag.allFinite()) throw RefineNeeded{false};
  if (!(diag.minCoeff() >= kPopulationFloor)) throw RefineNeeded{};
  if (!(std::abs(diag.sum() - 1.0) <= kTraceTol)) throw RefineNeeded{};
}

}  // namespace

void evolve_lindblad_observe(
    const Hamiltonian& hamiltonian, const OpenSystemParams& params,
    const QuantumState& rho0, const VectorXd& times,
    const std::function<void(Index, double, const MatrixXcd&)>& on_sample,
    const LindbladOptions& options) {
  if (params.gamma < 0.0 || params.kappa < 0.0)
    throw std::invalid_argument("gamma and kappa must be >= 0");
  if (rho0.dim() != hamiltonian.dim())
    throw std::invalid_argument("state dimension does not match Hamiltonian");
  check_times(times);

  const Index d = hamiltonian.dim();
  DenseState initial;
  {
    const MatrixXcd rho = rho0.to_density();
    initial.m.re = rho.real();
    initial.m.im = rho.imag();
  }

  double dt = options.dt_override.value_or(
      default_step(params.gamma, norm_upper_bound(hamiltonian.matrix)));
  if (!(dt > 0.0)) throw std::invalid_argument("dt_override must be > 0");

  MatrixXcd sample(d, d);
  int non_finite_attempts = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      DenseLindbladRhs rhs(hamiltonian.matrix, params.gamma);
      DenseState y = initial;
      Rk4<DenseState, DenseStateRhs> integrator(DenseStateRhs{&rhs}, y);
      double t = 0.0;
      for (Index i = 0; i < times.size(); ++i) {
        const double span = times[i] - t;
        if (span > 0.0) {
          const int steps = std::max(1, static_cast<int>(std::ceil(span / dt)));
          const double h = span / steps;
          for (int s = 0; s < steps; ++s) integrator.step(y, h);
          t = times[i];
        }
        check_sampled_diagonal(y.m.re.diagonal());
        const double decay = std::exp(-2.0 * params.kappa * t);
        sample.real() = decay * y.m.re;
        sample.imag() = decay * y.m.im;
        on_sample(i, t, sample);
      }
      return;
    } catch (const RefineNeeded& refine) {
      if (!refine.finite && ++non_finite_attempts > kMaxNonFiniteAttempts)
        throw std::runtime_error(
            "lindblad integrator produced non-finite samples (no convergence)");
      dt *= 0.5;
      if (attempt + 1 >= kMaxRefinements || dt < 1e-12)
        throw std::runtime_error(
            "lindblad integrator step size underflow (no convergence)");
      log_debug("lindblad sample check failed; retrying with dt = " +
                std::to_string(dt));
      // Retry re-delivers samples from index 0.
    }
  }
}

Trajectory evolve_lindblad(const Hamiltonian& hamiltonian,
                           const OpenSystemParams& params,
                           const QuantumState& rho0, const VectorXd& times,
                           const LindbladOptions& options) {
  Trajectory traj;
  traj.times = times;
  traj.states.assign(times.size(),
                     QuantumState::density_unchecked(MatrixXcd()));
  evolve_lindblad_observe(
      hamiltonian, params, rho0, times,
      [&traj](Index i, double, const MatrixXcd& rho) {
        traj.states[static_cast<std::size_t>(i)] =
            QuantumState::density_unchecked(rho);
      },
      options);
  return traj;
}

namespace {

// Collection of per-sector blocks for the ring-reduced master equation.
struct SectorState {
  std::vector<HermitianPair> blocks;

  void assign_axpy(const SectorState& base, double a, const SectorState& k) {
    for (std::size_t q = 0; q < blocks.size(); ++q) {
      blocks[q].re = base.blocks[q].re + a * k.blocks[q].re;
      blocks[q].im = base.blocks[q].im + a * k.blocks[q].im;
    }
  }
  void accumulate(double w, const SectorState& k1, const SectorState& k2,
                  const SectorState& k3, const SectorState& k4) {
    for (std::size_t q = 0; q < blocks.size(); ++q) {
      blocks[q].re += w * (k1.blocks[q].re + 2.0 * k2.blocks[q].re +
                           2.0 * k3.blocks[q].re + k4.blocks[q].re);
      blocks[q].im += w * (k1.blocks[q].im + 2.0 * k2.blocks[q].im +
                           2.0 * k3.blocks[q].im + k4.blocks[q].im);
    }
  }

  VectorXd ring_populations() const {
    VectorXd p = blocks[0].re.diagonal();
    for (std::size_t q = 1; q < blocks.size(); ++q)
      p += blocks[q].re.diagonal();
    return p;
  }
};

class SectorRhs {
 public:
  SectorRhs(std::vector<MatrixXd> sector_h, double gamma, int n)
      : sector_h_(std::move(sector_h)), gamma_(gamma), n_(n) {
    const Index rings = sector_h_.front().rows();
    wr_.setZero(rings, rings);
    wi_.setZero(rings, rings);
  }

  void operator()(const SectorState& rho, SectorState& out) {
    const VectorXd refill =
        gamma_ != 0.0 ? (rho.ring_populations() / n_).eval() : VectorXd();
    for (std::size_t q = 0; q < sector_h_.size(); ++q) {
      const auto& hq = sector_h_[q];
      wr_.noalias() = hq * rho.blocks[q].re;
      wi_.noalias() = hq * rho.blocks[q].im;
      out.blocks[q].re = wi_ + wi_.transpose();
      out.blocks[q].im = wr_.transpose() - wr_;
      if (gamma_ != 0.0) {
        out.blocks[q].re -= gamma_ * rho.blocks[q].re;
        out.blocks[q].re.diagonal() += gamma_ * refill;
        out.blocks[q].im -= gamma_ * rho.blocks[q].im;
      }
    }
  }

 private:
  std::vector<MatrixXd> sector_h_;
  double gamma_;
  int n_;
  MatrixXd wr_, wi_;
};

struct SectorStateRhs {
  SectorRhs* rhs;
  void operator()(const SectorState& y, SectorState& out) { (*rhs)(y, out); }
};

}  // namespace

Eigen::MatrixXd ring_population_dynamics(const MatrixXd& open_table,
                                         double gamma, StateKind initial,
                                         int source_ring, const VectorXd& times,
                                         std::optional<double> dt_override) {
  const int rings = static_cast<int>(open_table.rows());
  const int n = static_cast<int>(open_table.cols());
  if (rings < 1 || n < 1)
    throw std::invalid_argument("open coupling table must be non-empty");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (source_ring < 0 || source_ring >= rings)
    throw std::out_of_range("source ring outside the chain");
  check_times(times);

  // Sector Hamiltonians: H_q(r, r') = sum_k h(|r - r'|, k) cos(2 pi q k / n).
  std::vector<MatrixXd> sector_h(n, MatrixXd::Zero(rings, rings));
  double norm_bound = 0.0;
  for (int q = 0; q < n; ++q) {
    VectorXd couplings(rings);
    for (int j = 0; j < rings; ++j) {
      double e = 0.0;
      for (int k = 0; k < n; ++k)
        e += open_table(j, k) * std::cos(2.0 * std::numbers::pi * q * k / n);
      couplings[j] = e;
    }
    for (int r = 0; r < rings; ++r)
      for (int s = 0; s < rings; ++s) sector_h[q](r, s) = couplings[std::abs(r - s)];
    norm_bound = std::max(norm_bound, norm_upper_bound(sector_h[q]));
  }

  SectorState initial_state;
  initial_state.blocks.assign(n, HermitianPair{});
  for (auto& block : initial_state.blocks) block.resize(rings);
  if (initial == StateKind::Delocalized) {
    initial_state.blocks[0].re(source_ring, source_ring) = 1.0;
  } else {
    for (auto& block : initial_state.blocks)
      block.re(source_ring, source_ring) = 1.0 / n;
  }

  double dt = dt_override.value_or(default_step(gamma, norm_bound));
  if (!(dt > 0.0)) throw std::invalid_argument("dt_override must be > 0");

  MatrixXd populations(rings, times.size());
  int non_finite_attempts = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      SectorRhs rhs(sector_h, gamma, n);
      SectorState y = initial_state;
      Rk4<SectorState, SectorStateRhs> integrator(SectorStateRhs{&rhs}, y);
      double t = 0.0;
      for (Index i = 0; i < times.size(); ++i) {
        const double span = times[i] - t;
        if (span > 0.0) {
          const int steps = std::max(1, static_cast<int>(std::ceil(span / dt)));
          const double h = span / steps;
          for (int s = 0; s < steps; ++s) integrator.step(y, h);
          t = times[i];
        }
        const VectorXd p = y.ring_populations();
        check_sampled_diagonal(p);
        populations.col(i) = p;
      }
      return populations;
    } catch (const RefineNeeded& refine) {
      if (!refine.finite && ++non_finite_attempts > kMaxNonFiniteAttempts)
        throw std::runtime_error(
            "ring population integrator produced non-finite samples");
      dt *= 0.5;
      if (attempt + 1 >= kMaxRefinements || dt < 1e-12)
        throw std::runtime_error(
            "ring population integrator step size underflow (no convergence)");
    }
  }
}

Eigen::MatrixXd closed_ring_population_series(const Hamiltonian& hamiltonian,
                                              const SiteLattice& lattice,
                                              const QuantumState& psi0,
                                              const VectorXd& times) {
  if (!psi0.is_pure())
    throw std::invalid_argument("closed propagation requires a pure state");
  if (psi0.dim() != hamiltonian.dim() || hamiltonian.dim() != lattice.size())
    throw std::invalid_argument("dimension mismatch");
  check_times(times);

  const auto eig = dense_eigendecomposition(hamiltonian);
  const VectorXcd coeffs = eig.eigenvectors.transpose() * psi0.amplitudes();
  const int rings = lattice.ring_count();
  const int n = lattice.sites_per_ring();

  MatrixXd populations = MatrixXd::Zero(rings, times.size());
  VectorXcd amp(hamiltonian.dim());
  for (Index i = 0; i < times.size(); ++i) {
    if (times[i] == 0.0) {
      amp = psi0.amplitudes();
    } else {
      const VectorXcd phased =
          (Eigen::exp((complex<double>(0, -times[i]) * eig.eigenvalues.array())
                          .cast<complex<double>>()) *
           coeffs.array())
              .matrix();
      amp.noalias() = eig.eigenvectors * phased;
    }
    for (Index s = 0; s < amp.size(); ++s)
      populations(static_cast<int>(s) / n, i) += std::norm(amp[s]);
  }
  return populations;
}

}  // namespace exrings

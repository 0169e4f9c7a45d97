#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "exrings/coupling.hpp"
#include "exrings/dynamics.hpp"
#include "exrings/lattice.hpp"

namespace exrings {

// Ring-resolved exciton probabilities, indexed by centered ring label
// first_ring..first_ring + size - 1 (-T..T for odd chains).
struct RingPopulations {
  Eigen::VectorXd p;
  int first_ring = 0;

  int rings() const { return static_cast<int>(p.size()); }
  int label(int i) const { return first_ring + i; }
  double at_label(int ring) const { return p[ring - first_ring]; }
};

// Sums site populations per ring.  Small negative integrator noise (down to
// -1e-7) is tolerated; renormalize divides by the total, for use with decayed
// traces under recombination.
RingPopulations ring_populations(const QuantumState& state,
                                 const SiteLattice& lattice,
                                 bool renormalize = false);

// sigma = spacing * sqrt(sum_r r^2 p_r); spacing is the ring separation D
// (helices: the pitch d).  Negative noise entries are clamped to zero.
double diffusion_length(const RingPopulations& populations, double spacing);

// Short-time diffusion of the delocalized state on the middle ring:
// sigma = D t sqrt(2 sum_{j=1..T} j^2 (sum_k h_{j,k})^2).  Warns (does not
// fail) when t times the inter-ring coupling scale exceeds 0.3.  Odd N and n
// required.
double sigma_deloc_analytic(const BlockCoefficients& coefficients, double t);

// Localized-state counterpart with sum_k h_{j,k}^2 inside.
double sigma_loc_analytic(const BlockCoefficients& coefficients, double t);

// Closed forms for symmetric nearest-neighbour inter-ring couplings only:
// sqrt(2) J t n / D^2 and sqrt(2) J t sqrt(n) / D^2.
double sigma_deloc_nearest_neighbor(double strength, double t, int n, double spacing);
double sigma_loc_nearest_neighbor(double strength, double t, int n, double spacing);

// Multiplier on the nearest-neighbour closed forms when every inter-ring
// coupling is kept in the far-field limit: sqrt(sum_{j=1..T} j^-4), which
// tends to pi^2/sqrt(90) ~ 1.0403 as T grows.
double far_field_interaction_factor(int half_span);

// Inter-ring coupling scale 2 sum_{j=1..T} sum_k |h_{j,k}|.  Upper bound on
// the effective chain norm that controls both the short-time expansion and
// the boundary-free evolution window; the initial ring's own couplings drop
// out of the ring populations exactly and are excluded.
double inter_ring_coupling_norm(const BlockCoefficients& coefficients);

// Second-order-in-time ring populations for an arbitrary real initial
// amplitude table alpha (rows = rings -T..T, columns = sites 0..n-1,
// normalized).  Out-of-range ring lookups wrap on the torus, matching the
// coupling table convention.  The delocalized and localized tables reproduce
// the two analytic sigma formulas exactly.
RingPopulations short_time_ring_populations(const Eigen::MatrixXd& alpha,
                                            const BlockCoefficients& coefficients,
                                            double t);

// Reference diffusion for a dephased tight-binding chain:
// sigma^2 = (4 J^2 / gamma) [t - (1 - exp(-gamma t)) / gamma], which is
// ballistic (sqrt(2) J t) for gamma t << 1 and diffusive (2 J sqrt(t/gamma))
// for gamma t >> 1.  Requires gamma > 0.
double haken_strobl_reference_sigma(double strength, double gamma, double t);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// Least squares on (log x, log y); all inputs must be positive, >= 3 points.
PowerLawFit fit_power_law(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

inline constexpr int kLocalExponentWindow = 5;

// Sliding-window local slopes of log sigma vs log t; entries without a full
// window are NaN.
Eigen::VectorXd local_exponents(const Eigen::VectorXd& times,
                                const Eigen::VectorXd& sigmas,
                                int window = kLocalExponentWindow);

struct DiffusionSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd sigma;
  std::vector<std::pair<std::string, std::string>> meta;  // run parameters
};

// Exact transfer probabilities between two permutation-symmetric clusters of
// n_A and n_B sites, every A site coupled to every B site with strength
// gamma_c and equal on-site energies.  Returns (P_sym, P_loc): the symmetrized
// donor -> symmetrized acceptor probability, and the localized donor -> single
// acceptor site probability (averaged over the equivalent acceptor sites).
// P_sym / P_loc = n_A n_B, the supertransfer enhancement.
std::pair<double, double> supertransfer_pair_probability(int n_a, int n_b,
                                                         double gamma_c,
                                                         double t);

}  // namespace exrings

#include "exrings/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "exrings/log.hpp"
#include "exrings/spectral.hpp"

namespace exrings {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kNoiseFloor = -1e-7;
constexpr double kShortTimeGate = 0.3;

// Odd N keeps the centered ring labels -T..T exact; the intra-ring site count
// carries no such constraint (the k sums are parity-free).
void require_odd_rings(const BlockCoefficients& coefficients) {
  if (coefficients.ring_count() % 2 == 0)
    throw std::invalid_argument("analytic diffusion formulas require odd N");
}

void warn_if_long_time(const BlockCoefficients& coefficients, double t) {
  const double scale = t * inter_ring_coupling_norm(coefficients);
  if (scale >= kShortTimeGate) {
    std::ostringstream os;
    os << "short-time diffusion formula evaluated at t*|H| = " << scale
       << " (>= " << kShortTimeGate << "); result may not match dynamics";
    log_warn(os.str());
  }
}

}  // namespace

RingPopulations ring_populations(const QuantumState& state,
                                 const SiteLattice& lattice, bool renormalize) {
  if (state.dim() != lattice.size())
    throw std::invalid_argument("state dimension does not match lattice size");
  const VectorXd site_p = state.site_populations();
  RingPopulations result;
  result.first_ring = lattice.min_ring();
  result.p.setZero(lattice.ring_count());
  const int n = lattice.sites_per_ring();
  for (Index s = 0; s < site_p.size(); ++s)
    result.p[static_cast<int>(s) / n] += site_p[s];
  if (result.p.minCoeff() < kNoiseFloor)
    throw std::runtime_error("ring populations are negative beyond noise level");
  if (renormalize) {
    const double total = result.p.sum();
    if (total <= 0.0)
      throw std::runtime_error("cannot renormalize vanished populations");
    result.p /= total;
  }
  return result;
}

double diffusion_length(const RingPopulations& populations, double spacing) {
  double second_moment = 0.0;
  for (int i = 0; i < populations.rings(); ++i) {
    double p = populations.p[i];
    if (p < 0.0) {
      if (p < kNoiseFloor)
        throw std::invalid_argument("ring population below the noise floor");
      p = 0.0;
    }
    const double r = populations.label(i);
    second_moment += r * r * p;
  }
  return spacing * std::sqrt(second_moment);
}

double sigma_deloc_analytic(const BlockCoefficients& coefficients, double t) {
  require_odd_rings(coefficients);
  warn_if_long_time(coefficients, t);
  double acc = 0.0;
  for (int j = 1; j <= coefficients.half_span(); ++j) {
    const double row_sum = coefficients.ring_sum(j);
    acc += static_cast<double>(j) * j * row_sum * row_sum;
  }
  return coefficients.spacing() * t * std::sqrt(2.0 * acc);
}

double sigma_loc_analytic(const BlockCoefficients& coefficients, double t) {
  require_odd_rings(coefficients);
  warn_if_long_time(coefficients, t);
  double acc = 0.0;
  for (int j = 1; j <= coefficients.half_span(); ++j)
    acc += static_cast<double>(j) * j * coefficients.ring_sum_squares(j);
  return coefficients.spacing() * t * std::sqrt(2.0 * acc);
}

double sigma_deloc_nearest_neighbor(double strength, double t, int n,
                                    double spacing) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return std::numbers::sqrt2 * strength * t * n / (spacing * spacing);
}

double sigma_loc_nearest_neighbor(double strength, double t, int n,
                                  double spacing) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return std::numbers::sqrt2 * strength * t * std::sqrt(static_cast<double>(n)) /
         (spacing * spacing);
}

double far_field_interaction_factor(int half_span) {
  if (half_span < 1) throw std::invalid_argument("half span must be >= 1");
  double acc = 0.0;
  for (int j = 1; j <= half_span; ++j)
    acc += 1.0 / (static_cast<double>(j) * j * j * j);
  return std::sqrt(acc);
}

double inter_ring_coupling_norm(const BlockCoefficients& coefficients) {
  double total = 0.0;
  for (int j = 1; j <= coefficients.half_span(); ++j)
    total += coefficients.table().row(j).cwiseAbs().sum();
  return 2.0 * total;
}

RingPopulations short_time_ring_populations(const MatrixXd& alpha,
                                            const BlockCoefficients& coefficients,
                                            double t) {
  const int rings = coefficients.ring_count();
  const int n = coefficients.sites_per_ring();
  if (alpha.rows() != rings || alpha.cols() != n)
    throw std::invalid_argument("amplitude table shape does not match (N, n)");
  if (std::abs(alpha.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("amplitude table must be normalized");
  const int half = coefficients.half_span();

  RingPopulations result;
  result.first_ring = -half;
  result.p.setZero(rings);
  for (int ring = -half; ring <= half; ++ring) {
    double p = 0.0;
    for (int s = 0; s < n; ++s) {
      double transfer = 0.0;
      for (int j = 0; j < rings; ++j) {
        // alpha row of ring R + j, wrapped on the torus
        const int row = (((ring + j + half) % rings) + rings) % rings;
        for (int k = 0; k < n; ++k)
          transfer += coefficients.table()(j, k) * alpha(row, (s + k) % n);
      }
      const double a = alpha(ring + half, s);
      p += a * a + t * t * transfer * transfer;
    }
    result.p[ring + half] = p;
  }
  return result;
}

double haken_strobl_reference_sigma(double strength, double gamma, double t) {
  if (!(gamma > 0.0))
    throw std::invalid_argument(
        "reference formula requires gamma > 0 (closed-system formulas apply "
        "otherwise)");
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const double bracket = t + std::expm1(-gamma * t) / gamma;
  return 2.0 * strength * std::sqrt(std::max(0.0, bracket / gamma));
}

PowerLawFit fit_power_law(const VectorXd& xs, const VectorXd& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("x and y must have equal length");
  if (xs.size() < 3)
    throw std::invalid_argument("power-law fit needs at least 3 points");
  if (xs.minCoeff() <= 0.0 || ys.minCoeff() <= 0.0)
    throw std::invalid_argument("power-law fit requires positive data");

  const VectorXd lx = xs.array().log();
  const VectorXd ly = ys.array().log();
  const double mx = lx.mean();
  const double my = ly.mean();
  const VectorXd dx = lx.array() - mx;
  const VectorXd dy = ly.array() - my;
  const double sxx = dx.squaredNorm();
  if (sxx <= 0.0)
    throw std::invalid_argument("power-law fit is degenerate (constant x)");

  PowerLawFit fit;
  fit.exponent = dx.dot(dy) / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  const double ss_tot = dy.squaredNorm();
  if (ss_tot <= 0.0) {
    fit.r_squared = 1.0;
  } else {
    const double ss_res = (dy - fit.exponent * dx).squaredNorm();
    fit.r_squared = 1.0 - ss_res / ss_tot;
  }
  return fit;
}

VectorXd local_exponents(const VectorXd& times, const VectorXd& sigmas,
                         int window) {
  if (times.size() != sigmas.size())
    throw std::invalid_argument("times and sigmas must have equal length");
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("window must be an odd count >= 3");
  const int half = window / 2;
  VectorXd result =
      VectorXd::Constant(times.size(), std::numeric_limits<double>::quiet_NaN());
  for (Index i = half; i + half < times.size(); ++i) {
    const VectorXd tw = times.segment(i - half, window);
    const VectorXd sw = sigmas.segment(i - half, window);
    if (tw.minCoeff() <= 0.0 || sw.minCoeff() <= 0.0) continue;
    result[i] = fit_power_law(tw, sw).exponent;
  }
  return result;
}

std::pair<double, double> supertransfer_pair_probability(int n_a, int n_b,
                                                         double gamma_c,
                                                         double t) {
  if (n_a < 1 || n_b < 1) throw std::invalid_argument("cluster sizes must be >= 1");
  if (n_a * n_b > 36)
    throw std::invalid_argument("cluster product capped at 36 sites^2");
  if (!(gamma_c > 0.0)) throw std::invalid_argument("gamma_c must be > 0");

  const int dim = n_a + n_b;
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n_a; ++i)
    for (int j = 0; j < n_b; ++j) {
      h(i, n_a + j) = gamma_c;
      h(n_a + j, i) = gamma_c;
    }

  const auto eig = dense_eigendecomposition(h);
  VectorXcd donor_sym = VectorXcd::Zero(dim);
  for (int i = 0; i < n_a; ++i) donor_sym[i] = 1.0 / std::sqrt(double(n_a));
  VectorXcd acceptor_sym = VectorXcd::Zero(dim);
  for (int j = 0; j < n_b; ++j)
    acceptor_sym[n_a + j] = 1.0 / std::sqrt(double(n_b));
  VectorXcd donor_site = VectorXcd::Zero(dim);
  donor_site[0] = 1.0;

  auto evolve = [&](const VectorXcd& psi0) {
    const VectorXcd coeffs = eig.eigenvectors.transpose() * psi0;
    const VectorXcd phased =
        (Eigen::exp((std::complex<double>(0, -t) * eig.eigenvalues.array())
                        .cast<std::complex<double>>()) *
         coeffs.array())
            .matrix();
    return (eig.eigenvectors * phased).eval();
  };

  const VectorXcd evolved_sym = evolve(donor_sym);
  const double p_sym = std::norm(acceptor_sym.dot(evolved_sym));

  const VectorXcd evolved_site = evolve(donor_site);
  double p_acceptors = 0.0;
  for (int j = 0; j < n_b; ++j) p_acceptors += std::norm(evolved_site[n_a + j]);
  const double p_loc = p_acceptors / n_b;

  return {p_sym, p_loc};
}

}  // namespace exrings

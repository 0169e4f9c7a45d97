#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exrings/coupling.hpp"
#include "exrings/dynamics.hpp"
#include "exrings/lattice.hpp"
#include "exrings/observables.hpp"
#include "exrings/spectral.hpp"
#include "exrings/version.hpp"

namespace py = pybind11;
using namespace exrings;

namespace {

QuantumState state_from_array(const py::object& obj) {
  // 1-D arrays are pure amplitude vectors, 2-D arrays density matrices.
  const py::array arr = py::cast<py::array>(obj);
  if (arr.ndim() == 1)
    return QuantumState::pure(obj.cast<Eigen::VectorXcd>());
  if (arr.ndim() == 2)
    return QuantumState::density(obj.cast<Eigen::MatrixXcd>());
  throw std::invalid_argument("state must be a vector or a square matrix");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exciton diffusion on stacked-ring and helical chromophore arrays";
#ifdef EXRINGS_VERSION_INFO
  m.attr("__version__") = EXRINGS_VERSION_INFO;
#else
  m.attr("__version__") = kVersion;
#endif

  py::class_<SiteLattice>(m, "SiteLattice")
      .def_property_readonly("kind",
                             [](const SiteLattice& lat) { return to_string(lat.kind()); })
      .def_property_readonly("n", &SiteLattice::sites_per_ring)
      .def_property_readonly("rings", &SiteLattice::ring_count)
      .def_property_readonly("radius", &SiteLattice::radius)
      .def_property_readonly("spacing", &SiteLattice::spacing)
      .def("__len__", &SiteLattice::size)
      .def("positions",
           [](const SiteLattice& lat) {
             return Eigen::MatrixXd(lat.positions().transpose());
           },
           "Site positions as an (n*N, 3) array")
      .def("ring_of", &SiteLattice::ring_of, py::arg("site"))
      .def("pair_distance", &SiteLattice::pair_distance, py::arg("a"),
           py::arg("b"));

  m.def("build_ring_stack", &build_ring_stack, py::arg("n"), py::arg("rings"),
        py::arg("radius"), py::arg("spacing"),
        "Stacked-ring lattice: n sites per ring, N rings, radius R, spacing D");
  m.def("build_helix", &build_helix, py::arg("n"), py::arg("turns"),
        py::arg("radius"), py::arg("pitch"),
        "Helical lattice: n sites per turn, N turns, radius R, pitch d");

  m.def(
      "assemble_hamiltonian",
      [](const SiteLattice& lattice, double strength,
         std::optional<Eigen::VectorXd> offsets) {
        return assemble_hamiltonian(lattice, CouplingKernel(strength), offsets)
            .matrix;
      },
      py::arg("lattice"), py::arg("J") = 1.0, py::arg("offsets") = std::nullopt,
      "Dense single-excitation Hamiltonian with the 1/r^3 kernel");
  m.def(
      "sample_disorder",
      [](double sigma, std::uint64_t seed, Eigen::Index size) {
        return sample_disorder(DisorderSpec{sigma, seed}, size);
      },
      py::arg("sigma"), py::arg("seed"), py::arg("size"),
      "Gaussian on-site offsets, reproducible for a fixed seed");

  py::class_<BlockCoefficients>(m, "BlockCoefficients")
      .def_property_readonly("n", &BlockCoefficients::sites_per_ring)
      .def_property_readonly("rings", &BlockCoefficients::ring_count)
      .def_property_readonly("spacing", &BlockCoefficients::spacing)
      .def_property_readonly("half_span", &BlockCoefficients::half_span)
      .def("table", &BlockCoefficients::table,
           py::return_value_policy::reference_internal)
      .def("ring_sum", &BlockCoefficients::ring_sum, py::arg("j"));

  m.def(
      "extract_block_coefficients",
      [](int n, int rings, double radius, double spacing, double strength) {
        return extract_block_coefficients(n, rings, radius, spacing,
                                          CouplingKernel(strength));
      },
      py::arg("n"), py::arg("rings"), py::arg("radius"), py::arg("spacing"),
      py::arg("J") = 1.0,
      "Inter-ring coupling table h(j, k) on the torus convention");
  m.def(
      "torus_hamiltonian",
      [](const BlockCoefficients& coefficients) {
        return torus_hamiltonian(coefficients).matrix;
      },
      py::arg("coefficients"),
      "Exact block-circulant Hamiltonian built from h(j, k)");
  m.def(
      "circulant_eigenvalues",
      [](const BlockCoefficients& coefficients) {
        return circulant_eigenvalues(coefficients).values;
      },
      py::arg("coefficients"),
      "Double-DFT spectrum e(p, q) of the torus Hamiltonian");
  m.def(
      "eigendecomposition",
      [](const Eigen::MatrixXd& matrix) {
        const auto eig = dense_eigendecomposition(matrix);
        return py::make_tuple(eig.eigenvalues, eig.eigenvectors);
      },
      py::arg("matrix"), "Eigenvalues (ascending) and orthonormal eigenvectors");
  m.def(
      "operator_norm",
      [](const Eigen::MatrixXd& matrix) { return operator_norm_bound(matrix); },
      py::arg("matrix"));

  m.def(
      "delocalized_state",
      [](const SiteLattice& lattice, int ring) {
        return delocalized_state(lattice, ring).amplitudes();
      },
      py::arg("lattice"), py::arg("ring") = 0);
  m.def(
      "localized_state",
      [](const SiteLattice& lattice, std::optional<int> site) {
        return (site ? localized_state(lattice, *site) : localized_state(lattice))
            .amplitudes();
      },
      py::arg("lattice"), py::arg("site") = std::nullopt);

  m.def(
      "evolve_closed",
      [](const Eigen::MatrixXd& hamiltonian, const Eigen::VectorXcd& psi0,
         const Eigen::VectorXd& times) {
        const Trajectory traj = evolve_closed(
            Hamiltonian{hamiltonian, Eigen::VectorXd(hamiltonian.diagonal())},
            QuantumState::pure(psi0), times);
        Eigen::MatrixXcd out(times.size(), psi0.size());
        for (Eigen::Index i = 0; i < times.size(); ++i)
          out.row(i) = traj.states[static_cast<std::size_t>(i)].amplitudes();
        return out;
      },
      py::arg("hamiltonian"), py::arg("psi0"), py::arg("times"),
      "Amplitudes psi(t) per requested time, one row per time");
  m.def(
      "evolve_lindblad",
      [](const Eigen::MatrixXd& hamiltonian, double gamma, double kappa,
         const py::object& rho0, const Eigen::VectorXd& times,
         std::optional<double> dt_override) {
        LindbladOptions options;
        options.dt_override = dt_override;
        const Trajectory traj = evolve_lindblad(
            Hamiltonian{hamiltonian, Eigen::VectorXd(hamiltonian.diagonal())},
            OpenSystemParams{gamma, kappa}, state_from_array(rho0), times,
            options);
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(traj.states.size());
        for (const auto& state : traj.states) out.push_back(state.to_density());
        return out;
      },
      py::arg("hamiltonian"), py::arg("gamma"), py::arg("kappa"),
      py::arg("rho0"), py::arg("times"), py::arg("dt_override") = std::nullopt,
      "Density matrices rho(t) under the dephasing + recombination master "
      "equation");

  m.def(
      "ring_populations",
      [](const py::object& state, const SiteLattice& lattice, bool renormalize) {
        const RingPopulations populations =
            ring_populations(state_from_array(state), lattice, renormalize);
        return py::make_tuple(populations.p, populations.first_ring);
      },
      py::arg("state"), py::arg("lattice"), py::arg("renormalize") = false,
      "(populations, first_ring_label)");
  m.def(
      "diffusion_length",
      [](const Eigen::VectorXd& populations, int first_ring, double spacing) {
        return diffusion_length(RingPopulations{populations, first_ring}, spacing);
      },
      py::arg("populations"), py::arg("first_ring"), py::arg("spacing"));

  m.def("sigma_deloc_analytic", &sigma_deloc_analytic, py::arg("coefficients"),
        py::arg("t"));
  m.def("sigma_loc_analytic", &sigma_loc_analytic, py::arg("coefficients"),
        py::arg("t"));
  m.def("sigma_deloc_nearest_neighbor", &sigma_deloc_nearest_neighbor,
        py::arg("J"), py::arg("t"), py::arg("n"), py::arg("spacing"));
  m.def("sigma_loc_nearest_neighbor", &sigma_loc_nearest_neighbor, py::arg("J"),
        py::arg("t"), py::arg("n"), py::arg("spacing"));
  m.def("far_field_interaction_factor", &far_field_interaction_factor,
        py::arg("half_span"));
  m.def(
      "short_time_ring_populations",
      [](const Eigen::MatrixXd& alpha, const BlockCoefficients& coefficients,
         double t) {
        const RingPopulations populations =
            short_time_ring_populations(alpha, coefficients, t);
        return py::make_tuple(populations.p, populations.first_ring);
      },
      py::arg("alpha"), py::arg("coefficients"), py::arg("t"),
      "Second-order ring populations for a real amplitude table");
  m.def("haken_strobl_reference_sigma", &haken_strobl_reference_sigma,
        py::arg("J"), py::arg("gamma"), py::arg("t"));
  m.def(
      "fit_power_law",
      [](const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
        const PowerLawFit fit = fit_power_law(xs, ys);
        return py::make_tuple(fit.exponent, fit.prefactor, fit.r_squared);
      },
      py::arg("xs"), py::arg("ys"), "(exponent, prefactor, r_squared)");
  m.def("local_exponents", &local_exponents, py::arg("times"), py::arg("sigmas"),
        py::arg("window") = kLocalExponentWindow);
  m.def("supertransfer_pair_probability", &supertransfer_pair_probability,
        py::arg("n_a"), py::arg("n_b"), py::arg("gamma_c"), py::arg("t"),
        "(P_sym, P_loc) for two symmetrically coupled clusters");
  m.def(
      "ring_population_dynamics",
      [](const Eigen::MatrixXd& open_table, double gamma,
         const std::string& state, int source_ring, const Eigen::VectorXd& times,
         std::optional<double> dt_override) {
        return ring_population_dynamics(open_table, gamma,
                                        state_kind_from_string(state),
                                        source_ring, times, dt_override);
      },
      py::arg("open_table"), py::arg("gamma"), py::arg("state"),
      py::arg("source_ring"), py::arg("times"),
      py::arg("dt_override") = std::nullopt,
      "Ring-resolved populations for the canonical states (sector-reduced)");
  m.def(
      "open_chain_coupling_table",
      [](int n, int rings, double radius, double spacing, double strength) {
        return open_chain_coupling_table(n, rings, radius, spacing,
                                         CouplingKernel(strength));
      },
      py::arg("n"), py::arg("rings"), py::arg("radius"), py::arg("spacing"),
      py::arg("J") = 1.0);
}

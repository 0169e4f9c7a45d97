"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import exrings as xr


def test_version():
    assert xr.__version__


def test_ring_stack_geometry():
    lat = xr.build_ring_stack(4, 2, 1.0, 10.0)
    assert len(lat) == 8
    pos = lat.positions()
    assert pos.shape == (8, 3)
    np.testing.assert_allclose(pos[0], [0.0, 1.0, -10.0], atol=1e-12)
    assert lat.pair_distance(0, 4) == pytest.approx(10.0)
    assert lat.ring_of(0) == -1 and lat.ring_of(4) == 0


def test_helix_geometry():
    rod = xr.build_helix(3, 2, 1.0, 10.0)
    assert rod.pair_distance(0, 3) == pytest.approx(10.0)
    assert rod.positions()[0, 2] == pytest.approx(10.0 / 3.0)


def test_hamiltonian_and_disorder():
    lat = xr.build_ring_stack(1, 3, 1.0, 10.0)
    h = xr.assemble_hamiltonian(lat)
    assert h[0, 1] == pytest.approx(1e-3)
    assert h[0, 2] == pytest.approx(1.0 / 8000.0)
    eta = xr.sample_disorder(0.2, 99, 1000)
    assert eta.std() == pytest.approx(0.2, abs=0.02)
    np.testing.assert_array_equal(eta, xr.sample_disorder(0.2, 99, 1000))


def test_rabi_flop():
    h = np.array([[0.0, 0.7], [0.7, 0.0]])
    psi0 = np.array([1.0 + 0j, 0.0 + 0j])
    times = np.linspace(0.0, 3.0, 7)
    amps = xr.evolve_closed(h, psi0, times)
    np.testing.assert_allclose(
        np.abs(amps[:, 1]) ** 2, np.sin(0.7 * times) ** 2, atol=1e-10
    )


def test_closed_sigma_matches_analytic():
    n, rings, spacing = 4, 31, 10.0
    lat = xr.build_ring_stack(n, rings, 1.0, spacing)
    h = xr.assemble_hamiltonian(lat)
    psi = xr.delocalized_state(lat)
    amps = xr.evolve_closed(h, psi, np.array([1.0]))[0]
    p, first = xr.ring_populations(amps, lat)
    sigma = xr.diffusion_length(p, first, spacing)
    bc = xr.extract_block_coefficients(n, rings, 1.0, spacing)
    assert sigma == pytest.approx(xr.sigma_deloc_analytic(bc, 1.0), rel=1e-6)


def test_circulant_vs_dense_spectrum():
    bc = xr.extract_block_coefficients(3, 5, 1.0, 10.0)
    analytic = np.sort(xr.circulant_eigenvalues(bc).ravel())
    dense = np.sort(np.linalg.eigvalsh(xr.torus_hamiltonian(bc)))
    np.testing.assert_allclose(analytic, dense, atol=1e-10)


def test_lindblad_dephasing_decay():
    h = np.zeros((2, 2))
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    times = np.array([0.5, 1.0])
    rhos = xr.evolve_lindblad(h, 1.3, 0.0, plus, times)
    for t, rho in zip(times, rhos):
        assert rho[0, 0].real == pytest.approx(0.5, abs=1e-9)
        assert rho[0, 1].real == pytest.approx(0.5 * math.exp(-1.3 * t), abs=1e-6)


def test_sector_reduction_matches_dense():
    table = xr.open_chain_coupling_table(3, 5, 1.0, 2.0)
    lat = xr.build_ring_stack(3, 5, 1.0, 2.0)
    h = xr.assemble_hamiltonian(lat)
    times = np.array([0.4, 0.9])
    fast = xr.ring_population_dynamics(table, 0.8, "delocalized", 2, times)
    rhos = xr.evolve_lindblad(h, 0.8, 0.0, xr.delocalized_state(lat), times)
    for i, rho in enumerate(rhos):
        p, _ = xr.ring_populations(rho, lat)
        np.testing.assert_allclose(fast[:, i], p, atol=1e-9)


def test_fit_and_reference_formulas():
    xs = np.linspace(1.0, 20.0, 20)
    exponent, prefactor, r2 = xr.fit_power_law(xs, 3.0 * xs**0.7)
    assert exponent == pytest.approx(0.7, abs=1e-12)
    assert prefactor == pytest.approx(3.0, rel=1e-10)
    assert r2 == pytest.approx(1.0)

    assert xr.sigma_deloc_nearest_neighbor(1.0, 1.0, 5, 10.0) == pytest.approx(
        math.sqrt(2.0) * 5.0 / 100.0
    )
    assert xr.far_field_interaction_factor(15) == pytest.approx(1.0403, abs=1e-4)
    assert xr.haken_strobl_reference_sigma(1.0, 0.01, 0.01) == pytest.approx(
        math.sqrt(2.0) * 0.01, rel=1e-4
    )


def test_supertransfer_ratio():
    p_sym, p_loc = xr.supertransfer_pair_probability(2, 3, 1.0, 1e-3)
    assert p_sym / p_loc == pytest.approx(6.0, rel=0.01)

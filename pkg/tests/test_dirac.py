import math

import numpy as np
import pytest

from zitterkit.dirac_check import (
    clifford_residual,
    gamma_matrices,
    heisenberg_rate,
    onshell_projector,
    proper_time_hamiltonian,
    slash,
    spin_operator,
    verify_heisenberg,
    verify_onshell_zbw,
)
from zitterkit.minkowski import METRIC, FourVector
from zitterkit.rng import SplitMix64

IDENTITY = np.eye(4)


def test_gamma_squares():
    g0, g1, g2, g3 = gamma_matrices()
    assert np.array_equal(g0 @ g0, IDENTITY)
    assert np.array_equal(g1 @ g1, -IDENTITY)
    assert np.array_equal(g2 @ g2, -IDENTITY)
    assert np.array_equal(g3 @ g3, -IDENTITY)
    assert np.array_equal(g0 @ g1 + g1 @ g0, np.zeros((4, 4)))


def test_clifford_relations():
    assert clifford_residual() <= 1e-15
    gammas = gamma_matrices()
    for mu in range(4):
        for nu in range(4):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            np.testing.assert_array_equal(anti, 2 * METRIC[mu] * (mu == nu) * IDENTITY)


def test_spin_operator_eigenvalues():
    eigs = np.sort(np.linalg.eigvals(spin_operator(1, 2)).real)
    np.testing.assert_allclose(eigs, [-0.5, -0.5, 0.5, 0.5], atol=1e-12)


def test_spin_operator_antisymmetry():
    for mu in range(4):
        assert np.all(spin_operator(mu, mu) == 0)
        for nu in range(4):
            np.testing.assert_array_equal(spin_operator(mu, nu), -spin_operator(nu, mu))
    with pytest.raises(ValueError):
        spin_operator(0, 4)


def test_slash_lowers_the_index():
    p = FourVector(0.7, 0.2, -0.4, 0.9)
    g0, g1, g2, g3 = gamma_matrices()
    expected = 0.7 * g0 - 0.2 * g1 + 0.4 * g2 - 0.9 * g3
    np.testing.assert_array_equal(slash(p), expected)


def test_heisenberg_cmf_spatial_spin_block_commutes():
    # p = (1,0,0,0): the (1,2) spin rate has vanishing right side and the
    # commutator vanishes because both operators are block diagonal
    p = FourVector(1, 0, 0, 0)
    ham = proper_time_hamiltonian(p, 1.0)
    rate = heisenberg_rate(spin_operator(1, 2), ham)
    assert np.linalg.norm(rate) <= 1e-15
    report = verify_heisenberg(p, 1.0)
    assert report.max_residual <= 1e-12


def test_heisenberg_zero_momentum_is_central():
    report = verify_heisenberg(FourVector.zero(), 1.3)
    assert report.max_residual <= 1e-15


def test_heisenberg_random_momenta_on_and_off_shell():
    rng = SplitMix64(99)
    worst = 0.0
    for _ in range(50):
        p = FourVector.from_array(rng.uniforms(4, -1, 1))
        m = rng.uniform(0.5, 2.0)
        worst = max(worst, verify_heisenberg(p, m).max_residual)
    assert worst <= 1e-12


def test_onshell_cmf_block_structure():
    # p = (m, 0, 0, 0): the projector selects the upper two basis spinors and
    # the time component of the velocity operator reduces to p^0/m = 1
    m = 1.0
    p = FourVector(m, 0, 0, 0)
    proj = onshell_projector(p, m)
    np.testing.assert_allclose(proj, np.diag([1, 1, 0, 0]), atol=1e-15)
    g0 = gamma_matrices()[0]
    np.testing.assert_allclose(proj @ g0 @ proj, proj, atol=1e-15)
    report = verify_onshell_zbw(p, m)
    assert report.eigenspace_dim == 2
    assert report.max_residual <= 1e-12


def test_onshell_boosted():
    report = verify_onshell_zbw(FourVector(math.sqrt(2), 1, 0, 0), 1.0)
    assert report.max_residual <= 1e-12


def test_onshell_random_momenta():
    rng = SplitMix64(123)
    worst = 0.0
    for _ in range(20):
        spatial = rng.uniforms(3, -1, 1)
        m = rng.uniform(0.5, 2.0)
        p0 = math.sqrt(m * m + float(np.dot(spatial, spatial)))
        report = verify_onshell_zbw(FourVector(p0, *spatial), m)
        assert report.eigenspace_dim == 2
        worst = max(worst, report.max_residual)
    assert worst <= 1e-12


def test_onshell_rejects_off_shell():
    with pytest.raises(ValueError, match="off shell"):
        verify_onshell_zbw(FourVector(1, 1, 0, 0), 1.0)


def test_projector_matches_eigendecomposition():
    # slash(p) is not Hermitian, so the spectral projector is oblique; build
    # it from the full eigendecomposition V diag(selector) V^-1
    rng = SplitMix64(7)
    for _ in range(10):
        spatial = rng.uniforms(3, -1, 1)
        m = rng.uniform(0.5, 2.0)
        p0 = math.sqrt(m * m + float(np.dot(spatial, spatial)))
        p = FourVector(p0, *spatial)
        vals, vecs = np.linalg.eig(slash(p))
        selector = np.where(np.abs(vals - m) < 1e-8, 1.0, 0.0)
        numeric = vecs @ np.diag(selector) @ np.linalg.inv(vecs)
        np.testing.assert_allclose(onshell_projector(p, m), numeric, atol=1e-10)


def test_rate_orientation_matches_classical_pin():
    # acceleration operator: rate(gamma^mu) must equal +4 S^{mu nu} p_nu,
    # mirroring the bracket orientation; the opposite commutator order flips it
    p = FourVector(1, 0, 0, 0)
    ham = proper_time_hamiltonian(p, 1.0)
    g1 = gamma_matrices()[1]
    accel = heisenberg_rate(g1, ham)
    rhs = 4.0 * spin_operator(1, 0) * (METRIC[0] * p[0])
    np.testing.assert_allclose(accel, rhs, atol=1e-15)
    flipped = 1j * (ham @ g1 - g1 @ ham)
    np.testing.assert_allclose(flipped, -rhs, atol=1e-15)

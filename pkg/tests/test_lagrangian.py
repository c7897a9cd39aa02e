
import numpy as np
import pytest

from zitterkit.lagrangian import (
    ModelParams,
    PhasePoint,
    ScalarPotential,
    canonical_momentum,
    characteristic_frequencies,
    hamiltonian,
    lagrangian_value,
    newton_law_residual,
    pi_momentum,
)
from zitterkit.minkowski import FourVector, dot


def test_params_physical_default():
    params = ModelParams(m=1.0)
    assert params.k == (1.0, -0.25)
    assert params.compton_frequency == pytest.approx(2.0)
    params2 = ModelParams(m=2.0)
    assert params2.k[1] == pytest.approx(-1.0 / 8.0)
    assert params2.compton_frequency == pytest.approx(4.0)


def test_params_newtonian_default():
    assert ModelParams(m=3.0, n=0).k == (3.0,)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(m=-1.0)
    with pytest.raises(ValueError):
        ModelParams(m=1.0, n=1, k=(1.0, 0.25))  # wrong sign for k1
    with pytest.raises(ValueError):
        ModelParams(m=1.0, n=1, k=(2.0, -0.25))  # k0 != m
    with pytest.raises(ValueError):
        ModelParams(m=1.0, n=2)  # n >= 2 needs explicit coefficients
    with pytest.raises(ValueError):
        ModelParams(m=1.0, n=1, k=(1.0, -0.25, 0.1))  # wrong length
    with pytest.raises(ValueError):
        ModelParams(m=1.0, n=2, k=(1.0, -1.0, -0.5))  # k2 sign


def test_lagrangian_value_examples():
    v = FourVector(1, 0, 0, 0)
    assert lagrangian_value(ModelParams(m=1.0, n=0), [v]) == pytest.approx(0.5)

    params = ModelParams(m=1.0)
    stack = [FourVector(1, 0.1, 0, 0), FourVector(0, 0, 0.2, 0)]
    value = lagrangian_value(params, stack)
    assert value == pytest.approx(0.5)  # 0.5*0.99 + (-0.125)*(-0.04)

    free = lagrangian_value(params, stack)
    assert lagrangian_value(params, stack, potential_energy=free) == pytest.approx(0.0)


def test_lagrangian_value_arity():
    params = ModelParams(m=1.0)
    with pytest.raises(ValueError):
        lagrangian_value(params, [FourVector(1, 0, 0, 0)])


def test_canonical_momentum_examples():
    params = ModelParams(m=1.0)
    stack = [FourVector(1, 0.1, 0, 0), FourVector(0, 0, 0.2, 0), FourVector(0, -0.4, 0, 0)]
    p = canonical_momentum(params, stack)
    np.testing.assert_allclose(p.components, [1, 0, 0, 0], atol=1e-15)

    v = FourVector(0.9, 0.2, 0, 0)
    p0 = canonical_momentum(ModelParams(m=1.5, n=0), [v])
    np.testing.assert_allclose(p0.components, 1.5 * v.components)

    rest = canonical_momentum(params, [v, FourVector.zero(), FourVector.zero()])
    np.testing.assert_allclose(rest.components, v.components)

    with pytest.raises(ValueError):
        canonical_momentum(params, stack[:2])


def test_pi_momentum_examples():
    params = ModelParams(m=1.0)
    pi = pi_momentum(params, FourVector(0, 0, 0.2, 0))
    np.testing.assert_allclose(pi.components, [0, 0, -0.05, 0])
    assert np.all(pi_momentum(params, FourVector.zero()).components == 0.0)

    heavier = ModelParams(m=2.0)
    pi2 = pi_momentum(heavier, FourVector(0, 0.8, 0, 0))
    np.testing.assert_allclose(pi2.components, [0, -0.1, 0, 0])

    with pytest.raises(ValueError):
        pi_momentum(ModelParams(m=1.0, n=0), FourVector.zero())


def test_hamiltonian_examples():
    params = ModelParams(m=1.0)
    point = PhasePoint(x=FourVector.zero(), p=FourVector(1, 0, 0, 0),
                       q=FourVector(1, 0.1, 0, 0), pi=FourVector(0, 0, -0.05, 0))
    assert hamiltonian(params, point) == pytest.approx(0.51, abs=1e-15)
    assert hamiltonian(params, point, potential_energy=0.1) == pytest.approx(0.61, abs=1e-15)

    onshell = PhasePoint(x=FourVector.zero(), p=FourVector(1, 0, 0, 0),
                         q=FourVector(1, 0, 0, 0), pi=FourVector.zero())
    assert hamiltonian(params, onshell) == pytest.approx(0.5)

    with pytest.raises(ValueError):
        hamiltonian(ModelParams(m=1.0, n=0), point)


def _free_derivative_stack(params, p, cos_amp, sin_amp, tau, orders):
    """Analytic derivatives of the oscillating free velocity, any order."""
    w = params.compton_frequency
    pc = p.components / params.m
    ea = cos_amp.components
    ha = sin_amp.components
    out = []
    for i in range(orders):
        # i-th derivative of cos/sin pair
        phase = 0.5 * np.pi * i
        ci = np.cos(w * tau + phase) * w**i
        si = np.sin(w * tau + phase) * w**i
        vec = ea * ci + ha * si
        if i == 0:
            vec = vec + pc
        out.append(FourVector.from_array(vec))
    return out


def test_newton_law_residual_examples():
    newton = ModelParams(m=1.0, n=0)
    res = newton_law_residual(newton, [FourVector(0, 1, 0, 0)], FourVector(0, 1, 0, 0))
    assert np.all(res.components == 0.0)

    params = ModelParams(m=1.0)
    p = FourVector(1, 0, 0, 0)
    cos_amp = FourVector(0, 0.1, 0, 0)
    sin_amp = FourVector(0, 0, 0.1, 0)
    for tau in (0.0, 0.37, 2.9):
        stack = _free_derivative_stack(params, p, cos_amp, sin_amp, tau, 4)
        accel_stack = stack[1:]  # a, adot, addot
        res = newton_law_residual(params, accel_stack, FourVector.zero())
        assert np.abs(res.components).max() <= 1e-12

    still = [FourVector.zero()] * 3
    res = newton_law_residual(params, still, FourVector(0, 0.3, 0, 0))
    np.testing.assert_allclose(res.components, [0, -0.3, 0, 0])

    with pytest.raises(ValueError):
        newton_law_residual(params, still[:2], FourVector.zero())


def test_characteristic_frequencies_examples():
    assert characteristic_frequencies(ModelParams(m=1.0)) == pytest.approx([2.0])
    assert characteristic_frequencies(ModelParams(m=2.0)) == pytest.approx([4.0])
    two_mode = ModelParams(m=1.0, n=2, k=(1.0, -1.25, 0.25))
    assert characteristic_frequencies(two_mode) == pytest.approx([1.0, 2.0])
    assert characteristic_frequencies(ModelParams(m=1.0, n=0)) == []


def test_characteristic_frequencies_consistency():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(1, 4))
        k = [float(rng.uniform(0.2, 3.0)) * (-1.0) ** i for i in range(n + 1)]
        params = ModelParams(m=k[0], n=n, k=tuple(k))
        for w in characteristic_frequencies(params):
            terms = [params.k[i] * w ** (2 * i) for i in range(n + 1)]
            assert abs(sum(terms)) <= 1e-10 * max(abs(t) for t in terms)


def test_momentum_consistency_on_free_solution():
    params = ModelParams(m=1.0)
    p = FourVector(1, 0, 0, 0)
    cos_amp = FourVector(0, 0.1, 0, 0)
    sin_amp = FourVector(0, 0, 0.1, 0)
    for tau in (0.0, 1.1):
        stack = _free_derivative_stack(params, p, cos_amp, sin_amp, tau, 3)
        recovered = canonical_momentum(params, stack)
        np.testing.assert_allclose(recovered.components, p.components, atol=1e-12)
        # p = m q - k1 v^(2) written out
        direct = params.m * stack[0].components - params.k1 * stack[2].components
        np.testing.assert_allclose(recovered.components, direct, atol=1e-15)
        pi = pi_momentum(params, stack[1])
        np.testing.assert_allclose(pi.components, params.k1 * stack[1].components)


def test_scalar_potential_gradients():
    b = FourVector(0.3, -1.2, 0.4, 2.0)
    lin = ScalarPotential.linear(b)
    x = FourVector(0.5, 1.5, -2.0, 0.25)
    assert lin.value(x) == pytest.approx(dot(b, x))
    np.testing.assert_allclose(lin.gradient(x).components, b.components)

    # finite-difference fallback agrees with the analytic gradient
    fd = ScalarPotential(lambda y: dot(b, y))
    np.testing.assert_allclose(fd.gradient(x).components, b.components,
                               rtol=1e-9, atol=1e-9)

    harm = ScalarPotential.harmonic_spatial(2.0)
    fd_harm = ScalarPotential(harm.value)
    np.testing.assert_allclose(fd_harm.gradient(x).components,
                               harm.gradient(x).components, rtol=1e-8, atol=1e-8)

    assert ScalarPotential.zero().value(x) == 0.0
    assert np.all(ScalarPotential.zero().gradient(x).components == 0.0)

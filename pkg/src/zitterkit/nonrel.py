"""Three-dimensional non-relativistic theory.

The force law is fourth order in time: F = m a + (hbar^2 / 4 m c^4) d2a/dt2.
Alongside the integrator this module provides the generalized kinetic-energy
split, the work integral, total-energy bookkeeping and the detector for
classically forbidden barrier traversals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import rk4_path
from .lagrangian import ModelParams

__all__ = [
    "KinState3D",
    "Potential3D",
    "EnergyBreakdown",
    "Trajectory3D",
    "BarrierInterval",
    "zbw_coefficient",
    "nr_momentum",
    "integrate_nr",
    "integrate_newtonian",
    "energy_breakdown",
    "work_integral",
    "barrier_report",
    "quantum_potential_analogue",
]


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr.tolist()}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def zbw_coefficient(params: ModelParams) -> float:
    """Strength hbar^2 / (4 m c^4) of the non-Newtonian terms."""
    return params.hbar**2 / (4.0 * params.m * params.c**4)


@dataclass(frozen=True, eq=False)
class KinState3D:
    """Fourth-order kinematic state: position, velocity, acceleration, jerk."""

    t: float
    x: np.ndarray
    v: np.ndarray
    a: np.ndarray
    j: np.ndarray

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError(f"t must be finite, got {self.t}")
        for name in ("x", "v", "a", "j"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))


class Potential3D:
    """Scalar potential on 3-space with its gradient.

    ``fn`` and, when given, ``grad`` must broadcast over a trailing axis of
    size 3 so whole trajectories can be evaluated at once.  Without an
    analytic gradient, central differences with step ``step * (1 + |x_i|)``
    are used.
    """

    def __init__(self, fn: Callable, grad: Callable | None = None,
                 label: str = "potential", step: float = 1e-6):
        self._fn = fn
        self._grad = grad
        self.label = label
        self.step = float(step)

    def value(self, x) -> float:
        return float(self._fn(np.asarray(x, dtype=float)))

    def value_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        try:
            out = np.asarray(self._fn(xs), dtype=float)
            if out.shape == xs.shape[:-1]:
                return out
        except Exception:
            pass
        return np.array([self.value(x) for x in xs])

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._grad is not None:
            return np.asarray(self._grad(x), dtype=float)
        g = np.empty(3)
        for i in range(3):
            h = self.step * (1.0 + abs(x[i]))
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            g[i] = (self.value(xp) - self.value(xm)) / (2.0 * h)
        return g

    def gradient_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self._grad is not None:
            out = np.asarray(self._grad(xs), dtype=float)
            if out.shape == xs.shape:
                return out
        return np.stack([self.gradient(x) for x in xs])

    def force(self, x) -> np.ndarray:
        return -self.gradient(x)

    @classmethod
    def zero(cls) -> "Potential3D":
        return cls(lambda x: np.zeros(np.shape(x)[:-1]),
                   grad=lambda x: np.zeros(np.shape(x)), label="zero")

    @classmethod
    def uniform_force(cls, force) -> "Potential3D":
        """Linear potential U = -F.x giving the constant force F."""
        f = _vec3(force, "force")
        return cls(lambda x: -(np.asarray(x) * f).sum(-1),
                   grad=lambda x: np.broadcast_to(-f, np.shape(x)).copy(),
                   label="uniform")

    @classmethod
    def harmonic(cls, strength: float) -> "Potential3D":
        s = float(strength)
        return cls(lambda x: 0.5 * s * (np.asarray(x) ** 2).sum(-1),
                   grad=lambda x: s * np.asarray(x, dtype=float),
                   label="harmonic")

    @classmethod
    def gaussian_barrier(cls, height: float, width: float) -> "Potential3D":
        u0 = float(height)
        sig = float(width)

        def fn(x):
            x = np.asarray(x, dtype=float)
            return u0 * np.exp(-(x**2).sum(-1) / (2.0 * sig**2))

        def grad(x):
            x = np.asarray(x, dtype=float)
            return -x / sig**2 * fn(x)[..., None]

        return cls(fn, grad=grad, label="gaussian")

    @classmethod
    def smoothed_step(cls, height: float, width: float) -> "Potential3D":
        """Sigmoid step along the first axis, U = height / (1 + exp(-x/width))."""
        u0 = float(height)
        sig = float(width)

        def _sigmoid(x0):
            return 1.0 / (1.0 + np.exp(-x0 / sig))

        def fn(x):
            return u0 * _sigmoid(np.asarray(x, dtype=float)[..., 0])

        def grad(x):
            x = np.asarray(x, dtype=float)
            s = _sigmoid(x[..., 0])
            g = np.zeros(x.shape)
            g[..., 0] = u0 * s * (1.0 - s) / sig
            return g

        return cls(fn, grad=grad, label="step")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Kinetic-energy split of the fourth-order theory.

    ``kinetic_zbw`` is the non-Newtonian term -(hbar^2/4mc^4)(a^2/2 - adot.v);
    it doubles as the classical analogue of the quantum potential.
    """

    kinetic_newton: float
    kinetic_zbw: float
    kinetic: float
    potential: float
    total: float

    @property
    def quantum_potential(self) -> float:
        return self.kinetic_zbw


def energy_breakdown(params: ModelParams, s: KinState3D, pot: Potential3D) -> EnergyBreakdown:
    lam = zbw_coefficient(params)
    kn = 0.5 * params.m * float(np.dot(s.v, s.v))
    kz = -lam * (0.5 * float(np.dot(s.a, s.a)) - float(np.dot(s.j, s.v)))
    u = pot.value(s.x)
    return EnergyBreakdown(kinetic_newton=kn, kinetic_zbw=kz, kinetic=kn + kz,
                           potential=u, total=kn + kz + u)


def nr_momentum(params: ModelParams, s: KinState3D) -> np.ndarray:
    """Conserved 3-momentum m v + (hbar^2 / 4 m c^4) adot."""
    return params.m * s.v + zbw_coefficient(params) * s.j


def quantum_potential_analogue(params: ModelParams, s: KinState3D) -> float:
    """Classical counterpart of the quantum potential of wave mechanics:
    -(hbar^2 / 4 m c^4) (a^2/2 - adot.v), identical to the non-Newtonian
    kinetic term."""
    lam = zbw_coefficient(params)
    return -lam * (0.5 * float(np.dot(s.a, s.a)) - float(np.dot(s.j, s.v)))


@dataclass(frozen=True, eq=False)
class Trajectory3D:
    """Sampled non-relativistic trajectory with per-sample energy records."""

    params: ModelParams
    times: np.ndarray
    xs: np.ndarray
    vs: np.ndarray
    accs: np.ndarray
    jerks: np.ndarray
    e_newton: np.ndarray
    e_zbw: np.ndarray
    e_kinetic: np.ndarray
    e_potential: np.ndarray
    e_total: np.ndarray
    newtonian: bool = False

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> KinState3D:
        return KinState3D(t=float(self.times[i]), x=self.xs[i], v=self.vs[i],
                          a=self.accs[i], j=self.jerks[i])

    def breakdown(self, i: int) -> EnergyBreakdown:
        return EnergyBreakdown(
            kinetic_newton=float(self.e_newton[i]), kinetic_zbw=float(self.e_zbw[i]),
            kinetic=float(self.e_kinetic[i]), potential=float(self.e_potential[i]),
            total=float(self.e_total[i]))


def _make_traj(params, pot, times, xs, vs, accs, jerks, newtonian=False) -> Trajectory3D:
    m = params.m
    lam = zbw_coefficient(params)
    kn = 0.5 * m * (vs**2).sum(1)
    if newtonian:
        kz = np.zeros(len(times))
    else:
        kz = -lam * (0.5 * (accs**2).sum(1) - (jerks * vs).sum(1))
    u = pot.value_many(xs)
    return Trajectory3D(params=params, times=times, xs=xs, vs=vs, accs=accs,
                        jerks=jerks, e_newton=kn, e_zbw=kz, e_kinetic=kn + kz,
                        e_potential=u, e_total=kn + kz + u, newtonian=newtonian)


def integrate_nr(s0: KinState3D, params: ModelParams, pot: Potential3D,
                 t_end: float, dt: float, stride: int = 1) -> Trajectory3D:
    """RK4 on the 12-dimensional first-order reduction of the force law.

    The highest derivative is solved for algebraically:
    djdt = (4 m c^4 / hbar^2) (F(x) - m a) with F = -grad U.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    m = params.m
    inv_lam = 1.0 / zbw_coefficient(params)
    grad = pot.gradient

    def deriv(t, y):
        out = np.empty(12)
        out[0:3] = y[3:6]
        out[3:6] = y[6:9]
        out[6:9] = y[9:12]
        out[9:12] = inv_lam * (-grad(y[0:3]) - m * y[6:9])
        return out

    y0 = np.concatenate([s0.x, s0.v, s0.a, s0.j])
    n_steps = max(1, int(round(t_end / dt)))
    times, samples = rk4_path(deriv, y0, s0.t, dt, n_steps, stride)
    return _make_traj(params, pot, times, samples[:, 0:3], samples[:, 3:6],
                      samples[:, 6:9], samples[:, 9:12])


def integrate_newtonian(x0, v0, params: ModelParams, pot: Potential3D,
                        t_end: float, dt: float, stride: int = 1) -> Trajectory3D:
    """Plain second-order Newtonian control run, m a = F.

    Recorded accelerations are F/m and jerks are zero; the energy samples use
    the Newtonian kinetic term only.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x0 = _vec3(x0, "x0")
    v0 = _vec3(v0, "v0")
    m = params.m
    grad = pot.gradient

    def deriv(t, y):
        out = np.empty(6)
        out[0:3] = y[3:6]
        out[3:6] = -grad(y[0:3]) / m
        return out

    y0 = np.concatenate([x0, v0])
    n_steps = max(1, int(round(t_end / dt)))
    times, samples = rk4_path(deriv, y0, 0.0, dt, n_steps, stride)
    xs = samples[:, 0:3]
    accs = -pot.gradient_many(xs) / m
    jerks = np.zeros_like(xs)
    return _make_traj(params, pot, times, xs, samples[:, 3:6], accs, jerks,
                      newtonian=True)


def work_integral(traj: Trajectory3D, pot: Potential3D) -> float:
    """Trapezoidal integral of F . v along the trajectory.

    Equals the change of the generalized kinetic energy between the endpoints
    on any exact solution of the force law.
    """
    if len(traj) < 2:
        raise ValueError("work integral needs at least 2 samples")
    force = -pot.gradient_many(traj.xs)
    integrand = (force * traj.vs).sum(1)
    dt = np.diff(traj.times)
    return float(0.5 * ((integrand[1:] + integrand[:-1]) * dt).sum())


@dataclass(frozen=True)
class BarrierInterval:
    """One maximal stretch of classically forbidden travel: the potential
    exceeds the conserved total energy while the speed stays nonzero."""

    t_start: float
    t_end: float
    max_excess: float
    min_v_squared: float


def barrier_report(traj: Trajectory3D, pot: Potential3D, margin: float = 1e-12,
                   merge_gap: int = 3) -> list[BarrierInterval]:
    """Maximal time intervals with U(x(t)) > E_total and v^2 > 0.

    Strict inequalities with ``margin`` guard against roundoff; intervals
    separated by fewer than ``merge_gap`` samples are merged.  Returns an
    empty list when the motion never enters a forbidden region (always the
    case for Newtonian runs).
    """
    u = pot.value_many(traj.xs)
    excess = u - traj.e_total
    v2 = (traj.vs**2).sum(1)
    mask = (excess > margin) & (v2 > margin)
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return []
    runs = []
    start = prev = idx[0]
    for i in idx[1:]:
        if i - prev - 1 < merge_gap:
            prev = i
        else:
            runs.append((start, prev))
            start = prev = i
    runs.append((start, prev))
    return [
        BarrierInterval(
            t_start=float(traj.times[a]), t_end=float(traj.times[b]),
            max_excess=float(excess[a:b + 1].max()),
            min_v_squared=float(v2[a:b + 1].min()))
        for a, b in runs
    ]

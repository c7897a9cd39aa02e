"""Numerical Poisson brackets over the 16-dimensional canonical phase space.

The bracket pairs (x, p) and (q, pi) with lower-index derivatives realized
through the metric on the stored contravariant components:

    {f, g} = g^{mn} (df/dx^m dg/dp^n - df/dp^m dg/dx^n)
           + g^{mn} (df/dq^m dg/dpi^n - df/dpi^m dg/dq^n)

All partial derivatives are central finite differences with coordinate-
relative step.

Orientation.  Under this metric the literal bracket above yields
{H, x} = -q, the opposite of the first canonical evolution equation
xdot = dH/dp = q.  The evolution convention is therefore pinned globally:
time derivatives are evaluated as dG/dtau = BRACKET_ORIENTATION * {H, G}
with BRACKET_ORIENTATION = -1, which makes every evolution equation of the
theory hold with its conventional sign.  ``poisson`` itself always returns
the literal bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lagrangian import ModelParams, PhasePoint
from .minkowski import METRIC, FourVector

__all__ = [
    "BRACKET_ORIENTATION",
    "PhaseFunction",
    "poisson",
    "bracket_rate",
    "coordinate",
    "hamiltonian_function",
    "canonical_spin_function",
    "AppendixBracketReport",
    "verify_appendix",
]

#: Global sign relating the literal bracket to evolution: dG/dtau = -{H, G}.
BRACKET_ORIENTATION = -1.0

_BLOCKS = {"x": slice(0, 4), "p": slice(4, 8), "q": slice(8, 12), "pi": slice(12, 16)}


@dataclass(frozen=True)
class PhaseFunction:
    """Real-valued function of a phase-space point, with a label."""

    fn: Callable[[PhasePoint], float]
    label: str

    def __call__(self, s: PhasePoint) -> float:
        return self.fn(s)


def _pack(s: PhasePoint) -> np.ndarray:
    return np.concatenate([s.x.components, s.p.components,
                           s.q.components, s.pi.components])


def _unpack(y: np.ndarray, tau: float) -> PhasePoint:
    return PhasePoint(
        x=FourVector.from_array(y[0:4]), p=FourVector.from_array(y[4:8]),
        q=FourVector.from_array(y[8:12]), pi=FourVector.from_array(y[12:16]),
        tau=tau)


def _grad16(f: PhaseFunction, y0: np.ndarray, tau: float, h: float) -> np.ndarray:
    g = np.empty(16)
    for i in range(16):
        step = h * (1.0 + abs(y0[i]))
        yp = y0.copy()
        ym = y0.copy()
        yp[i] += step
        ym[i] -= step
        g[i] = (f(_unpack(yp, tau)) - f(_unpack(ym, tau))) / (2.0 * step)
    return g


def _combine(gf: np.ndarray, gg: np.ndarray) -> float:
    total = 0.0
    for a, b in (("x", "p"), ("q", "pi")):
        fa, fb = gf[_BLOCKS[a]], gf[_BLOCKS[b]]
        ga, gb = gg[_BLOCKS[a]], gg[_BLOCKS[b]]
        total += float(np.sum(METRIC * (fa * gb - fb * ga)))
    return total


def poisson(f: PhaseFunction, g: PhaseFunction, s: PhasePoint, h: float = 1e-4) -> float:
    """Literal finite-difference Poisson bracket {f, g} at the point s."""
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    y0 = _pack(s)
    gf = _grad16(f, y0, s.tau, h)
    gg = _grad16(g, y0, s.tau, h)
    return _combine(gf, gg)


def bracket_rate(hamiltonian_fn: PhaseFunction, g: PhaseFunction, s: PhasePoint,
                 h: float = 1e-4) -> float:
    """Evolution rate of g generated by the Hamiltonian, with the pinned
    global orientation applied (see module docstring)."""
    return BRACKET_ORIENTATION * poisson(hamiltonian_fn, g, s, h)


def coordinate(block: str, mu: int) -> PhaseFunction:
    """Coordinate function for one contravariant component of x, p, q or pi."""
    if block not in _BLOCKS:
        raise ValueError(f"block must be one of {sorted(_BLOCKS)}, got {block!r}")
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"index must be 0..3, got {mu}")
    return PhaseFunction(fn=lambda s: getattr(s, block)[mu], label=f"{block}^{mu}")


def hamiltonian_function(params: ModelParams) -> PhaseFunction:
    """The free scalar Hamiltonian of the n=1 theory as a phase function."""
    if params.n != 1:
        raise ValueError(f"the Hamiltonian form requires n=1, got n={params.n}")
    m = params.m
    k1 = params.k1

    def fn(s: PhasePoint) -> float:
        pl = METRIC * s.p.components
        ql = METRIC * s.q.components
        pil = METRIC * s.pi.components
        return (float(pl @ s.q.components)
                - 0.5 * m * float(ql @ s.q.components)
                + float(pil @ s.pi.components) / (2.0 * k1))

    return PhaseFunction(fn=fn, label="H")


def canonical_spin_function(mu: int, nu: int) -> PhaseFunction:
    """Canonical spin-tensor component q^mu pi^nu - q^nu pi^mu."""
    return PhaseFunction(
        fn=lambda s: s.q[mu] * s.pi[nu] - s.q[nu] * s.pi[mu],
        label=f"S^{mu}{nu}")


@dataclass(frozen=True)
class AppendixBracketReport:
    """Residual maxima of the bracket-form evolution equations at one point.

    Every residual compares ``BRACKET_ORIENTATION * {H, G}`` against the
    classical rate of G: momentum conservation, the two canonical pairs, and
    the spin-tensor evolution.
    """

    orientation: float
    h: float
    momentum_max: float
    position_max: float
    velocity_max: float
    pi_max: float
    spin_max: float

    @property
    def max_residual(self) -> float:
        return max(self.momentum_max, self.position_max, self.velocity_max,
                   self.pi_max, self.spin_max)

    def as_dict(self) -> dict:
        return {
            "{H,p} momentum conservation": self.momentum_max,
            "{H,x} position rate": self.position_max,
            "{H,q} velocity rate": self.velocity_max,
            "{H,pi} first-order momentum rate": self.pi_max,
            "{H,S} spin-tensor rate": self.spin_max,
        }


def _bracket_with_grad(gf: np.ndarray, g: PhaseFunction, y0: np.ndarray,
                       tau: float, h: float) -> float:
    return _combine(gf, _grad16(g, y0, tau, h))


def verify_appendix(params: ModelParams, s: PhasePoint, h: float = 1e-4) -> AppendixBracketReport:
    """Evaluate the five bracket-form evolution identities of the free n=1
    theory at one phase-space point and report their residual maxima."""
    if params.n != 1:
        raise ValueError(f"appendix verification requires n=1, got n={params.n}")
    m = params.m
    k1 = params.k1
    hf = hamiltonian_function(params)
    y0 = _pack(s)
    gh = _grad16(hf, y0, s.tau, h)
    sgn = BRACKET_ORIENTATION

    def rate(g: PhaseFunction) -> float:
        return sgn * _bracket_with_grad(gh, g, y0, s.tau, h)

    r_p = max(abs(rate(coordinate("p", mu))) for mu in range(4))
    r_x = max(abs(rate(coordinate("x", mu)) - s.q[mu]) for mu in range(4))
    r_q = max(abs(rate(coordinate("q", mu)) - s.pi[mu] / k1) for mu in range(4))
    r_pi = max(abs(rate(coordinate("pi", mu)) + (s.p[mu] - m * s.q[mu])) for mu in range(4))
    r_s = 0.0
    for mu in range(4):
        for nu in range(mu + 1, 4):
            expected = s.p[mu] * s.q[nu] - s.p[nu] * s.q[mu]
            r_s = max(r_s, abs(rate(canonical_spin_function(mu, nu)) - expected))
    return AppendixBracketReport(orientation=sgn, h=h, momentum_max=r_p,
                                 position_max=r_x, velocity_max=r_q,
                                 pi_max=r_pi, spin_max=r_s)

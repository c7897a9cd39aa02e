"""Order-n higher-derivative Lagrangian theory of spinning particles.

The free Lagrangian is a sum of squares of proper-time derivatives of the
4-velocity with alternating-sign coefficients ``k_0 .. k_n`` (``k_0 = m``).
For the physical first-order theory ``k_1 = -hbar^2 / (4 m c^4)``, which makes
every internal oscillation run at the Compton frequency ``2 m c^2 / hbar``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .minkowski import METRIC, FourVector, dot

__all__ = [
    "ModelParams",
    "PhasePoint",
    "ScalarPotential",
    "lagrangian_value",
    "canonical_momentum",
    "pi_momentum",
    "hamiltonian",
    "newton_law_residual",
    "characteristic_frequencies",
    "companion_roots",
]


@dataclass(frozen=True)
class ModelParams:
    """Model constants: mass, units, derivative order and coefficients.

    ``k`` holds the n+1 Lagrangian coefficients, low order first.  They must
    carry alternating signs, ``(-1)^i k_i > 0``, and ``k[0]`` must equal the
    mass.  When ``k`` is omitted the physical defaults are used: ``(m,)`` for
    n=0 and ``(m, -hbar^2/(4 m c^4))`` for n=1.
    """

    m: float
    n: int = 1
    hbar: float = 1.0
    c: float = 1.0
    k: tuple = None

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 0):
            raise ValueError(f"derivative order n must be a non-negative integer, got {self.n}")
        for name in ("m", "hbar", "c"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive and finite, got {val}")
        if self.k is None:
            if self.n == 0:
                k = (float(self.m),)
            elif self.n == 1:
                k = (float(self.m), -self.hbar**2 / (4.0 * self.m * self.c**4))
            else:
                raise ValueError(f"coefficients k must be given explicitly for n={self.n}")
            object.__setattr__(self, "k", k)
        else:
            k = tuple(float(x) for x in self.k)
            object.__setattr__(self, "k", k)
        if len(self.k) != self.n + 1:
            raise ValueError(f"need {self.n + 1} coefficients for n={self.n}, got {len(self.k)}")
        if abs(self.k[0] - self.m) > 1e-12 * max(1.0, abs(self.m)):
            raise ValueError(f"k[0] must equal the mass {self.m}, got {self.k[0]}")
        for i, ki in enumerate(self.k):
            if not np.isfinite(ki) or (-1.0) ** i * ki <= 0:
                raise ValueError(
                    f"coefficients must alternate in sign, (-1)^i k_i > 0; k[{i}]={ki}"
                )

    @property
    def k1(self) -> float:
        if self.n < 1:
            raise ValueError("k1 is undefined for the zeroth-order theory")
        return self.k[1]

    @property
    def compton_frequency(self) -> float:
        """Internal oscillation frequency sqrt(-k0/k1) of the n=1 theory;
        equals 2 m c^2 / hbar for the physical coefficient."""
        return float(np.sqrt(-self.m / self.k1))


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """Canonical n=1 state: position x, momentum p, velocity q and the
    first-order momentum pi conjugate to q."""

    x: FourVector
    p: FourVector
    q: FourVector
    pi: FourVector
    tau: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")


class ScalarPotential:
    """Scalar potential on spacetime together with its raised-index gradient.

    ``gradient`` returns the contravariant 4-vector dU/dx_mu (metric-raised
    from the plain coordinate gradient).  If no analytic gradient is supplied
    the components are estimated by central differences with step
    ``step * (1 + |x^mu|)``.
    """

    def __init__(self, fn: Callable[[FourVector], float], grad=None,
                 label: str = "potential", step: float = 1e-6):
        self._fn = fn
        self._grad = grad
        self.label = label
        self.step = float(step)

    def value(self, x: FourVector) -> float:
        return float(self._fn(x))

    def gradient(self, x: FourVector) -> FourVector:
        return FourVector.from_array(self._gradient_components(x.components))

    def _gradient_components(self, xc: np.ndarray) -> np.ndarray:
        if self._grad is not None:
            return self._grad(FourVector.from_array(xc)).components
        g = np.empty(4)
        for mu in range(4):
            h = self.step * (1.0 + abs(xc[mu]))
            xp = xc.copy()
            xm = xc.copy()
            xp[mu] += h
            xm[mu] -= h
            g[mu] = (self._fn(FourVector.from_array(xp)) - self._fn(FourVector.from_array(xm))) / (2.0 * h)
        return METRIC * g

    @classmethod
    def zero(cls) -> "ScalarPotential":
        return cls(lambda x: 0.0, grad=lambda x: FourVector.zero(), label="zero")

    @classmethod
    def linear(cls, b: FourVector) -> "ScalarPotential":
        """U(x) = b_mu x^mu; the raised gradient is the constant vector b."""
        return cls(lambda x: dot(b, x), grad=lambda x: b, label="linear")

    @classmethod
    def harmonic_spatial(cls, strength: float) -> "ScalarPotential":
        """U(x) = (strength/2) |x_spatial|^2 with analytic gradient."""
        s = float(strength)

        def grad(x: FourVector) -> FourVector:
            xc = x.components
            return FourVector.from_array(METRIC * np.array([0.0, s * xc[1], s * xc[2], s * xc[3]]))

        return cls(lambda x: 0.5 * s * float(np.dot(x.spatial, x.spatial)),
                   grad=grad, label="harmonic")


def _check_stack(stack: Sequence[FourVector], needed: int, what: str):
    if len(stack) < needed:
        raise ValueError(f"{what} needs at least {needed} stack entries, got {len(stack)}")


def _alternating_even_sum(params: ModelParams, stack: Sequence[FourVector]) -> np.ndarray:
    total = np.zeros(4)
    for i in range(params.n + 1):
        total += (-1.0) ** i * params.k[i] * stack[2 * i].components
    return total


def lagrangian_value(params: ModelParams, stack: Sequence[FourVector],
                     potential_energy: float = 0.0) -> float:
    """Lagrangian sum over (1/2) k_i <v^(i), v^(i)> minus the potential.

    ``stack`` lists the velocity and its proper-time derivatives, lowest
    order first; at least n+1 entries are required.
    """
    _check_stack(stack, params.n + 1, "lagrangian_value")
    total = 0.0
    for i in range(params.n + 1):
        total += 0.5 * params.k[i] * dot(stack[i], stack[i])
    return total - potential_energy


def canonical_momentum(params: ModelParams, stack: Sequence[FourVector]) -> FourVector:
    """Conserved momentum sum of (-1)^i k_i v^(2i); needs derivatives up to
    order 2n in the stack."""
    _check_stack(stack, 2 * params.n + 1, "canonical_momentum")
    return FourVector.from_array(_alternating_even_sum(params, stack))


def pi_momentum(params: ModelParams, a: FourVector) -> FourVector:
    """First-order momentum k1 * a conjugate to the velocity."""
    if params.n < 1:
        raise ValueError("the first-order momentum requires n >= 1")
    return FourVector.from_array(params.k1 * a.components)


def hamiltonian(params: ModelParams, s: PhasePoint, potential_energy: float = 0.0) -> float:
    """Conserved scalar Hamiltonian of the n=1 theory,
    H = <p,q> - (m/2)<q,q> + <pi,pi>/(2 k1) + U."""
    if params.n != 1:
        raise ValueError(f"the Hamiltonian form is implemented for n=1 only, got n={params.n}")
    return (dot(s.p, s.q)
            - 0.5 * params.m * dot(s.q, s.q)
            + dot(s.pi, s.pi) / (2.0 * params.k1)
            + potential_energy)


def newton_law_residual(params: ModelParams, accel_stack: Sequence[FourVector],
                        force: FourVector) -> FourVector:
    """Residual of the generalized force law, sum of (-1)^i k_i a^(2i) - F.

    ``accel_stack`` lists the acceleration and its derivatives (entry i is the
    (i+1)-th derivative of the velocity); zero on any exact solution.
    """
    _check_stack(accel_stack, 2 * params.n + 1, "newton_law_residual")
    return FourVector.from_array(_alternating_even_sum(params, accel_stack) - force.components)


def companion_roots(coeffs: Sequence[float]) -> np.ndarray:
    """Roots of a polynomial (coefficients low to high) via the eigenvalues of
    its companion matrix."""
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or c[-1] == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    deg = c.size - 1
    if deg == 0:
        return np.array([], dtype=complex)
    monic = c / c[-1]
    mat = np.zeros((deg, deg))
    if deg > 1:
        mat[1:, :-1] = np.eye(deg - 1)
    mat[:, -1] = -monic[:-1]
    return np.linalg.eigvals(mat)


def characteristic_frequencies(params: ModelParams) -> list[float]:
    """Positive real oscillation frequencies of the free theory.

    Substituting an oscillatory velocity into the homogeneous force law turns
    it into the even polynomial sum(k_i w^(2i)) = 0; the function returns the
    positive real roots w, sorted ascending (possibly empty).  Roots of the
    polynomial in z = w^2 come from companion-matrix eigenvalues; a root is
    accepted as real when |Im z| <= 1e-10 |z|.
    """
    roots = companion_roots(params.k)
    freqs = []
    for z in roots:
        if abs(z.imag) <= 1e-10 * abs(z) and z.real > 0:
            freqs.append(float(np.sqrt(z.real)))
    return sorted(freqs)

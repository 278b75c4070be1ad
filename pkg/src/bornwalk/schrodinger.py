"""
Closed-form evolution of a two-level system with a real Hamiltonian

    H = [[alpha + delta, beta], [beta, alpha - delta]]

together with a fixed-step RK4 integrator used as an independent check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Tuple

from .process import InitialState

__all__ = [
    "Hamiltonian",
    "WaveFunction",
    "evolve",
    "probabilities",
    "period",
    "amplitude_bounds",
    "rk4_evolve",
]


@dataclass(frozen=True)
class Hamiltonian:
    alpha: float
    beta: float
    delta: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        if self.beta == 0 and self.delta == 0:
            raise ValueError("beta and delta cannot both be zero")

    @property
    def omega(self) -> float:
        """Level splitting half-width ``sqrt(beta**2 + delta**2)``."""
        return math.hypot(self.beta, self.delta)

    def matrix(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        a, b, d = self.alpha, self.beta, self.delta
        return ((a + d, b), (b, a - d))

    def theta(self, t: float) -> float:
        return t * self.omega / self.hbar


@dataclass(frozen=True)
class WaveFunction:
    psi1: complex
    psi2: complex
    t: float

    @property
    def probabilities(self) -> Tuple[float, float]:
        return abs(self.psi1) ** 2, abs(self.psi2) ** 2

    @property
    def norm_squared(self) -> float:
        p1, p2 = self.probabilities
        return p1 + p2


def evolve(H: Hamiltonian, c: InitialState, t: float) -> WaveFunction:
    """Apply the propagator ``exp(-i H t / hbar)`` to the normalized initial state."""
    w = H.omega
    th = H.theta(t)
    cos, sin = math.cos(th), math.sin(th)
    phase = cmath.exp(-1j * H.alpha * t / H.hbar)
    u11 = phase * complex(cos, -H.delta / w * sin)
    u12 = phase * complex(0.0, -H.beta / w * sin)
    u22 = phase * complex(cos, H.delta / w * sin)
    r = c.norm
    c1, c2 = c.c1 / r, c.c2 / r
    return WaveFunction(u11 * c1 + u12 * c2, u12 * c1 + u22 * c2, t)


def probabilities(H: Hamiltonian, c: InitialState, t: float) -> Tuple[float, float]:
    """
    Occupation probabilities at time ``t``.

    ``P1 = c1**2 cos**2(theta) + (c1 delta + c2 beta)**2 sin**2(theta) / w**2``
    and ``P2`` likewise with ``(c1 beta - c2 delta)``, for normalized ``c``
    and ``w = sqrt(beta**2 + delta**2)``. Independent of ``alpha``.
    """
    w2 = H.beta ** 2 + H.delta ** 2
    r2 = c.c1 ** 2 + c.c2 ** 2
    th = H.theta(t)
    cos2, sin2 = math.cos(th) ** 2, math.sin(th) ** 2
    p1 = (c.c1 ** 2 * cos2 + sin2 * (c.c1 * H.delta + c.c2 * H.beta) ** 2 / w2) / r2
    p2 = (c.c2 ** 2 * cos2 + sin2 * (c.c1 * H.beta - c.c2 * H.delta) ** 2 / w2) / r2
    return p1, p2


def period(H: Hamiltonian) -> float:
    """Oscillation period of the probabilities, ``pi hbar / sqrt(beta**2 + delta**2)``."""
    return math.pi * H.hbar / H.omega


def amplitude_bounds(H: Hamiltonian, c: InitialState) -> Tuple[float, float]:
    """Values of ``P1`` at ``theta = 0`` and ``theta = pi/2``; these are its extremes."""
    quarter = 0.5 * period(H)
    return probabilities(H, c, 0.0)[0], probabilities(H, c, quarter)[0]


def rk4_evolve(
    H: Hamiltonian, c: InitialState, t_max: float, dt: float
) -> Iterator[Tuple[float, complex, complex]]:
    """
    Integrate ``i hbar dpsi/dt = H psi`` with classical fourth-order
    Runge-Kutta at fixed step ``dt``. Yields ``(t, psi1, psi2)`` starting at
    ``t = 0`` and ending at the last step not beyond ``t_max``.

    Knows nothing about the closed form; it is the oracle for ``evolve``.
    """
    (h11, h12), (h21, h22) = H.matrix()
    k = -1j / H.hbar

    def rhs(x1, x2):
        return k * (h11 * x1 + h12 * x2), k * (h21 * x1 + h22 * x2)

    r = c.norm
    x1, x2 = complex(c.c1 / r), complex(c.c2 / r)
    steps = int(math.floor(t_max / dt + 1e-9))
    yield 0.0, x1, x2
    for i in range(1, steps + 1):
        a1, a2 = rhs(x1, x2)
        b1, b2 = rhs(x1 + 0.5 * dt * a1, x2 + 0.5 * dt * a2)
        c1_, c2_ = rhs(x1 + 0.5 * dt * b1, x2 + 0.5 * dt * b2)
        d1, d2 = rhs(x1 + dt * c1_, x2 + dt * c2_)
        x1 = x1 + dt / 6 * (a1 + 2 * b1 + 2 * c1_ + d1)
        x2 = x2 + dt / 6 * (a2 + 2 * b2 + 2 * c2_ + d2)
        yield i * dt, x1, x2

"""
Links between the signed-rate process and two-level quantum dynamics.

The transition matrix ``K = lam * (H - alpha I)`` reproduces the Schrödinger
probabilities at multiples of half a period. After rescaling to
``[[K, L], [L, -K]]`` with ``K**2 + L**2 = 1`` the matrix is an orthogonal
reflection, so its powers alternate between the identity and itself, and a
continuous wave function interpolates the discrete steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NoEquivalentHamiltonian
from .process import STRUCTURAL_TOL, InitialState, TransitionMatrix
from .schrodinger import Hamiltonian, WaveFunction

__all__ = [
    "NormalizedTransition",
    "oscillation_condition",
    "transition_from_hamiltonian",
    "hamiltonian_from_transition",
    "normalize_unitary",
    "normalized_from_hamiltonian",
    "power_closed_form",
    "interpolating_wavefunction",
    "coin_probabilities",
]


@dataclass(frozen=True)
class NormalizedTransition:
    """The reflection ``[[K, L], [L, -K]]`` with ``K**2 + L**2 = 1``."""

    K: float
    L: float

    def __post_init__(self):
        if abs(self.K * self.K + self.L * self.L - 1.0) > STRUCTURAL_TOL:
            raise ValueError(f"K**2 + L**2 must be 1, got {self.K**2 + self.L**2!r}")

    def matrix(self) -> TransitionMatrix:
        return TransitionMatrix(self.K, self.L, self.L, -self.K)

    def to_array(self) -> np.ndarray:
        return np.array([[self.K, self.L], [self.L, -self.K]], dtype=float)

    def apply(self, c1: float, c2: float) -> Tuple[float, float]:
        return self.K * c1 + self.L * c2, self.L * c1 - self.K * c2


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= STRUCTURAL_TOL


def oscillation_condition(K: TransitionMatrix) -> bool:
    """
    Necessary condition for sustained oscillation under the quadratic rule:
    ``k11 = -k22`` and ``k22**2 + k12 k21 != 0``. Matrices with ``k21 = 0``
    are excluded because they pin ``P1 = 1`` when starting from state 1.
    """
    if abs(K.k21) <= STRUCTURAL_TOL:
        return False
    return _close(K.k11, -K.k22) and abs(K.k22 ** 2 + K.k12 * K.k21) > STRUCTURAL_TOL


def transition_from_hamiltonian(H: Hamiltonian, lam: float = 1.0) -> TransitionMatrix:
    """``lam * (H - alpha I)``: ``k11 = -k22 = lam delta``, ``k12 = k21 = lam beta``."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    return TransitionMatrix(lam * H.delta, lam * H.beta, lam * H.beta, -lam * H.delta)


def _require_hamiltonian_form(K: TransitionMatrix) -> None:
    if not _close(K.k12, K.k21):
        raise NoEquivalentHamiltonian(f"no equivalent Hamiltonian: k12 != k21 in {K}")
    if not _close(K.k11, -K.k22):
        raise NoEquivalentHamiltonian(f"no equivalent Hamiltonian: k11 != -k22 in {K}")
    if K.k11 ** 2 + K.k12 ** 2 <= STRUCTURAL_TOL ** 2:
        raise NoEquivalentHamiltonian("no equivalent Hamiltonian: zero matrix")


def hamiltonian_from_transition(
    K: TransitionMatrix, lam: float = 1.0, alpha: float = 0.0, hbar: float = 1.0
) -> Hamiltonian:
    """Invert ``transition_from_hamiltonian``: ``beta = k12/lam``, ``delta = k11/lam``."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    _require_hamiltonian_form(K)
    return Hamiltonian(alpha, K.k12 / lam, K.k11 / lam, hbar)


def normalize_unitary(K: TransitionMatrix) -> NormalizedTransition:
    """Rescale a symmetric, traceless matrix so that ``K**2 + L**2 = 1``."""
    _require_hamiltonian_form(K)
    if abs(K.k11 ** 2 + K.k12 ** 2 - 1.0) <= STRUCTURAL_TOL:
        return NormalizedTransition(K.k11, K.k12)
    r = math.hypot(K.k11, K.k12)
    return NormalizedTransition(K.k11 / r, K.k12 / r)


def normalized_from_hamiltonian(H: Hamiltonian) -> NormalizedTransition:
    """
    Normalized reflection whose interpolating wave function equals the
    Schrödinger solution at ``alpha = 0``: ``(K, L) = -(delta, beta) / w``.
    """
    w = H.omega
    return NormalizedTransition(-H.delta / w, -H.beta / w)


def power_closed_form(N: NormalizedTransition, n: int) -> np.ndarray:
    """``N**n``: the identity for even ``n``, ``N`` itself for odd ``n``."""
    if n < 0:
        raise ValueError(f"power must be >= 0, got {n}")
    if n % 2 == 0:
        return np.eye(2)
    return N.to_array()


def interpolating_wavefunction(
    N: NormalizedTransition, c: InitialState, t: float, tau: float
) -> WaveFunction:
    """
    ``psi(t) = X(t) c - i X(t + tau) N c`` with ``X(t) = cos(pi t / (2 tau))``.

    ``|psi_i(n tau)|**2`` equals the quadratic-rule probability after ``n``
    steps, and the norm is 1 for all ``t``.
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if abs(c.c1 ** 2 + c.c2 ** 2 - 1.0) > STRUCTURAL_TOL:
        raise ValueError("initial state must be normalized (c1**2 + c2**2 = 1)")
    x_now = math.cos(math.pi * t / (2 * tau))
    x_next = math.cos(math.pi * (t + tau) / (2 * tau))
    k1, k2 = N.apply(c.c1, c.c2)
    return WaveFunction(
        complex(x_now * c.c1, -x_next * k1),
        complex(x_now * c.c2, -x_next * k2),
        t,
    )


def coin_probabilities(phi: float) -> Tuple[float, float]:
    """Heads-up and tails-up probabilities for impact angle ``phi``."""
    half = 0.5 * phi
    return math.cos(half) ** 2, math.sin(half) ** 2

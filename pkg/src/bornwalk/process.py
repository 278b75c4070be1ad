"""
Signal propagation on the layered two-state transition graph.

A transition matrix ``K`` holds the rates ``k_ij`` for the transition
``j -> i``. Starting from an initial vector ``(c1, c2)`` the signal at step
``n`` is ``K**n @ (c1, c2)``. The classical rule turns a nonnegative signal
into probabilities by normalizing it; the quadratic (Born) rule normalizes
its square and therefore accepts signed rates.

Everything here is plain Python arithmetic: integer inputs stay integers,
so integer-valued matrices propagate exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import UnclassifiedDynamicsError

__all__ = [
    "STRUCTURAL_TOL",
    "TransitionMatrix",
    "SignalVector",
    "InitialState",
    "DynamicsClass",
    "propagate_step",
    "propagate_n",
    "classical_probability",
    "born_probability",
    "stationary_probability",
    "is_markov",
    "markov_propagate",
    "classify_dynamics",
]

# absolute tolerance for equality tests on user-given rates
STRUCTURAL_TOL = 1e-12

Number = Union[int, float]


@dataclass(frozen=True)
class TransitionMatrix:
    """Rates ``k_ij`` of the transition ``j -> i``; entries may be negative."""

    k11: Number
    k12: Number
    k21: Number
    k22: Number

    def __post_init__(self):
        for name in ("k11", "k12", "k21", "k22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)!r}")

    @classmethod
    def from_rows(cls, rows) -> "TransitionMatrix":
        (k11, k12), (k21, k22) = rows
        return cls(k11, k12, k21, k22)

    @property
    def det(self) -> Number:
        return self.k11 * self.k22 - self.k12 * self.k21

    @property
    def column_sums(self) -> Tuple[Number, Number]:
        return self.k11 + self.k21, self.k12 + self.k22

    def entries(self) -> Tuple[Number, Number, Number, Number]:
        return self.k11, self.k12, self.k21, self.k22

    def to_array(self) -> np.ndarray:
        return np.array([[self.k11, self.k12], [self.k21, self.k22]], dtype=float)

    def scaled(self, factor: Number) -> "TransitionMatrix":
        return TransitionMatrix(*(factor * k for k in self.entries()))

    def is_nonnegative(self) -> bool:
        return all(k >= 0 for k in self.entries())


@dataclass(frozen=True)
class InitialState:
    """Initial multiplicities (classical) or amplitudes (quantum)."""

    c1: Number
    c2: Number

    def __post_init__(self):
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise ValueError("initial state must be finite")
        if self.c1 * self.c1 + self.c2 * self.c2 <= 0:
            raise ValueError("initial state must not be the zero vector")

    @property
    def norm(self) -> float:
        return math.hypot(self.c1, self.c2)

    def normalized(self) -> "InitialState":
        r = self.norm
        return InitialState(self.c1 / r, self.c2 / r)


@dataclass(frozen=True)
class SignalVector:
    """Signal ``(a1, a2)`` arriving at step ``n``; ``tau`` is the step duration."""

    a1: Number
    a2: Number
    n: int = 0
    tau: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"step index must be >= 0, got {self.n}")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    @property
    def t(self) -> float:
        return self.n * self.tau

    def as_tuple(self) -> Tuple[Number, Number]:
        return self.a1, self.a2


class DynamicsClass(enum.Enum):
    IMMEDIATE_STATIONARY = "ImmediateStationary"
    MONOTONE_STATIONARY = "MonotoneStationary"
    DAMPED_OSCILLATION = "DampedOscillation"
    SUSTAINED_OSCILLATION = "SustainedOscillation"


def _close(x: Number, y: Number) -> bool:
    return abs(x - y) <= STRUCTURAL_TOL


def _as_signal(a0) -> SignalVector:
    if isinstance(a0, SignalVector):
        return a0
    if isinstance(a0, InitialState):
        return SignalVector(a0.c1, a0.c2, 0)
    c1, c2 = a0
    InitialState(c1, c2)
    return SignalVector(c1, c2, 0)


def _require_csp(K: TransitionMatrix) -> None:
    if not K.is_nonnegative():
        raise ValueError(f"classical process needs nonnegative rates, got {K}")


def propagate_step(K: TransitionMatrix, a: SignalVector) -> SignalVector:
    """One transition: ``a_n = K a_{n-1}``."""
    return SignalVector(
        K.k11 * a.a1 + K.k12 * a.a2,
        K.k21 * a.a1 + K.k22 * a.a2,
        a.n + 1,
        a.tau,
    )


def propagate_n(K: TransitionMatrix, a0, n: int) -> SignalVector:
    """
    Apply ``propagate_step`` ``n`` times.

    Parameters
    ----------
    K : TransitionMatrix
    a0 : InitialState, SignalVector or pair
        Starting signal. A ``SignalVector`` keeps its step index and tau, so
        propagation can be resumed.
    n : int
        Number of transitions, ``n >= 0``.
    """
    if n < 0:
        raise ValueError(f"number of steps must be >= 0, got {n}")
    a = _as_signal(a0)
    for _ in range(n):
        a = propagate_step(K, a)
    return a


def classical_probability(a: SignalVector) -> Tuple[float, float]:
    """Probabilities proportional to the signal itself."""
    a1, a2 = a.as_tuple() if isinstance(a, SignalVector) else a
    if a1 < 0 or a2 < 0:
        raise ValueError(
            f"classical rule needs nonnegative signals, got ({a1}, {a2}); "
            "use born_probability for signed signals"
        )
    total = a1 + a2
    if total <= 0:
        raise ValueError("classical rule needs a positive total signal")
    return a1 / total, a2 / total


def born_probability(a: SignalVector) -> Tuple[float, float]:
    """Probabilities proportional to the squared signal."""
    a1, a2 = a.as_tuple() if isinstance(a, SignalVector) else a
    s1, s2 = a1 * a1, a2 * a2
    total = s1 + s2
    if total <= 0:
        raise ValueError("Born rule is undefined for the zero signal")
    return s1 / total, s2 / total


def _is_sustained(K: TransitionMatrix) -> bool:
    return (
        _close(K.k11, 0)
        and _close(K.k22, 0)
        and K.k12 > STRUCTURAL_TOL
        and K.k21 > STRUCTURAL_TOL
    )


def _iterate_classical(K: TransitionMatrix, p1: float, max_steps: int = 100_000) -> float:
    p = (p1, 1.0 - p1)
    for _ in range(max_steps):
        nxt = classical_probability((K.k11 * p[0] + K.k12 * p[1], K.k21 * p[0] + K.k22 * p[1]))
        if abs(nxt[0] - p[0]) <= 1e-15:
            return nxt[0]
        p = nxt
    return p[0]


def stationary_probability(K: TransitionMatrix) -> Optional[Tuple[float, float]]:
    """
    Fixed point of the classical probability map, or ``None`` when the
    process oscillates forever (``k11 = k22 = 0``).

    Setting ``P = P'`` in the one-step probability update gives the
    quadratic ``(s1 - s2) P**2 + (s2 - k11 + k12) P - k12 = 0`` with column
    sums ``s1``, ``s2``. The root in ``[0, 1]`` is returned; when two roots
    qualify, the one reached by iterating from ``P1 = 1`` wins.
    """
    _require_csp(K)
    s1, s2 = K.column_sums
    if s1 <= 0 or s2 <= 0:
        raise ValueError(f"transition matrix has a zero column: {K}")
    if _is_sustained(K):
        return None

    a = s1 - s2
    b = s2 - K.k11 + K.k12
    c = -K.k12
    if abs(a) <= STRUCTURAL_TOL:
        if abs(b) <= STRUCTURAL_TOL:
            # every P is a fixed point (identity-like map); the walk stays put
            roots = [_iterate_classical(K, 1.0)]
        else:
            roots = [-c / b]
    else:
        disc = b * b - 4 * a * c
        disc = max(disc, 0.0)
        sq = math.sqrt(disc)
        # numerically stable pair of roots
        q = -0.5 * (b + math.copysign(sq, b))
        roots = [q / a, c / q] if q != 0 else [0.0]

    eps = 1e-12
    inside = sorted({min(max(r, 0.0), 1.0) for r in roots if -eps <= r <= 1 + eps})
    if not inside:
        raise ArithmeticError(f"no stationary root in [0, 1] for {K}")
    if len(inside) == 1 or inside[-1] - inside[0] <= 1e-9:
        p1 = inside[0]
    else:
        limit = _iterate_classical(K, 1.0)
        p1 = min(inside, key=lambda r: abs(r - limit))
    return p1, 1.0 - p1


def is_markov(K: TransitionMatrix) -> bool:
    """True when the rates are column-normalized transition probabilities."""
    s1, s2 = K.column_sums
    return K.is_nonnegative() and _close(s1, 1) and _close(s2, 1)


def markov_propagate(K: TransitionMatrix, P0: Tuple[float, float], n: int) -> Tuple[float, float]:
    """Propagate a probability vector with a column-stochastic matrix, ``K**n P0``."""
    if not is_markov(K):
        raise ValueError(f"not a Markov matrix (columns must sum to 1): {K}")
    if n < 0:
        raise ValueError(f"number of steps must be >= 0, got {n}")
    p1, p2 = P0
    if p1 < 0 or p2 < 0 or abs(p1 + p2 - 1) > STRUCTURAL_TOL:
        raise ValueError(f"P0 must be a probability vector, got {P0}")
    out = np.linalg.matrix_power(K.to_array(), n) @ np.array([p1, p2], dtype=float)
    return float(out[0]), float(out[1])


def classify_dynamics(K: TransitionMatrix) -> DynamicsClass:
    """Dynamics regime of the classical process with nonnegative rates."""
    _require_csp(K)
    if all(k == 0 for k in K.entries()):
        raise ValueError("transition matrix is all zeros")
    if _close(K.k11, K.k21) and _close(K.k12, K.k22):
        return DynamicsClass.IMMEDIATE_STATIONARY
    if _is_sustained(K):
        return DynamicsClass.SUSTAINED_OSCILLATION
    det = K.det
    if det > STRUCTURAL_TOL:
        return DynamicsClass.MONOTONE_STATIONARY
    if det < -STRUCTURAL_TOL:
        return DynamicsClass.DAMPED_OSCILLATION
    raise UnclassifiedDynamicsError(f"unclassified dynamics: det(K) = {det} for {K}")

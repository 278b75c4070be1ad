"""
Exhaustive enumeration of signed paths on the two-state layered graph.

Each rate ``k_ij`` is read as ``|k_ij|`` parallel unit channels from state
``j`` to state ``i``, every one of them flipping the sign of the signal when
``k_ij < 0``. A path's sign is the product of its channel signs. Counting
positive and negative paths separately gives exact integers ``(a+, a-)``
whose difference must reproduce the propagated signal, and whose squared
difference is the net number of recombination events.

This is deliberately brute force. It never forms a matrix power.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import OracleBudgetExceeded
from .process import TransitionMatrix, propagate_n

__all__ = [
    "DEFAULT_BUDGET",
    "ChannelMatrix",
    "PathCount",
    "OracleReport",
    "enumerate_paths",
    "signal_from_counts",
    "born_number",
    "verify_against_propagation",
]

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class ChannelMatrix:
    """Channel counts ``m_ij >= 0`` with signs ``s_ij`` in ``{+1, -1}``."""

    m11: int
    m12: int
    m21: int
    m22: int
    s11: int = 1
    s12: int = 1
    s21: int = 1
    s22: int = 1

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            m = getattr(self, name)
            if int(m) != m or m < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {m!r}")
        for name in ("s11", "s12", "s21", "s22"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")

    @classmethod
    def from_signed(cls, k11: int, k12: int, k21: int, k22: int) -> "ChannelMatrix":
        ks = (k11, k12, k21, k22)
        for k in ks:
            if int(k) != k:
                raise ValueError(f"signed rates must be integers, got {k!r}")
        return cls(*(abs(int(k)) for k in ks), *(-1 if k < 0 else 1 for k in ks))

    @classmethod
    def from_transition(cls, K: TransitionMatrix) -> "ChannelMatrix":
        return cls.from_signed(*K.entries())

    def count(self, i: int, j: int) -> int:
        """Number of channels ``j -> i``."""
        return getattr(self, f"m{i}{j}")

    def sign(self, i: int, j: int) -> int:
        return getattr(self, f"s{i}{j}")

    def signed(self) -> TransitionMatrix:
        return TransitionMatrix(
            self.s11 * self.m11, self.s12 * self.m12, self.s21 * self.m21, self.s22 * self.m22
        )


@dataclass(frozen=True)
class PathCount:
    a_plus: int
    a_minus: int
    state: int = 1
    n: int = 0

    def __post_init__(self):
        if self.a_plus < 0 or self.a_minus < 0:
            raise ValueError("path counts must be nonnegative")


def _check_initial(c: Tuple[int, int]) -> Tuple[int, int]:
    c1, c2 = c
    if int(c1) != c1 or int(c2) != c2 or c1 < 0 or c2 < 0:
        raise ValueError(f"initial multiplicities must be nonnegative integers, got {c}")
    if c1 == 0 and c2 == 0:
        raise ValueError("initial multiplicities cannot both be zero")
    return int(c1), int(c2)


def _path_budget(C: ChannelMatrix, c: Tuple[int, int], n: int) -> int:
    # weighted number of paths of length n, summed over both end states
    v = list(c)
    for _ in range(n):
        v = [
            C.m11 * v[0] + C.m12 * v[1],
            C.m21 * v[0] + C.m22 * v[1],
        ]
    return sum(v)


def enumerate_paths(
    C: ChannelMatrix,
    c: Tuple[int, int],
    n: int,
    target: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> PathCount:
    """
    Count positive and negative paths of ``n`` transitions ending at ``target``.

    Paths starting at state ``j`` carry multiplicity ``c_j``. Distinct
    parallel channels are distinct paths; they are counted through the
    product of channel counts along each state sequence.

    Raises
    ------
    OracleBudgetExceeded
        If either the number of state sequences or the weighted number of
        paths exceeds ``budget``.
    """
    if n < 0:
        raise ValueError(f"path length must be >= 0, got {n}")
    if target not in (1, 2):
        raise ValueError(f"target must be 1 or 2, got {target!r}")
    c = _check_initial(c)
    if n == 0:
        return PathCount(c[target - 1], 0, target, 0)

    if 2**n > budget or _path_budget(C, c, n) > budget:
        raise OracleBudgetExceeded(
            f"enumerating paths of length {n} exceeds the budget of {budget}"
        )

    plus = minus = 0
    for start in (1, 2):
        mult = c[start - 1]
        if mult == 0:
            continue
        for middle in itertools.product((1, 2), repeat=n - 1):
            weight, sign = mult, 1
            prev = start
            for state in (*middle, target):
                m = C.count(state, prev)
                if m == 0:
                    weight = 0
                    break
                weight *= m
                sign *= C.sign(state, prev)
                prev = state
            if sign > 0:
                plus += weight
            else:
                minus += weight
    return PathCount(plus, minus, target, n)


def signal_from_counts(p: PathCount) -> int:
    """Net signal ``a+ - a-``."""
    return p.a_plus - p.a_minus


def born_number(p: PathCount) -> int:
    """Positive minus negative recombinations, ``a+**2 + a-**2 - 2 a+ a-``."""
    positive = p.a_plus**2 + p.a_minus**2
    negative = 2 * p.a_plus * p.a_minus
    return positive - negative


@dataclass
class OracleReport:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None
    rows: List[dict] = field(default_factory=list)

    def __bool__(self):
        return self.passed


def verify_against_propagation(
    C: ChannelMatrix,
    c: Tuple[int, int],
    n_max: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> OracleReport:
    """
    Compare enumerated signals with matrix propagation for every ``n <= n_max``
    and both end states. Stops at the first mismatch.
    """
    c = _check_initial(c)
    K = C.signed()
    rows = []
    checked = 0
    for n in range(n_max + 1):
        a = propagate_n(K, c, n).as_tuple()
        for target in (1, 2):
            p = enumerate_paths(C, c, n, target, budget=budget)
            row = {
                "n": n,
                "state": target,
                "a_plus": p.a_plus,
                "a_minus": p.a_minus,
                "signal": signal_from_counts(p),
                "born": born_number(p),
                "propagated": a[target - 1],
            }
            rows.append(row)
            checked += 1
            if row["signal"] != row["propagated"] or row["born"] != row["propagated"] ** 2:
                return OracleReport(False, checked, row, rows)
    return OracleReport(True, checked, None, rows)

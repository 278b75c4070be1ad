"""
Event matrices of pairwise qubit recombinations and their rotation average.

At an observation reached by ``a+`` positive and ``a-`` negative paths the
``N = a+ + a-`` transmitted qubits are paired in all possible ways. Along
each axis the qubits are ordered positives first, so at rotation 0 the
entry ``(i, j)`` is ``s_i * s_j`` with ``s = (+1,)*a+ + (-1,)*a-``. The other
three states of the walker are 90 degree rotations of that matrix.
Averaging the four rotations leaves a central ``|a+ - a-|`` square block of
ones (the Born ensemble) and zeros everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import EnsembleFalsified

__all__ = [
    "EventMatrix",
    "BornEnsemble",
    "sign_axis",
    "build_event_matrix",
    "rotate",
    "rotations",
    "axis_assignment_matrices",
    "mean_over_rotations",
    "classify_cells",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EventMatrix:
    a_plus: int
    a_minus: int
    rotation: int
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.a_plus + self.a_minus

    @property
    def total(self) -> int:
        return int(self.entries.sum())

    def __eq__(self, other):
        if not isinstance(other, EventMatrix):
            return NotImplemented
        return (
            (self.a_plus, self.a_minus, self.rotation) == (other.a_plus, other.a_minus, other.rotation)
            and np.array_equal(self.entries, other.entries)
        )


@dataclass(frozen=True, eq=False)
class BornEnsemble:
    size: int
    mean_entries: np.ndarray
    born_count: int


def _check_counts(a_plus: int, a_minus: int) -> None:
    if a_plus < 0 or a_minus < 0 or int(a_plus) != a_plus or int(a_minus) != a_minus:
        raise ValueError(f"counts must be nonnegative integers, got ({a_plus}, {a_minus})")
    if a_plus + a_minus < 1:
        raise ValueError("event matrix needs at least one qubit (a+ + a- >= 1)")


def sign_axis(a_plus: int, a_minus: int) -> np.ndarray:
    """Path signs along one axis in canonical order: positives, then negatives."""
    return np.array([1] * a_plus + [-1] * a_minus, dtype=np.int64)


def build_event_matrix(a_plus: int, a_minus: int, rotation: int = 0) -> EventMatrix:
    """Event matrix at the given rotation index (multiples of 90 degrees)."""
    _check_counts(a_plus, a_minus)
    if rotation not in (0, 1, 2, 3):
        raise ValueError(f"rotation must be 0, 1, 2 or 3, got {rotation!r}")
    s = sign_axis(a_plus, a_minus)
    # np.rot90: out[i, j] = in[j, N-1-i]
    return EventMatrix(a_plus, a_minus, rotation, _frozen(np.rot90(np.outer(s, s), rotation)))


def rotate(E: EventMatrix) -> EventMatrix:
    return EventMatrix(E.a_plus, E.a_minus, (E.rotation + 1) % 4, _frozen(np.rot90(E.entries)))


def rotations(a_plus: int, a_minus: int) -> List[EventMatrix]:
    E = build_event_matrix(a_plus, a_minus, 0)
    out = [E]
    for _ in range(3):
        E = rotate(E)
        out.append(E)
    return out


def axis_assignment_matrices(a_plus: int, a_minus: int) -> List[np.ndarray]:
    """
    The four event matrices obtained by choosing, independently on each
    axis, whether the up-type qubits are the ``a+`` positive-path ones or
    the ``a-`` negative-path ones. Entries are +1 for equal path signs.

    Up-type qubits come first on each axis, so the two axis orderings are
    the canonical sign sequence and its reverse.
    """
    _check_counts(a_plus, a_minus)
    s = sign_axis(a_plus, a_minus)
    axes = (s, s[::-1])
    return [np.outer(row, col) for row in axes for col in axes]


def _rotation_stack(a_plus: int, a_minus: int) -> np.ndarray:
    return np.stack([E.entries for E in rotations(a_plus, a_minus)])


def mean_over_rotations(a_plus: int, a_minus: int) -> BornEnsemble:
    """
    Elementwise mean of the four rotations.

    Raises
    ------
    EnsembleFalsified
        If the mean is not {0, 1}-valued or its ones do not form the central
        square block of side ``|a+ - a-|``.
    """
    _check_counts(a_plus, a_minus)
    stack = _rotation_stack(a_plus, a_minus)
    total = stack.sum(axis=0)
    if np.any((total != 0) & (total != 4)):
        raise EnsembleFalsified(
            f"mean event matrix for (a+={a_plus}, a-={a_minus}) has entries outside {{0, 1}}"
        )
    mean = _frozen(total // 4)

    n = a_plus + a_minus
    side = abs(a_plus - a_minus)
    lo = (n - side) // 2
    expected = np.zeros((n, n), dtype=np.int64)
    expected[lo:lo + side, lo:lo + side] = 1
    if not np.array_equal(mean, expected):
        raise EnsembleFalsified(
            f"ones of the mean event matrix for (a+={a_plus}, a-={a_minus}) "
            f"are not the central {side}x{side} block"
        )
    born_count = int(mean.sum())
    if born_count != side * side:
        raise EnsembleFalsified(f"born count {born_count} != {side * side}")
    return BornEnsemble(n, mean, born_count)


def classify_cells(a_plus: int, a_minus: int) -> Tuple[int, int]:
    """
    Split cells into those equal to +1 in all four rotations and those that
    alternate (+1 in exactly two rotations, -1 in the other two).

    Returns ``(invariant_count, alternating_count)``.
    """
    _check_counts(a_plus, a_minus)
    positives = (_rotation_stack(a_plus, a_minus) == 1).sum(axis=0)
    invariant = int((positives == 4).sum())
    alternating = int((positives == 2).sum())
    if invariant + alternating != positives.size:
        raise EnsembleFalsified(
            f"(a+={a_plus}, a-={a_minus}) has cells that are neither invariant nor alternating"
        )
    return invariant, alternating

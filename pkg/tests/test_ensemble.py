import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bornwalk.ensemble import (
    axis_assignment_matrices,
    build_event_matrix,
    classify_cells,
    mean_over_rotations,
    rotate,
    rotations,
)
from bornwalk.paths import ChannelMatrix, born_number, enumerate_paths
from bornwalk.process import TransitionMatrix, propagate_n

counts = st.tuples(st.integers(0, 8), st.integers(0, 8)).filter(lambda t: sum(t) > 0)


def _rotate_by_index_map(E):
    # entry (i, j) of the next rotation is entry (j, N-1-i) of the current one
    N = len(E)
    return [[E[j][N - 1 - i] for j in range(N)] for i in range(N)]


def _cell_values(a_plus, a_minus):
    s = [1] * a_plus + [-1] * a_minus
    E = [[si * sj for sj in s] for si in s]
    out = [E]
    for _ in range(3):
        E = _rotate_by_index_map(E)
        out.append(E)
    return out


def test_fig6_event_matrix():
    E = build_event_matrix(1, 3, 0)
    expected = np.array([[1, -1, -1, -1], [-1, 1, 1, 1], [-1, 1, 1, 1], [-1, 1, 1, 1]])
    np.testing.assert_array_equal(E.entries, expected)
    assert E.total == 4 and E.size == 4


@pytest.mark.parametrize("rot", range(4))
def test_no_negative_paths(rot):
    np.testing.assert_array_equal(build_event_matrix(2, 0, rot).entries, np.ones((2, 2)))


def test_one_one_rotation():
    np.testing.assert_array_equal(build_event_matrix(1, 1, 0).entries, [[1, -1], [-1, 1]])
    np.testing.assert_array_equal(build_event_matrix(1, 1, 1).entries, [[-1, 1], [1, -1]])


def test_build_rejects():
    with pytest.raises(ValueError):
        build_event_matrix(0, 0, 0)
    with pytest.raises(ValueError):
        build_event_matrix(1, 2, 4)
    with pytest.raises(ValueError):
        build_event_matrix(-1, 2, 0)


def test_rotate_matches_index_map_and_builder():
    E = build_event_matrix(1, 3, 0)
    assert rotate(E) == build_event_matrix(1, 3, 1)
    ref = _cell_values(1, 3)
    for r, M in enumerate(rotations(1, 3)):
        np.testing.assert_array_equal(M.entries, ref[r])
        assert M.rotation == r


def test_entries_are_immutable():
    E = build_event_matrix(2, 1)
    with pytest.raises(ValueError):
        E.entries[0, 0] = 5


@given(counts, st.integers(0, 3))
def test_rotation_group(ab, rot):
    E = build_event_matrix(*ab, rot)
    R = E
    for _ in range(4):
        R = rotate(R)
    assert R == E
    assert sorted(rotate(E).entries.ravel()) == sorted(E.entries.ravel())
    assert rotate(E).total == E.total == (ab[0] - ab[1]) ** 2


@given(counts)
def test_symmetric_at_even_rotations(ab):
    for rot in (0, 2):
        M = build_event_matrix(*ab, rot).entries
        np.testing.assert_array_equal(M, M.T)


def test_mean_examples():
    ens = mean_over_rotations(1, 3)
    expected = np.zeros((4, 4), dtype=int)
    expected[1:3, 1:3] = 1
    np.testing.assert_array_equal(ens.mean_entries, expected)
    assert ens.born_count == 4
    assert mean_over_rotations(1, 1).born_count == 0
    np.testing.assert_array_equal(mean_over_rotations(1, 1).mean_entries, np.zeros((2, 2)))
    ens = mean_over_rotations(3, 0)
    np.testing.assert_array_equal(ens.mean_entries, np.ones((3, 3)))
    assert ens.born_count == 9


def test_classify_cells_examples():
    assert classify_cells(1, 3)[0] == 4
    assert classify_cells(2, 2)[0] == 0
    # exhaustive count by the index map, independent of np.rot90
    values = _cell_values(4, 1)
    invariant = sum(
        all(values[r][i][j] == 1 for r in range(4)) for i in range(5) for j in range(5)
    )
    assert invariant == 9
    assert classify_cells(4, 1) == (9, 16)


@pytest.mark.parametrize("a_plus", range(13))
def test_axis_assignments_are_the_four_rotations(a_plus):
    for a_minus in range(13 - a_plus):
        if a_plus + a_minus == 0:
            continue
        by_axes = {m.tobytes() for m in axis_assignment_matrices(a_plus, a_minus)}
        by_rot = {E.entries.tobytes() for E in rotations(a_plus, a_minus)}
        assert by_axes == by_rot


def test_cross_module_born_counts():
    for ks in [(1, -1, 1, 1), (2, -1, 1, -2), (0, 1, -1, 0), (1, 2, -2, 1)]:
        C = ChannelMatrix.from_signed(*ks)
        for n in range(7):
            a = propagate_n(TransitionMatrix(*ks), (1, 0), n).as_tuple()
            for target in (1, 2):
                p = enumerate_paths(C, (1, 0), n, target)
                if p.a_plus + p.a_minus == 0:
                    assert a[target - 1] == 0
                    continue
                ens = mean_over_rotations(p.a_plus, p.a_minus)
                assert ens.born_count == born_number(p) == a[target - 1] ** 2

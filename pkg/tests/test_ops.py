import itertools

import numpy as np
import pytest

import oracles
from staircase.errors import DimensionMismatch, InvalidDirection, NotDisjoint, NotOnSameLine
from staircase.lattice import contains, make_staircase, regular_staircase
from staircase.ops import (
    Direction,
    delta_on_union,
    delta_order_less,
    delta_specialize,
    dilate,
    line_decompose,
    line_forms,
    line_keys,
    line_through,
    sum_along_axis,
    validate_direction,
)


def _set(arr):
    return set(map(tuple, np.asarray(arr).tolist()))


@pytest.mark.parametrize("delta,level,expected", [
    ((1, -1), "strong", True),
    ((1, -2, 0), "strong", True),
    ((1, 1, -1), "strong", False),
    ((1, 1, -1), "weak", True),
    ((2, -2), "weak", False),  # not primitive
    ((1, 0), "weak", False),
    ((1, 0, 0), "strong", False),
    ((2, -3), "weak", True),
    ((2, -3), "strong", False),
    ((-3, 0, 1), "strong", True),
])
def test_validate_direction(delta, level, expected):
    assert validate_direction(delta, level) is expected


def test_direction_rejects_invalid():
    with pytest.raises(InvalidDirection):
        Direction((1, 0))
    assert Direction((1, -1)).to_json() == {"delta": [1, -1]}
    assert Direction((0, -1, 1)).pivot == 2


@pytest.mark.parametrize("delta", [(1, -1), (1, -1, -1), (2, -3), (1, -2, 0), (-3, 0, 1),
                                   (3, -2, 5, -7), (0, 1, -1, -1, 0)])
def test_line_forms_are_a_kernel_basis(delta):
    F = np.array(line_forms(delta))
    assert F.shape == (len(delta) - 1, len(delta))
    assert not (F @ np.array(delta)).any()
    # [F; delta] has determinant |delta|^2 exactly when F is a lattice basis
    M = np.vstack([F, delta]).astype(float)
    assert round(abs(np.linalg.det(M))) == sum(v * v for v in delta)


def test_line_keys_identify_lines():
    delta = (2, -3, 1)
    pts = np.array(list(itertools.product(range(5), repeat=3)))
    keys = line_keys(pts, delta)
    for i, j in itertools.combinations(range(len(pts)), 2):
        same_key = (keys[i] == keys[j]).all()
        diff = pts[i] - pts[j]
        collinear = (diff * 1 == (diff[0] // 2) * np.array(delta)).all() and diff[0] % 2 == 0
        assert same_key == collinear


def test_line_through_matches_oracle():
    for p, delta in [((2, 3, 1), (1, -1, -2)), ((0, 4), (2, -3)), ((3, 0, 0), (1, 0, -1))]:
        assert [tuple(x) for x in line_through(p, delta).tolist()] == oracles.full_line(p, delta)


def test_delta_order():
    assert delta_order_less((1, 0), (0, 1), (1, -1))
    assert not delta_order_less((0, 1), (1, 0), (1, -1))
    assert delta_order_less((2, 0, 0), (0, 2, 2), (1, -1, -1))
    assert delta_order_less((1, 0, 0), (0, 1, 1), (1, -1, -1))
    # difference (2,-1,-1) is not a multiple of the direction
    with pytest.raises(NotOnSameLine):
        delta_order_less((2, 0, 0), (0, 1, 1), (1, -1, -1))
    with pytest.raises(NotOnSameLine):
        delta_order_less((1, 0, 0), (0, 0, 1), (1, -1, -1))


def test_line_decompose_regular():
    buckets = line_decompose(regular_staircase(2, 2), (1, -1))
    members = sorted(b.members for b in buckets)
    assert members == [((0, 0),), ((1, 0), (0, 1))]


def test_line_decompose_trivial_inputs():
    assert line_decompose(np.zeros((0, 2), dtype=np.int64), (1, -1)) == []
    [bucket] = line_decompose([(2, 3)], (1, -1))
    assert bucket.members == ((2, 3),)
    assert bucket.representative == (5, 0)


def test_line_decompose_requires_valid_direction():
    with pytest.raises(InvalidDirection):
        line_decompose(regular_staircase(2, 2), (1, 0))


def test_delta_column_to_row():
    out = delta_specialize((1, -1), np.array([(0, 0), (0, 1), (0, 2)]))
    assert _set(out) == {(0, 0), (1, 0), (2, 0)}


@pytest.mark.parametrize("mu", range(1, 6))
def test_delta_fixes_regular(mu):
    R = regular_staircase(2, mu)
    assert delta_specialize((1, -1), R) == R


def test_delta_on_doubled_point():
    E = dilate(2, regular_staircase(3, 1))
    image = delta_specialize((1, -1, -1), E)
    assert len(image) == 8
    assert contains(image, regular_staircase(3, 2))
    assert set(image.points) == oracles.delta_specialize((1, -1, -1), set(E.points))


def test_delta_weak_direction_matches_oracle():
    S = {(0, 0), (0, 3), (1, 1), (4, 0), (2, 5)}
    assert _set(delta_specialize((2, -3), np.array(sorted(S)))) == \
        oracles.delta_specialize((2, -3), S)


def test_delta_invalid_direction():
    with pytest.raises(InvalidDirection):
        delta_specialize((1, 1), regular_staircase(2, 2))


def test_delta_on_union_examples():
    E = make_staircase(2, [(0, 2), (1, 1)], close=True)
    [img] = delta_on_union((1, -1), [E])
    assert _set(img) == set(delta_specialize((1, -1), E).points)
    a, b = delta_on_union((1, -1), [[(0, 0)], [(0, 1)]])
    assert _set(a) == {(0, 0)} and _set(b) == {(1, 0)}


def test_delta_on_union_requires_disjoint():
    with pytest.raises(NotDisjoint):
        delta_on_union((1, -1), [[(0, 0)], [(0, 0), (1, 0)]])


def test_delta_on_union_matches_correspondence_oracle():
    S = oracles.dilate((2, 2, 2, 2), oracles.regular(4, 1))
    delta = (1, -1, -1, -1)
    parts = [[p for p in sorted(S) if sum(p) % 3 == r] for r in range(3)]
    images = delta_on_union(delta, parts)
    corr = oracles.delta_correspondence(delta, S)
    for part, img in zip(parts, images):
        assert _set(img) == {corr[p] for p in part}


def test_sum_along_axis_stacks_points():
    R1 = regular_staircase(2, 1)
    assert sum_along_axis(1, R1, R1).points == ((0, 0), (1, 0))


def test_sum_along_axis_heights():
    S = sum_along_axis(2, regular_staircase(2, 2), regular_staircase(2, 2))
    assert oracles.heights(set(S.points), 2) == {(0,): 4, (1,): 2}
    assert len(S) == 6


def test_sum_single_is_identity():
    E = make_staircase(3, [(2, 0, 1), (0, 2, 2)], close=True)
    assert sum_along_axis(3, E) == E


def test_sum_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sum_along_axis(1, regular_staircase(2, 1), regular_staircase(3, 1))


def test_dilate_two_two():
    D = dilate((2, 2), regular_staircase(2, 2))
    assert len(D) == 12
    assert set(D.points) == {(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3),
                             (2, 0), (2, 1), (3, 0), (3, 1)}


def test_dilate_identity():
    E = make_staircase(3, [(2, 0, 1), (0, 2, 2)], close=True)
    assert dilate((1, 1, 1), E) == E


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_homothety_contains_regular(d):
    for s in range(1, 5):
        for mu in range(1, 5):
            D = dilate(s, regular_staircase(d, mu))
            assert set(D.points) == oracles.dilate((s,) * d, oracles.regular(d, mu)) \
                if s**d * mu <= 256 else True
            assert contains(D, regular_staircase(d, s * mu))


def test_dilate_along_one_axis_is_a_sum():
    E = make_staircase(3, [(1, 2, 0), (0, 0, 2)], close=True)
    assert dilate((1, 3, 1), E) == sum_along_axis(2, E, E, E)


def test_dilate_contains_corner_points():
    a = (2, 3)
    E = regular_staircase(2, 3)
    D = dilate(a, E)
    for m in E:
        assert (a[0] * (m[0] + 1) - 1, a[1] * (m[1] + 1) - 1) in D

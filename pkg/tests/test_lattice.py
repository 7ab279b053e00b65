from math import comb

import numpy as np
import pytest

import oracles
from staircase.errors import DimensionMismatch, NotDownwardClosed, ParseError
from staircase.lattice import (
    cardinality,
    contains,
    empty_staircase,
    from_heights,
    height_function,
    make_staircase,
    parse,
    regular_staircase,
    serialize,
    shell,
    slice_at,
)
from staircase.ops import dilate


def test_make_staircase_accepts_closed_input():
    E = make_staircase(2, [(0, 0), (1, 0), (0, 1)])
    assert cardinality(E) == 3
    assert E == regular_staircase(2, 2)


def test_make_staircase_closes_box_corner():
    E = make_staircase(2, [(1, 1)], close=True)
    assert E.points == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_make_staircase_reports_witness():
    with pytest.raises(NotDownwardClosed) as info:
        make_staircase(2, [(1, 0)])
    assert info.value.point == (1, 0)
    assert info.value.lower == (0, 0)


def test_make_staircase_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        make_staircase(2, [(0, 0, 0)])


def test_canonical_order_and_dedup():
    E = make_staircase(2, [(0, 1), (0, 0), (0, 1), (1, 0)])
    assert E.points == ((0, 0), (0, 1), (1, 0))


@pytest.mark.parametrize("d,m,card", [(2, 2, 3), (3, 1, 1), (3, 2, 4), (2, 3, 6), (4, 2, 5)])
def test_regular_small(d, m, card):
    R = regular_staircase(d, m)
    assert len(R) == card
    assert set(R.points) == oracles.regular(d, m)


def test_regular_simple_point():
    assert regular_staircase(3, 1).points == ((0, 0, 0),)


@pytest.mark.parametrize("d", range(1, 7))
def test_regular_cardinality_binomial(d):
    assert len(regular_staircase(d, 0)) == 0
    for m in range(1, 11):
        assert len(regular_staircase(d, m)) == comb(m - 1 + d, d)


def test_empty_cardinality():
    assert cardinality(empty_staircase(3)) == 0


def test_contains():
    R2, R3 = regular_staircase(2, 2), regular_staircase(2, 3)
    assert contains(R3, R2)
    assert not contains(R2, R3)
    assert contains(R3, R3)
    with pytest.raises(DimensionMismatch):
        contains(R3, regular_staircase(3, 1))


def test_height_function_scan():
    h = height_function(regular_staircase(2, 2), 1)
    assert h((0,)) == 2 and h((1,)) == 1 and h((2,)) == 0
    assert h.total() == 3


def test_height_function_simple_point():
    h = height_function(regular_staircase(3, 1), 2)
    assert h.support == {(0, 0): 1}


def test_height_function_empty():
    assert height_function(empty_staircase(2), 1).support == {}


def test_height_function_matches_oracle_and_rebuilds():
    E = make_staircase(3, [(2, 1, 0), (0, 3, 1), (1, 0, 2)], close=True)
    for axis in (1, 2, 3):
        h = height_function(E, axis)
        assert h.support == oracles.heights(set(E.points), axis)
        assert h.total() == len(E)
        assert h.is_monotone()
        assert from_heights(3, axis, h.support) == E


def test_slice_of_cube_is_lower_cube():
    cube = dilate(3, regular_staircase(3, 1))
    assert slice_at(cube, 2) == dilate(3, regular_staircase(2, 1))


def test_slice_of_regular():
    assert slice_at(regular_staircase(2, 3), 1) == regular_staircase(1, 2)


def test_slice_beyond_top_is_empty():
    assert len(slice_at(regular_staircase(3, 3), 3)) == 0


def test_slices_are_nested():
    E = dilate((2, 1, 3), regular_staircase(3, 3))
    for i in range(6):
        assert contains(slice_at(E, i), slice_at(E, i + 1))


def test_shell_points_have_fixed_sum():
    S = shell(3, 4)
    assert len(S) == comb(6, 2)
    assert (S.sum(axis=1) == 4).all()


def test_serialize_exact_bytes():
    assert serialize(regular_staircase(2, 1)) == '{"dim":2,"points":[[0,0]]}'
    assert serialize(empty_staircase(2)) == '{"dim":2,"points":[]}'


def test_parse_round_trip():
    E = make_staircase(3, [(2, 1, 0), (0, 3, 1)], close=True)
    text = serialize(E)
    assert parse(text) == E
    assert serialize(parse(text)) == text


@pytest.mark.parametrize("text", [
    '{"dim":2,"points":[[0,0]',
    '{"dim":2}',
    '{"dim":2,"points":[[0,0,0]]}',
    '{"dim":2,"points":[[-1,0]]}',
    '[1,2]',
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse('{"dim":2,\n "points": [[0,0],]}')
    assert info.value.line == 2


def test_parse_rejects_open_set():
    with pytest.raises(NotDownwardClosed):
        parse('{"dim":2,"points":[[0,1]]}')


def test_staircase_is_immutable():
    E = regular_staircase(2, 3)
    with pytest.raises(ValueError):
        E.array[0, 0] = 5
    assert (0, 0) in E and (3, 0) not in E
    assert hash(E) == hash(regular_staircase(2, 3))


def test_large_coordinates_membership_fallback():
    # coordinates large enough to overflow the int64 packing in dim 8
    far = (300,) + (0,) * 7
    E = make_staircase(8, np.array([far]), close=True)
    assert len(E) == 301
    assert far in E

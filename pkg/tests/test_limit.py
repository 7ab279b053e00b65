import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from staircase.collision import strong_directions
from staircase.errors import EmptyLine, InvalidDirection
from staircase.lattice import make_staircase, regular_staircase
from staircase.limit import (
    LineLimitProblem,
    bareiss_det,
    binomial_matrix,
    build_line_problem,
    char_p_probe,
    grading_forms,
    rref_pivots,
    vandermonde_over_factorials,
    verify_limit_ideal,
    verify_line_limit,
)
from staircase.ops import delta_specialize, dilate, line_keys

COLUMN = make_staircase(2, [(0, 2)], close=True)


@pytest.mark.parametrize("delta", [(1, -1), (1, -1, -1), (-3, 0, 1), (1, -2, 0, -1)])
def test_grading_forms(delta):
    g = grading_forms(delta)
    assert len(g.forms) == len(delta) - 1
    assert all(v == 0 for v in g.degree(delta))
    assert np.linalg.matrix_rank(np.array(g.forms)) == len(delta) - 1


def test_grading_forms_diagonal():
    assert grading_forms((1, -1)).forms == ((1, 1),)
    assert grading_forms((1, -1)).degree((2, 3)) == (5,)


def test_grading_forms_degenerate():
    with pytest.raises(InvalidDirection):
        grading_forms((1, 0))


def test_build_line_problem_column_of_three():
    p = build_line_problem(COLUMN, (1, -1), (2,))
    assert p.line == ((2, 0), (1, 1), (0, 2))
    assert (p.k, p.l) == (3, 2)
    assert p.alphas == (2, 1)
    assert p.matrix == [[1, 2, 1], [1, 1, 0]]


def test_build_line_problem_lines_without_generators():
    p = build_line_problem(regular_staircase(2, 3), (1, -1), (1,))
    assert (p.k, p.l) == (2, 0)
    assert p.matrix == []


def test_build_line_problem_single_point_line():
    p = build_line_problem(regular_staircase(2, 3), (1, -1), (0,))
    assert (p.k, p.l) == (1, 0)
    key = line_keys(np.array([[0, 1]]), (1, -2))[0]
    p = build_line_problem(regular_staircase(2, 1), (1, -2), key)
    assert p.line == ((0, 1),) and p.l == 1
    assert verify_line_limit(p).passed


def test_build_line_problem_empty_line():
    with pytest.raises(EmptyLine):
        build_line_problem(COLUMN, (1, -1), (-1,))


def test_verify_line_limit_column_of_three():
    r = verify_line_limit(build_line_problem(COLUMN, (1, -1), (2,)))
    assert r.det_q == -1
    assert set(r.limit) == {(1, 1), (0, 2)}
    assert r.passed and r.identity_block
    assert r.to_record() == {"line_key": [2], "k": 3, "l": 2, "detQ": "-1", "pass": True}


def test_verify_line_limit_no_generators():
    p = LineLimitProblem(key=(0,), line=((1, 0), (0, 1)), generators=(), alphas=(),
                         specialized=((1, 0), (0, 1)))
    r = verify_line_limit(p)
    assert r.passed and r.limit == () and r.det_q == 1


def test_verify_line_limit_whole_line():
    line = ((3, 0), (2, 1), (1, 2), (0, 3))
    p = LineLimitProblem(key=(3,), line=line, generators=line, alphas=(3, 2, 1, 0))
    r = verify_line_limit(p)
    assert r.passed and set(r.limit) == set(line)


def test_verify_line_limit_wrong_specialization_fails():
    p = LineLimitProblem(key=(2,), line=((2, 0), (1, 1), (0, 2)), generators=((2, 0), (1, 1)),
                         alphas=(2, 1), specialized=((0, 2),))
    assert not verify_line_limit(p).passed


@pytest.mark.parametrize("mu", range(1, 5))
def test_limit_of_regular_is_itself(mu):
    R = regular_staircase(2, mu)
    assert delta_specialize((1, -1), R) == R
    rep = verify_limit_ideal(R, (1, -1))
    assert rep.passed and rep.to_record()["nonzero_detQ"]


def test_limit_of_doubled_point():
    rep = verify_limit_ideal(dilate(2, regular_staircase(3, 1)), (1, -1, -1))
    assert rep.passed
    rec = rep.to_record()
    assert rec["card"] == 8 and rec["d"] == 3 and rec["status"] == "pass"


def test_limit_of_column():
    assert verify_limit_ideal(COLUMN, (1, -1)).passed


def test_limit_rejects_weak_direction():
    with pytest.raises(InvalidDirection):
        verify_limit_ideal(COLUMN, (2, -3))


@pytest.mark.parametrize("d", [2, 3])
def test_limit_over_all_small_directions(d):
    E = make_staircase(d, [(2,) + (1,) * (d - 1), (0,) * (d - 1) + (3,)], close=True)
    for delta in strong_directions(d, 2):
        assert verify_limit_ideal(E, delta).passed, delta


def test_limit_dimension_conservation():
    rep = verify_limit_ideal(dilate((2, 3), regular_staircase(2, 2)), (-2, 1))
    for r in rep.lines:
        assert len(r.limit) == r.l


def test_pivots_match_plucker_oracle():
    rng = random.Random(7)
    for _ in range(60):
        k = rng.randint(1, 7)
        l = rng.randint(0, k)
        alphas = tuple(sorted(rng.sample(range(k), l), reverse=True))
        pivots = rref_pivots(binomial_matrix(alphas, k)) if l else ()
        assert oracles.limit_by_plucker(alphas, k) == [pivots]


def test_det_q_is_vandermonde_over_factorials():
    rng = random.Random(11)
    for _ in range(80):
        l = rng.randint(1, 6)
        alphas = rng.sample(range(12), l)
        Q = [row[:l] for row in binomial_matrix(alphas, l)]
        det = bareiss_det(Q)
        assert Fraction(det) == oracles.det_fraction(Q)
        assert abs(Fraction(det)) == abs(vandermonde_over_factorials(alphas))


def test_bareiss_small():
    assert bareiss_det([]) == 1
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[1, 2], [2, 4]]) == 0


def test_char_p_probe():
    assert char_p_probe((0, 1, 2, 3)) == []
    assert char_p_probe((0, 2)) == [2]
    assert char_p_probe((0, 5, 10)) == [5]

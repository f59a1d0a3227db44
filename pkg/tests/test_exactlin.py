import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from grassfold.exactlin import (
    int_rank,
    ExactMatrix,
    as_rational,
    det,
    format_rational,
    inverse,
    nullspace,
    rref,
    vandermonde,
)

from strategies import any_matrix, matrices


def to_sympy(rows):
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows])


def test_identity_rref():
    red, piv, rank = rref(ExactMatrix.identity(3))
    assert red == ExactMatrix.identity(3)
    assert piv == [0, 1, 2] and rank == 3


def test_dependent_rows():
    _, piv, rank = rref(ExactMatrix.from_rows([[1, 2], [2, 4]]))
    assert rank == 1 and piv == [0]


def test_rank_by_maximal_minors():
    # brute force: rank = largest k with a nonzero k x k minor
    rng = random.Random(7)
    for _ in range(10):
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(6)] for _ in range(4)]
        if rng.random() < 0.5:
            rows[3] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
        m = ExactMatrix.from_rows(rows)
        brute = 0
        for k in range(1, 5):
            if any(
                det(ExactMatrix.from_rows([[rows[i][j] for j in cs] for i in rs])) != 0
                for rs in itertools.combinations(range(4), k)
                for cs in itertools.combinations(range(6), k)
            ):
                brute = k
        assert rref(m)[2] == brute


@given(any_matrix())
def test_rref_matches_sympy(rows):
    m = ExactMatrix.from_rows(rows)
    red, piv, rank = rref(m)
    ref, ref_piv = to_sympy(rows).rref()
    assert piv == list(ref_piv)
    assert rank == len(ref_piv)
    assert to_sympy(red.row_list()) == ref


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=6))
def test_int_rank_matches_sympy(rows):
    assert int_rank(rows) == sympy.Matrix(rows).rank()
    assert int_rank(rows, stop=1) == min(1, sympy.Matrix(rows).rank())


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_det_matches_sympy(rows):
    assert det(ExactMatrix.from_rows(rows)) == Fraction(str(to_sympy(rows).det()))


@given(any_matrix())
def test_nullspace_is_kernel(rows):
    m = ExactMatrix.from_rows(rows)
    ns = nullspace(m)
    assert ns.rows == m.cols - rref(m)[2]
    for v in ns.row_list():
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    if ns.rows:
        assert rref(ns)[2] == ns.rows


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_inverse(rows):
    m = ExactMatrix.from_rows(rows)
    if det(m) == 0:
        with pytest.raises(ZeroDivisionError):
            inverse(m)
    else:
        assert m @ inverse(m) == ExactMatrix.identity(m.rows)


def test_vandermonde_shape_and_columns():
    v = vandermonde((0, 1, 2, 3), 3)
    assert (v.rows, v.cols) == (3, 4)
    assert v.column(2) == (1, 2, 4)


def test_rational_parsing_and_printing():
    assert as_rational("290/3") == Fraction(290, 3)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        ExactMatrix.from_rows([[1, 2], [3]])

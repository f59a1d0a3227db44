import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grassfold.errors import PreconditionError, SchemaError
from grassfold.fixtures import regression_polys
from grassfold.region import (
    PolyQ,
    RegionSpec,
    Tower,
    enclose,
    exp_bounds,
    find_K,
    region_contains,
    region_face_check,
    region_witness,
)



def spec(n, K, C=1):
    return RegionSpec(n, Fraction(K), Fraction(C))


def oracle_contains(point, K):
    if point[0] < K:
        return False
    for a, b in zip(point, point[1:]):
        # enough digits to resolve integers near K e^a
        with mpmath.workdps(len(str(b.numerator)) + 60):
            rhs = mpmath.mpf(K.numerator) / K.denominator * mpmath.exp(mpmath.mpf(a.numerator) / a.denominator)
            if mpmath.mpf(b.numerator) / b.denominator < rhs:
                return False
    return True


def near_boundary_point(rng, n, K):
    t = [K + Fraction(rng.randint(-2, 8), 4)]
    for _ in range(n - 1):
        prev = t[-1]
        with mpmath.workdps(int(prev) // 2 + 60):
            edge = mpmath.mpf(K.numerator) / K.denominator * mpmath.exp(mpmath.mpf(prev.numerator) / prev.denominator)
            pick = rng.choice(["floor", "ceil", "far"])
            if pick == "floor":
                t.append(Fraction(int(mpmath.floor(edge))))
            elif pick == "ceil":
                t.append(Fraction(int(mpmath.ceil(edge))))
            else:
                t.append(Fraction(int(edge * mpmath.mpf(rng.choice([0.5, 2, 3])))))
    return t


def test_spec_examples():
    assert region_contains([Fraction(2)], spec(1, 2))
    assert region_contains([Fraction(2), Fraction(20)], spec(2, 2))
    assert not region_contains([Fraction(2), Fraction(14)], spec(2, 2))
    assert not region_contains([Fraction(19, 10)], spec(1, 2))


def test_exact_against_mpmath():
    rng = random.Random(0)
    agree = 0
    for k in range(200):
        n = 1 + k % 3
        K = Fraction(rng.choice([2, 5, 3]), rng.choice([1, 2]))
        if K <= 1:
            K = Fraction(2)
        pt = near_boundary_point(rng, n, K)
        assert region_contains(pt, spec(n, K)) == oracle_contains(pt, K)
        agree += 1
    assert agree == 200


def test_exp_enclosure():
    for x in (Fraction(0), Fraction(2), Fraction(-7, 3), Fraction(123, 4)):
        lo, hi = enclose(x, 50)
        e_lo, e_hi = exp_bounds(lo, hi, 50)
        with mpmath.workdps(120):
            ref = mpmath.exp(mpmath.mpf(x.numerator) / x.denominator)
            assert mpmath.mpf(str(e_lo)) <= ref <= mpmath.mpf(str(e_hi))


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.integers(4, 12), st.integers(0, 6))
def test_monotone_nesting(seed, k2, dk):
    rng = random.Random(seed)
    K = Fraction(k2, 4)
    K2 = K + Fraction(dk, 4)
    if K <= 1:
        return
    pt = near_boundary_point(rng, 2, K2)
    if region_contains(pt, spec(2, K2)):
        assert region_contains(pt, spec(2, K))


def test_find_K_examples():
    one = find_K(PolyQ.constant(0, 1))
    assert (one.K, one.C) == (2, 1)
    lin = find_K(PolyQ.of(1, {(1,): 1, (0,): -5}))
    assert lin.K >= 6 and 0 < lin.C <= lin.K - 5
    diff = find_K(PolyQ.of(2, {(0, 1): 1, (1, 0): -1}))
    assert (diff.K, diff.C) == (2, 2)


def test_reference_bound_for_t2_minus_t1():
    # t2 - t1 >= 2 e^t1 - t1 >= 2 + t1 >= 4 on D_2(2): the middle step is e^t >= 1 + t,
    # and g(t) = 2 e^t - t is increasing for t >= 0, so the minimum sits at t1 = 2.
    lo, hi = enclose(Fraction(2), 60)
    e_lo, _ = exp_bounds(lo, hi, 60)
    assert 2 * e_lo - 2 >= 4
    f = PolyQ.of(2, {(0, 1): 1, (1, 0): -1})
    rep = region_witness(f, spec(2, 2, 4), samples=1000)
    assert not rep.violation and rep.undecided == 0
    assert rep.min_lower >= 4


def test_witness_examples():
    rep = region_witness(PolyQ.constant(1, 1), find_K(PolyQ.constant(1, 1)), samples=50)
    assert rep.min_lower == 1 and not rep.violation
    f = PolyQ.of(1, {(1,): 1})
    s = find_K(f)
    assert region_witness(f, s, samples=100).min_lower >= s.C
    # t2 - t1^5 vanishes inside D_2(2); claiming |f| >= 100 there is wrong
    bad = PolyQ.of(2, {(0, 1): 1, (5, 0): -1})
    assert region_witness(bad, spec(2, 2, 100), samples=200).violation


@pytest.mark.parametrize("k", range(20))
def test_regression_polys_sound(k):
    f = regression_polys()[k]
    s = find_K(f)
    rep = region_witness(f, s, samples=200, seed=k)
    assert rep.violations == 0 and rep.undecided == 0


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (1, 3), (3, 3), (2, 4), (5, 1)])
def test_face_check(p, q):
    assert region_face_check(p, q, 2, samples=30)
    assert region_face_check(p, q, Fraction(3, 2), samples=5, near_boundary=True)


def test_tower_prefix_in_region():
    t = Tower(Fraction(2), Fraction(2), (Fraction(0), Fraction(1, 2)))
    pre = t.numeric_prefix()
    assert region_contains(pre, spec(3, 2))
    assert t.indices_in_region([0, 2])
    assert not t.indices_in_region([2, 0])


def test_preconditions_and_schema():
    with pytest.raises(PreconditionError):
        RegionSpec(1, Fraction(1), Fraction(1))
    with pytest.raises(PreconditionError):
        region_witness(PolyQ.constant(4, 1), spec(4, 2))
    with pytest.raises(SchemaError):
        RegionSpec.from_json({"schema": "grassfold.region/1", "n": 1, "K": "1/2", "C": 1})
    f = regression_polys()[15]
    assert PolyQ.from_json(f.to_json()) == f
    assert isinstance(spec(1, 2).to_json()["K"], str)

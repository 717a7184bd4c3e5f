import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from prewitt.errors import InvalidInput, NotSquare
from prewitt.rings import PolyRing, poly_eval_int
from prewitt.sampling import random_case1, random_case2, random_distinct_family
from prewitt.vandermonde import (
    DEPENDENT,
    HYPOTHESIS_VIOLATED,
    INDEPENDENT,
    PVandermonde,
    box_points,
    det_exact,
    find_nonvanishing_point,
    g_polynomial,
    g_value,
    independence_check,
)


def leibniz(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= M[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def gauss_fraction(M):
    a = [[Fraction(v) for v in row] for row in M]
    n, det = len(a), Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return int(det)


def test_det_examples():
    assert det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    m = PVandermonde.build(3, [1, 2])
    assert m.matrix == ((1, 2), (1, 8))
    assert m.det() == 6
    assert PVandermonde.build(3, [1, -1]).det() == 0
    assert det_exact([]) == 1
    assert det_exact([[0, 1], [1, 0]]) == -1
    with pytest.raises(NotSquare):
        det_exact([[1, 2]])
    assert issubclass(NotSquare, ValueError)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(M):
    assert det_exact(M) == leibniz(M)


def test_det_matches_rational_elimination_on_large_entries():
    rng = random.Random(7)
    for _ in range(20):
        p = rng.choice([3, 5, 7])
        c = random_case2(rng, rng.randint(2, 5))
        M = PVandermonde.build(p, c).matrix
        assert det_exact(M) == gauss_fraction(M)


def test_independence_examples():
    r = independence_check(5, [1, 2, 3])
    assert r.status == INDEPENDENT and r.case == 1 and r.det != 0
    r = independence_check(3, [2, -5])
    assert r.status == INDEPENDENT and r.case == 2
    r = independence_check(3, [4, -4])
    assert r.status == HYPOTHESIS_VIOLATED and r.det == 0 and r.reason
    assert r.to_json() == {"status": HYPOTHESIS_VIOLATED, "det": "0", "reason": r.reason}
    # p = 2 never claims the |c_i| criterion
    assert independence_check(2, [2, -5]).status == HYPOTHESIS_VIOLATED
    for bad in ([], [0, 1], [3, 3]):
        with pytest.raises(InvalidInput):
            independence_check(3, bad)
    assert DEPENDENT == "Dependent"


def test_nonzero_determinants_under_both_hypotheses():
    rng = random.Random(0)
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        n = rng.randint(1, 6)
        assert PVandermonde.build(p, random_case1(rng, n)).det() != 0
        assert PVandermonde.build(p, random_case2(rng, n)).det() != 0


def test_sign_changes_only_flip_the_determinant():
    rng = random.Random(1)
    for _ in range(40):
        p = rng.choice([3, 5, 7])
        c = random_case2(rng, rng.randint(1, 5))
        d, d_abs = PVandermonde.build(p, c).det(), PVandermonde.build(p, [abs(x) for x in c]).det()
        negs = sum(1 for x in c if x < 0)
        assert d == (-1) ** negs * d_abs


def test_box_points_order():
    pts = list(itertools.islice(box_points(2), 9))
    assert pts[0] == (0, 0)
    assert pts[1:] == [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    assert next(box_points(0)) == ()
    shell2 = list(itertools.islice(box_points(1), 5))
    assert shell2 == [(0,), (-1,), (1,), (-2,), (2,)]


def test_point_examples():
    R = PolyRing("X,Y")
    X, Y = R.gens()
    assert g_value([poly_eval_int(X, (2, 1)), poly_eval_int(Y, (2, 1))]) == 6
    pt = find_nonvanishing_point([X, Y])
    a, b = pt
    assert a and b and a != b and a != -b
    assert find_nonvanishing_point([R.gen("X")])[0] != 0
    with pytest.raises(InvalidInput):
        find_nonvanishing_point([X, -X])
    with pytest.raises(InvalidInput):
        find_nonvanishing_point([X, X])
    with pytest.raises(InvalidInput):
        find_nonvanishing_point([R.zero])


def test_point_pipeline():
    rng = random.Random(2)
    for _ in range(30):
        nv = rng.randint(1, 3)
        R = PolyRing([f"x{i}" for i in range(nv)])
        fs = random_distinct_family(rng, R, rng.randint(1, 4), bound=5, max_terms=2, max_deg=2)
        pt = find_nonvanishing_point(fs)
        vals = [poly_eval_int(f, pt) for f in fs]
        assert poly_eval_int(g_polynomial(fs), pt) == g_value(vals) != 0
        assert independence_check(rng.choice([3, 5, 7]), vals).status == INDEPENDENT


def test_text_is_aligned():
    text = PVandermonde.build(3, [1, -2]).to_text()
    lines = text.splitlines()
    assert lines == [" 1 -2", " 1 -8"]

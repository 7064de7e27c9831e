import pytest

from polyrmf.curves import (
    CurveScanReport,
    exponent_scan,
    integral_points,
    monotone_pieces,
)
from polyrmf.poly import IntPolynomial


def test_pell_points(x2p1):
    assert integral_points(x2p1, 1, 2, 100) == [(3, 2), (17, 12), (99, 70)]
    assert integral_points(x2p1, 2, 1, 100) == [(2, 3), (12, 17), (70, 99)]


def test_pell_recurrence_continues(x2p1):
    pts = set(integral_points(x2p1, 1, 2, 10**4))
    x, y = 99, 70
    while 3 * x + 4 * y <= 10**4:
        x, y = 3 * x + 4 * y, 2 * x + 3 * y
        assert (x, y) in pts


def test_diagonal(x2p1):
    assert integral_points(x2p1, 1, 1, 50) == [(x, x) for x in range(1, 51)]


def test_noninjective_diagonal_includes_reflections():
    p = IntPolynomial((10, -6, 1))  # symmetric about 3: P(1)=P(5), P(2)=P(4)
    pts = integral_points(p, 1, 1, 10)
    assert (1, 5) in pts and (5, 1) in pts and (2, 4) in pts
    assert all((x, x) in pts for x in range(1, 11))


def test_completeness_against_quadratic_scan():
    polys = [
        IntPolynomial((1, 0, 1)),
        IntPolynomial((0, 1, 1)),
        IntPolynomial((10, -6, 1)),  # non-monotone on the range
        IntPolynomial((2, 0, 0, 1)),
        IntPolynomial((3, 2)),
    ]
    pairs = [(1, 1), (1, 2), (2, 1), (3, 5), (7, 11), (2, 4), (25, 4)]
    n = 150
    for poly in polys:
        vals = [poly.eval(x) for x in range(1, n + 1)]
        for a, b in pairs:
            brute = sorted(
                (x, y)
                for x in range(1, n + 1)
                for y in range(1, n + 1)
                if a * vals[x - 1] == b * vals[y - 1]
            )
            assert integral_points(poly, a, b, n) == brute, (poly.coeffs, a, b)


def test_big_coefficient_path():
    p = IntPolynomial((1, 0, 1))
    big = 2**61
    pts = integral_points(p, big, 2 * big, 100)
    assert pts == [(3, 2), (17, 12), (99, 70)]  # same ratio as (1, 2)


def test_validation():
    p = IntPolynomial((1, 0, 1))
    with pytest.raises(ValueError):
        integral_points(p, 0, 1, 10)
    with pytest.raises(ValueError):
        integral_points(p, 1, -2, 10)
    with pytest.raises(ValueError):
        integral_points(p, 1, 1, 0)


def test_monotone_pieces_cover_range():
    for coeffs in [(1, 0, 1), (10, -6, 1), (0, -1, 0, 1), (5, 1)]:
        poly = IntPolynomial(coeffs)
        pieces = monotone_pieces(poly, 40)
        assert pieces[0][0] == 1 and pieces[-1][1] == 40
        for (lo1, hi1), (lo2, hi2) in zip(pieces, pieces[1:]):
            assert hi1 == lo2
        for lo, hi in pieces:
            seg = [poly.eval(x) for x in range(lo, hi + 1)]
            assert seg == sorted(seg) or seg == sorted(seg, reverse=True)


def test_exponent_scan_report(x2p1):
    rep = exponent_scan(x2p1, [50, 100], ab_samples=25, seed=11, ab_max=30)
    assert isinstance(rep, CurveScanReport)
    assert rep.n_values == (50, 100)
    assert len(rep.pairs) == 25
    assert all(a != b for a, b in rep.pairs)
    assert rep.diagonal_count == (50, 100)
    assert len(rep.counts_by_n) == 2 and len(rep.counts_by_n[0]) == 25
    # counts cannot shrink when the box grows
    for c_small, c_big in zip(rep.counts_by_n[0], rep.counts_by_n[1]):
        assert c_big >= c_small
    assert rep.max_count[1] == max(rep.counts_by_n[1])
    for a, b, count, pts in rep.top_examples:
        assert count == len(integral_points(x2p1, a, b, 100))
        assert len(pts) <= 20


def test_exponent_scan_deterministic(x2p1):
    r1 = exponent_scan(x2p1, [30], ab_samples=10, seed=5)
    r2 = exponent_scan(x2p1, [30], ab_samples=10, seed=5)
    assert r1 == r2

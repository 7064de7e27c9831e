"""Integral points on a*P(x) = b*P(y) and scan statistics over (a, b).

The solve is exact: values P(1..N) are computed once, the range [1, N] is cut
into integer intervals on which P is monotone (cuts at the integer neighbors
of the real critical points), and each quotient a*P(x)/b is located by binary
search inside every piece. Every reported point is verified by an exact
integer identity, so false positives are impossible; completeness rests on
the monotone decomposition, which the tests check against a quadratic-time
scan.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .poly import IntPolynomial

_INT64_SAFE = 1 << 62


def _loose_bound(P: IntPolynomial, n_max: int) -> int:
    return sum(abs(c) * n_max**i for i, c in enumerate(P.coeffs))


def _values_array(P: IntPolynomial, n_max: int):
    """P(1..N) as int64 when safe, else a Python list of exact ints."""
    if _loose_bound(P, n_max) < _INT64_SAFE:
        n = np.arange(1, n_max + 1, dtype=np.int64)
        vals = np.zeros(n_max, dtype=np.int64)
        for c in reversed(P.coeffs):
            vals *= n
            vals += c
        return vals
    return [P.eval(x) for x in range(1, n_max + 1)]


def monotone_pieces(P: IntPolynomial, n_max: int) -> list[tuple[int, int]]:
    """Closed integer intervals covering [1, n_max], P monotone on each.

    Consecutive pieces share an endpoint. Cut points are placed on both
    integer sides of every real critical point, padded by one to absorb
    root-finding error; any interval of length one is trivially monotone, so
    a critical point strictly between adjacent cuts is harmless.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    cuts = {1, n_max}
    if P.degree >= 2:
        for r in np.roots(list(reversed(P.derivative_coeffs()))):
            if abs(r.imag) > 1e-8 * (1.0 + abs(r.real)):
                continue
            base = math.floor(r.real)
            for c in (base - 1, base, base + 1, base + 2):
                if 1 <= c <= n_max:
                    cuts.add(c)
    cs = sorted(cuts)
    if len(cs) == 1:
        return [(cs[0], cs[0])]
    return [(cs[i], cs[i + 1]) for i in range(len(cs) - 1)]


def _locate_in_pieces_int64(vals, pieces, targets):
    """Yield (target_index, y) with P(y) == targets[target_index], exactly."""
    out = []
    for lo, hi in pieces:
        seg = vals[lo - 1 : hi]
        asc = bool(seg[0] <= seg[-1])
        s = seg if asc else seg[::-1]
        left = np.searchsorted(s, targets, side="left")
        right = np.searchsorted(s, targets, side="right")
        for idx in np.nonzero(right > left)[0]:
            for pos in range(int(left[idx]), int(right[idx])):
                y = lo + pos if asc else hi - pos
                out.append((int(idx), y))
    return out


def _integral_points_exact(P, a, b, n_max, vals) -> set[tuple[int, int]]:
    points: set[tuple[int, int]] = set()
    pieces = monotone_pieces(P, n_max)
    segs = []
    for lo, hi in pieces:
        seg = vals[lo - 1 : hi]
        asc = seg[0] <= seg[-1]
        segs.append((lo, hi, asc, seg if asc else seg[::-1]))
    for x in range(1, n_max + 1):
        t, r = divmod(a * vals[x - 1], b)
        if r:
            continue
        for lo, hi, asc, s in segs:
            i = bisect_left(s, t)
            while i < len(s) and s[i] == t:
                points.add((x, lo + i if asc else hi - i))
                i += 1
    return points


def integral_points(
    P: IntPolynomial, a: int, b: int, n_max: int
) -> list[tuple[int, int]]:
    """All (x, y) in [1, n_max]^2 with a*P(x) == b*P(y), sorted.

    a and b must be positive. The count is exact; for a == b and injective P
    this is the diagonal x == y.
    """
    if a < 1 or b < 1:
        raise ValueError("coefficients a and b must be positive integers")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    vals = _values_array(P, n_max)
    if isinstance(vals, list) or a * int(np.abs(vals).max()) >= _INT64_SAFE:
        if not isinstance(vals, list):
            vals = [int(v) for v in vals]
        return sorted(_integral_points_exact(P, a, b, n_max, vals))
    pieces = monotone_pieces(P, n_max)
    scaled = a * vals
    rem = scaled % b
    ok = rem == 0
    xs = np.nonzero(ok)[0] + 1
    targets = scaled[ok] // b
    points: set[tuple[int, int]] = set()
    for idx, y in _locate_in_pieces_int64(vals, pieces, targets):
        x = int(xs[idx])
        assert a * int(vals[x - 1]) == b * int(vals[y - 1])
        points.add((x, y))
    return sorted(points)


@dataclass(frozen=True)
class CurveScanReport:
    """Counts of a*P(x) = b*P(y) solutions over sampled coefficient pairs."""

    poly: str
    n_values: tuple[int, ...]
    ab_max: int
    seed: int
    pairs: tuple[tuple[int, int], ...]
    counts_by_n: tuple[tuple[int, ...], ...]  # [n_index][pair_index]
    max_count: tuple[int, ...]
    mean_count: tuple[float, ...]
    diagonal_count: tuple[int, ...]
    top_examples: tuple[tuple[int, int, int, tuple[tuple[int, int], ...]], ...]


def exponent_scan(
    P: IntPolynomial,
    n_values: list[int] | tuple[int, ...],
    ab_samples: int = 100,
    seed: int = 0,
    ab_max: int = 1000,
) -> CurveScanReport:
    """Solution counts over random a != b pairs, at each range cutoff.

    The same coefficient pairs are reused for every N so counts are paired
    across cutoffs. top_examples lists the five largest counts at the final
    N with at most twenty points each.
    """
    if ab_samples < 1 or ab_max < 2:
        raise ValueError("need ab_samples >= 1 and ab_max >= 2")
    ns = tuple(sorted(set(int(n) for n in n_values)))
    if not ns or ns[0] < 1:
        raise ValueError("n_values must be positive")
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < ab_samples:
        a = int(rng.integers(1, ab_max + 1))
        b = int(rng.integers(1, ab_max + 1))
        if a != b:
            pairs.append((a, b))
    counts_by_n = []
    diag = []
    for n in ns:
        counts_by_n.append(tuple(len(integral_points(P, a, b, n)) for a, b in pairs))
        diag.append(len(integral_points(P, 1, 1, n)))
    last = counts_by_n[-1]
    top_idx = sorted(range(len(pairs)), key=lambda i: -last[i])[:5]
    examples = []
    for i in top_idx:
        a, b = pairs[i]
        pts = integral_points(P, a, b, ns[-1])[:20]
        examples.append((a, b, last[i], tuple(pts)))
    return CurveScanReport(
        poly=str(P),
        n_values=ns,
        ab_max=ab_max,
        seed=seed,
        pairs=tuple(pairs),
        counts_by_n=tuple(counts_by_n),
        max_count=tuple(max(c) for c in counts_by_n),
        mean_count=tuple(sum(c) / len(c) for c in counts_by_n),
        diagonal_count=tuple(diag),
        top_examples=tuple(examples),
    )

"""Exact factor tables for polynomial values over 1..N.

sieve_values finds, for every prime p up to sqrt(max value), the arithmetic
progressions n = r (mod p) on which p divides P(n) (via the root sets of P
mod p), strikes them block by block, and divides out exact prime powers.
Whatever remains after all strikes is either 1 or a single prime: a composite
leftover would need two prime factors above the sieve bound, exceeding the
value itself. Factor data is stored columnar (flat prime/exponent arrays plus
row offsets), which keeps N = 10**6 tables comfortably in memory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .intmath import primes_up_to
from .poly import IntPolynomial, count_roots_mod_prime_square, is_admissible, roots_mod_prime

# hard cap on the prime sieve bound; values whose square root exceeds this
# cannot be factored at acceptable cost
_MAX_SIEVE_BOUND = 1 << 27

_DEFAULT_BLOCK = 1 << 20


@dataclass(frozen=True)
class ValueRecord:
    """One row of a value table.

    factors lists (prime, exponent) pairs in ascending prime order and
    multiplies out to value exactly. largest_prime is None only for value 1.
    """

    n: int
    value: int
    factors: tuple[tuple[int, int], ...]
    is_squarefree: bool
    largest_prime: int | None


class ValueTable:
    """Columnar table of ValueRecords for P(n), 1 <= n <= n_max."""

    def __init__(self, poly, n_max, values, is_sf, largest, flat_primes, flat_exps, row_ptr):
        self.poly = poly
        self.n_max = int(n_max)
        self.values = values
        self.is_squarefree = is_sf
        self.largest = largest  # 0 marks a unit value
        self.flat_primes = flat_primes
        self.flat_exps = flat_exps
        self.row_ptr = row_ptr
        self._prime_index = None

    def __len__(self) -> int:
        return self.n_max

    def record(self, n: int) -> ValueRecord:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n = {n} outside 1..{self.n_max}")
        i = n - 1
        lo, hi = int(self.row_ptr[i]), int(self.row_ptr[i + 1])
        factors = tuple(
            (int(self.flat_primes[j]), int(self.flat_exps[j])) for j in range(lo, hi)
        )
        lp = int(self.largest[i])
        return ValueRecord(
            n=n,
            value=int(self.values[i]),
            factors=factors,
            is_squarefree=bool(self.is_squarefree[i]),
            largest_prime=lp if lp else None,
        )

    def __iter__(self):
        for n in range(1, self.n_max + 1):
            yield self.record(n)

    records = __iter__

    @classmethod
    def from_records(cls, poly: IntPolynomial, records) -> "ValueTable":
        """Build a table directly from records (testing hook).

        Validates that each factor list multiplies out to its value; does not
        re-check value == poly(n).
        """
        records = sorted(records, key=lambda r: r.n)
        if [r.n for r in records] != list(range(1, len(records) + 1)):
            raise ValueError("records must cover n = 1..N exactly once")
        values, sf, largest, fp, fe, ptr = [], [], [], [], [], [0]
        for r in records:
            prod = 1
            for p, e in r.factors:
                prod *= p**e
            if prod != r.value:
                raise ValueError(f"factors of record n={r.n} do not multiply to value")
            values.append(r.value)
            sf.append(r.is_squarefree)
            largest.append(r.largest_prime or 0)
            for p, e in r.factors:
                fp.append(p)
                fe.append(e)
            ptr.append(len(fp))
        big = max(values) >= 1 << 62 if values else False
        if big:
            return cls(poly, len(records), values, np.array(sf, bool), largest,
                       fp, fe, np.array(ptr, np.int64))
        return cls(
            poly,
            len(records),
            np.array(values, np.int64),
            np.array(sf, bool),
            np.array(largest, np.int64),
            np.array(fp, np.int64),
            np.array(fe, np.int16),
            np.array(ptr, np.int64),
        )

    def prime_index(self):
        """(distinct primes ascending, flat index into them) for vector work."""
        if self._prime_index is None:
            fp = np.asarray(self.flat_primes, dtype=np.int64)
            primes, inverse = np.unique(fp, return_inverse=True)
            self._prime_index = (primes, inverse.astype(np.int64))
        return self._prime_index


def _extrema_candidates(P: IntPolynomial, lo: int, hi: int) -> list[int]:
    """Integer points where P can attain its extrema on [lo, hi]."""
    cands = {lo, hi}
    if P.degree >= 2:
        dcoeffs = P.derivative_coeffs()
        roots = np.roots(list(reversed(dcoeffs)))
        for r in roots:
            if abs(r.imag) < 1e-9:
                for c in (math.floor(r.real), math.ceil(r.real)):
                    if lo <= c <= hi:
                        cands.add(int(c))
    return sorted(cands)


def min_value_on_range(P: IntPolynomial, lo: int, hi: int) -> tuple[int, int]:
    """(min P(n), argmin) over integers lo..hi, exact."""
    best = None
    arg = lo
    for c in _extrema_candidates(P, lo, hi):
        v = P(c)
        if best is None or v < best:
            best, arg = v, c
    return best, arg


def max_value_on_range(P: IntPolynomial, lo: int, hi: int) -> tuple[int, int]:
    """(max P(n), argmax) over integers lo..hi, exact."""
    best = None
    arg = lo
    for c in _extrema_candidates(P, lo, hi):
        v = P(c)
        if best is None or v > best:
            best, arg = v, c
    return best, arg


def _prime_roots(P: IntPolynomial, bound: int) -> list[tuple[int, list[int]]]:
    out = []
    for p in primes_up_to(bound):
        p = int(p)
        roots = roots_mod_prime(P, p)
        roots = list(roots)
        if roots:
            out.append((p, roots))
    return out


def _sieve_int64(P: IntPolynomial, N: int, proots, block_size: int) -> ValueTable:
    values_parts, sf_parts = [], []
    rows_parts, primes_parts, exps_parts = [], [], []
    for lo in range(1, N + 1, block_size):
        hi = min(lo + block_size, N + 1)
        blen = hi - lo
        narr = np.arange(lo, hi, dtype=np.int64)
        vals = np.zeros(blen, dtype=np.int64)
        for c in reversed(P.coeffs):
            vals = vals * narr + c
        residual = vals.copy()
        not_sf = np.zeros(blen, dtype=bool)
        for p, roots in proots:
            for r in roots:
                start = (r - lo) % p
                if start >= blen:
                    continue
                idx = np.arange(start, blen, p, dtype=np.int64)
                residual[idx] //= p
                e = np.ones(len(idx), dtype=np.int16)
                while True:
                    rem = residual[idx] % p == 0
                    if not rem.any():
                        break
                    residual[idx[rem]] //= p
                    e[rem] += 1
                if (e > 1).any():
                    not_sf[idx[e > 1]] = True
                rows_parts.append(idx + (lo - 1))
                primes_parts.append(np.full(len(idx), p, dtype=np.int64))
                exps_parts.append(e)
        left = np.nonzero(residual > 1)[0]
        if len(left):
            rows_parts.append(left + (lo - 1))
            primes_parts.append(residual[left])
            exps_parts.append(np.ones(len(left), dtype=np.int16))
        values_parts.append(vals)
        sf_parts.append(~not_sf)

    values = np.concatenate(values_parts)
    sf = np.concatenate(sf_parts)
    if rows_parts:
        rows = np.concatenate(rows_parts)
        primes = np.concatenate(primes_parts)
        exps = np.concatenate(exps_parts)
    else:
        rows = np.empty(0, np.int64)
        primes = np.empty(0, np.int64)
        exps = np.empty(0, np.int16)
    order = np.argsort(rows, kind="stable")
    rows, primes, exps = rows[order], primes[order], exps[order]
    counts = np.bincount(rows, minlength=N)
    row_ptr = np.zeros(N + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    largest = np.zeros(N, dtype=np.int64)
    nonempty = row_ptr[1:] > row_ptr[:-1]
    largest[nonempty] = primes[row_ptr[1:][nonempty] - 1]
    return ValueTable(P, N, values, sf, largest, primes, exps, row_ptr)


def _sieve_object(P: IntPolynomial, N: int, proots) -> ValueTable:
    # exact fallback for values past the int64 range; plain Python integers
    values = [P(n) for n in range(1, N + 1)]
    residual = list(values)
    factors: list[list[tuple[int, int]]] = [[] for _ in range(N)]
    sf = [True] * N
    for p, roots in proots:
        for r in roots:
            start = (r - 1) % p
            for i in range(start, N, p):
                e = 0
                while residual[i] % p == 0:
                    residual[i] //= p
                    e += 1
                if e:
                    factors[i].append((p, e))
                    if e > 1:
                        sf[i] = False
    fp, fe, ptr = [], [], [0]
    largest = []
    for i in range(N):
        if residual[i] > 1:
            factors[i].append((residual[i], 1))
        for p, e in factors[i]:
            fp.append(p)
            fe.append(e)
        ptr.append(len(fp))
        largest.append(factors[i][-1][0] if factors[i] else 0)
    return ValueTable(P, N, values, np.array(sf, bool), largest, fp, fe,
                      np.array(ptr, np.int64))


def sieve_values(P: IntPolynomial, N: int, block_size: int = _DEFAULT_BLOCK) -> ValueTable:
    """Factor P(n) for every 1 <= n <= N into a ValueTable.

    Raises DomainError unless P(n) >= 1 on the whole range; for polynomials
    dipping to zero or below, shift the argument (replace x by x + s) until
    values are positive.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    minv, arg = min_value_on_range(P, 1, N)
    if minv < 1:
        raise DomainError(
            f"P({arg}) = {minv} is not positive; shift the polynomial "
            f"(replace x by x + s) so that values on [1, {N}] are at least 1"
        )
    maxv, _ = max_value_on_range(P, 1, N)
    bound = math.isqrt(maxv)
    if bound > _MAX_SIEVE_BOUND:
        raise DomainError(
            f"values reach {maxv}; sieving would need primes up to {bound}, "
            f"beyond the supported bound {_MAX_SIEVE_BOUND}"
        )
    proots = _prime_roots(P, bound)
    loose = sum(abs(c) * N**i for i, c in enumerate(P.coeffs))
    if loose < 1 << 62:
        return _sieve_int64(P, N, proots, block_size)
    return _sieve_object(P, N, proots)


def squarefree_count(table: ValueTable) -> int:
    """Number of n in the table with P(n) squarefree."""
    return int(np.asarray(table.is_squarefree).sum())


def kappa_euler(P: IntPolynomial, prime_bound: int = 100_000) -> float:
    """Truncated Euler product for the squarefree density of P's values.

    Product over primes p <= prime_bound of (1 - rho(p^2)/p^2), where rho
    counts roots of P modulo p^2. The tail beyond 10**5 contributes less than
    1e-4 for degree <= 4. Requires an admissible polynomial; otherwise some
    factor vanishes and the product is meaningless.
    """
    if not is_admissible(P):
        raise DomainError("polynomial is inadmissible: some p^2 divides every value")
    prod = 1.0
    for p in primes_up_to(prime_bound):
        p = int(p)
        rho = count_roots_mod_prime_square(P, p)
        if rho:
            prod *= 1.0 - rho / (p * p)
    return prod


@dataclass(frozen=True)
class LargestPrimeStats:
    """Distribution summary of the largest prime factor over a table."""

    n_max: int
    c: float
    proportion_gt_n: float
    proportion_gt_nlogn: float
    hist_edges: tuple[float, ...]
    hist_counts: tuple[int, ...]


def largest_prime_stats(table: ValueTable, c: float = 0.01) -> LargestPrimeStats:
    """Summaries of P+(P(n)) against n: how often it beats n and c*n*log n.

    Unit values count as never exceeding. The histogram collects
    log P+ / log n over n >= 2.
    """
    N = table.n_max
    n = np.arange(1, N + 1, dtype=np.float64)
    lp = np.array([float(x) for x in table.largest]) if isinstance(table.largest, list) \
        else table.largest.astype(np.float64)
    gt_n = lp > n
    with np.errstate(divide="ignore"):
        logn = np.log(n)
    logn[0] = 0.0
    gt_nlogn = lp > c * n * logn
    gt_nlogn &= lp > 0
    mask = (n >= 2) & (lp >= 2)
    ratios = np.log(lp[mask]) / np.log(n[mask])
    top = table.poly.degree + 0.5
    edges = np.linspace(0.0, top, int(top * 10) + 1)
    counts, edges = np.histogram(ratios, bins=edges)
    return LargestPrimeStats(
        n_max=N,
        c=c,
        proportion_gt_n=float(gt_n.mean()),
        proportion_gt_nlogn=float(gt_nlogn.mean()),
        hist_edges=tuple(float(e) for e in edges),
        hist_counts=tuple(int(x) for x in counts),
    )


def smooth_count(x: int, y: int) -> int:
    """psi(x, y): how many n <= x have every prime factor <= y (1 included)."""
    if x < 2 or y < 2:
        raise ValueError("smooth_count needs x >= 2 and y >= 2")
    smooth = np.ones(x + 1, dtype=bool)
    for p in primes_up_to(x):
        if p > y:
            smooth[p::p] = False
    return int(smooth[1:].sum())

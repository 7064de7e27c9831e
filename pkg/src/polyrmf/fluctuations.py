"""Multi-scale fluctuation scan for partial sums of f(n^2 + 1).

A growing ladder of scales x_1 < ... < x_k is fixed, and for each scale a set
A_i of large primes is extracted: p in A_i when p exceeds c * x_i * log x_i,
p divides n^2 + 1 for exactly one n <= x_i, that n exceeds x_{i-1}, and no
two chosen primes share their witness n. The sets are pairwise disjoint, so
the partial sum at scale i splits exactly into the rows seeing one A_i prime,
the rows seeing some other scale's prime, and the untouched rows. The first
piece behaves like an independent block across scales, which is what the
studentized-maximum statistic exercises.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleScaleError
from .poly import IntPolynomial
from .rmf import RADEMACHER, RmfSampler, _f_values_vector, derive_seed
from .sieve import ValueTable, sieve_values

THEORETICAL = "theoretical"
GEOMETRIC = "geometric"
_MODES = (THEORETICAL, GEOMETRIC)

_TARGET_POLY = (1, 0, 1)  # x^2 + 1
_MAX_SCALES = 64  # per-row scale membership lives in one uint64


@dataclass(frozen=True)
class ScaleSet:
    """Strictly increasing integer scales x_1 < ... < x_k."""

    base: int
    k: int
    mode: str
    cap: int
    xs: tuple[int, ...]


def _theoretical_exponent(i: int) -> float:
    return i * math.log(3 * i) ** 2


def scale_set(base: int, k: int, mode: str = GEOMETRIC, cap: int = 10**6) -> ScaleSet:
    """Build the scale ladder.

    'theoretical' uses x_i = round(base ** (i * log(3i)^2)), which outgrows
    any cap almost immediately and raises InfeasibleScaleError when it does;
    'geometric' places k scales in geometric progression from base to cap
    (x_k = cap exactly), the practical surrogate.
    """
    if base < 16:
        raise ValueError("base scale must be >= 16")
    if k < 2:
        raise ValueError("need at least two scales")
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}")
    if cap <= base + k:
        raise InfeasibleScaleError(
            f"cap {cap} cannot hold {k} strictly increasing scales above {base}"
        )
    xs: list[int] = []
    if mode == THEORETICAL:
        lb = math.log(base)
        for i in range(1, k + 1):
            e = _theoretical_exponent(i)
            if e * lb > math.log(cap) + 1e-12:
                feasible = max(
                    (j for j in range(1, k) if _theoretical_exponent(j) * lb <= math.log(cap)),
                    default=0,
                )
                raise InfeasibleScaleError(
                    f"scale {i} of the theoretical schedule is "
                    f"base**{e:.3f} > cap {cap}; at this base the cap "
                    f"admits at most {feasible} scale(s)"
                )
            xs.append(round(math.exp(e * lb)))
        for a, b in zip(xs, xs[1:]):
            if b <= a:
                raise InfeasibleScaleError("theoretical schedule is not strictly increasing")
    else:
        r = (cap / base) ** (1.0 / k)
        prev = base
        for i in range(1, k + 1):
            x = max(prev + 1, round(base * r**i))
            xs.append(x)
            prev = x
        xs[-1] = cap
        if len(xs) >= 2 and xs[-1] <= xs[-2]:
            raise InfeasibleScaleError("geometric schedule collapsed at the cap")
    return ScaleSet(base=base, k=k, mode=mode, cap=cap, xs=tuple(xs))


def _occurrence_groups(table: ValueTable, theta_min: float):
    """Per-prime occurrence data over all rows, primes above theta_min.

    Returns (uprimes, starts, counts, first_n, second_n, n_sorted) where
    n_sorted holds the occurrence positions grouped by prime, ascending
    within each group.
    """
    lengths = np.diff(table.row_ptr)
    rows = np.repeat(np.arange(table.n_max, dtype=np.int64), lengths)
    fp = table.flat_primes
    m = fp > theta_min
    p_of = fp[m]
    n_of = rows[m] + 1
    order = np.argsort(p_of, kind="stable")
    p_s = p_of[order]
    n_s = n_of[order]
    if len(p_s) == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, z, z, z
    starts = np.concatenate(([0], np.nonzero(p_s[1:] != p_s[:-1])[0] + 1)).astype(np.int64)
    counts = np.diff(np.concatenate((starts, [len(p_s)]))).astype(np.int64)
    uprimes = p_s[starts]
    first_n = n_s[starts]
    second_n = np.full(len(starts), np.iinfo(np.int64).max, dtype=np.int64)
    has2 = counts >= 2
    second_n[has2] = n_s[starts[has2] + 1]
    return uprimes, starts, counts, first_n, second_n, n_s


def threshold_primes(table: ValueTable, x: int, c: float) -> np.ndarray:
    """Primes above c * x * log x dividing some value with n <= x, sorted.

    This is the raw threshold set, before the single-witness and freshness
    filters that carve out the per-scale sets.
    """
    if x < 2 or x > table.n_max:
        raise ValueError("x must be in [2, table.n_max]")
    lengths = np.diff(table.row_ptr)
    rows = np.repeat(np.arange(table.n_max, dtype=np.int64), lengths)
    fp = table.flat_primes
    theta = c * x * math.log(x)
    m = (rows < x) & (fp > theta)
    return np.unique(fp[m])


def _multi_slice(starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Indices covering [s, s+l) for each (s, l) pair, concatenated."""
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    offs = np.repeat(np.cumsum(lengths) - lengths, lengths)
    return np.arange(total, dtype=np.int64) - offs + np.repeat(starts, lengths)


@dataclass
class PrimeClassSets:
    """Disjoint per-scale prime sets and the induced row partition.

    bitmask[n-1] has bit i set when some A_{i+1} prime divides n^2 + 1;
    acount[n-1] counts the distinct scale primes dividing it. class*_rows
    are 0-based row indices below the matching scale.
    """

    scales: ScaleSet
    c: float
    table: ValueTable
    prime_sets: tuple[np.ndarray, ...]
    first_occurrence: tuple[np.ndarray, ...]
    sizes: tuple[int, ...]
    candidate_sizes: tuple[int, ...]
    bitmask: np.ndarray
    acount: np.ndarray
    class1_rows: tuple[np.ndarray, ...] = field(repr=False, default=())
    class2_rows: tuple[np.ndarray, ...] = field(repr=False, default=())
    class3_rows: tuple[np.ndarray, ...] = field(repr=False, default=())
    class1_sf: tuple[int, ...] = ()

    def verify_invariants(self) -> dict[str, bool]:
        """Recheck every set invariant directly against the table."""
        t = self.table
        xs = self.scales.xs
        lengths = np.diff(t.row_ptr)
        rows = np.repeat(np.arange(t.n_max, dtype=np.int64), lengths)
        fp = t.flat_primes
        ok = {
            "disjoint": True,
            "threshold": True,
            "single_witness": True,
            "fresh": True,
            "no_shared_value": True,
            "partition": True,
        }
        for i in range(len(xs)):
            for j in range(i):
                if len(np.intersect1d(self.prime_sets[i], self.prime_sets[j])):
                    ok["disjoint"] = False
        for idx, x in enumerate(xs):
            a = self.prime_sets[idx]
            prev = xs[idx - 1] if idx else 0
            theta = self.c * x * math.log(x)
            if len(a) and a.min() <= theta:
                ok["threshold"] = False
            if len(a):
                sel = np.isin(fp, a)
                sub_rows = rows[sel]
                sub_p = fp[sel]
                m = sub_rows < x
                u, cnt = np.unique(sub_p[m], return_counts=True)
                if len(u) != len(a) or not (cnt == 1).all():
                    ok["single_witness"] = False
                if (sub_rows < prev).any():
                    ok["fresh"] = False
                _, rc = np.unique(sub_rows[m], return_counts=True)
                if len(rc) and rc.max() > 1:
                    ok["no_shared_value"] = False
            c1, c2, c3 = (
                self.class1_rows[idx],
                self.class2_rows[idx],
                self.class3_rows[idx],
            )
            union = np.concatenate((c1, c2, c3))
            if len(union) != x or len(np.unique(union)) != x:
                ok["partition"] = False
        return ok


def build_prime_class_sets(
    scales: ScaleSet, c: float = 0.01, table: ValueTable | None = None
) -> PrimeClassSets:
    """Extract the per-scale prime sets for x^2 + 1 and classify every row."""
    if c <= 0:
        raise ValueError("threshold constant c must be positive")
    if scales.k > _MAX_SCALES:
        raise ValueError(f"at most {_MAX_SCALES} scales are supported")
    xs = scales.xs
    xk = xs[-1]
    if table is None:
        table = sieve_values(IntPolynomial(_TARGET_POLY), xk)
    else:
        if tuple(table.poly.coeffs) != _TARGET_POLY:
            raise ValueError("fluctuation sets are defined for x^2 + 1 only")
        if table.n_max < xk:
            raise ValueError("table does not cover the largest scale")
        if isinstance(table.values, list):
            raise TypeError("need an int64 table")
    theta_min = c * xs[0] * math.log(xs[0])
    uprimes, starts, counts, first_n, second_n, n_s = _occurrence_groups(table, theta_min)
    bitmask = np.zeros(xk, dtype=np.uint64)
    acount = np.zeros(xk, dtype=np.int64)
    prime_sets = []
    first_occ = []
    cand_sizes = []
    for idx, x in enumerate(xs):
        prev = xs[idx - 1] if idx else 0
        theta = c * x * math.log(x)
        cand = (uprimes > theta) & (first_n > prev) & (first_n <= x) & (second_n > x)
        cidx = np.nonzero(cand)[0]
        cand_sizes.append(len(cidx))
        fn = first_n[cidx]
        u, cnt = np.unique(fn, return_counts=True)
        shared = u[cnt > 1]
        keep = cidx[~np.isin(fn, shared)]
        prime_sets.append(uprimes[keep].copy())
        first_occ.append(first_n[keep].copy())
        pos = _multi_slice(starts[keep], counts[keep])
        occ_n = n_s[pos]
        occ_rows = occ_n[occ_n <= xk] - 1
        np.bitwise_or.at(bitmask, occ_rows, np.uint64(1 << idx))
        np.add.at(acount, occ_rows, 1)
    c1_rows, c2_rows, c3_rows, c1_sf = [], [], [], []
    sf = np.asarray(table.is_squarefree)
    for idx, x in enumerate(xs):
        bit = np.uint64(1 << idx)
        b = bitmask[:x]
        others = (b & ~bit) != 0
        c1 = np.nonzero((b == bit) & (acount[:x] == 1))[0]
        c2 = np.nonzero(others)[0]
        c3 = np.nonzero(b == 0)[0]
        c1_rows.append(c1)
        c2_rows.append(c2)
        c3_rows.append(c3)
        c1_sf.append(int(sf[c1].sum()))
    return PrimeClassSets(
        scales=scales,
        c=c,
        table=table,
        prime_sets=tuple(prime_sets),
        first_occurrence=tuple(first_occ),
        sizes=tuple(len(a) for a in prime_sets),
        candidate_sizes=tuple(cand_sizes),
        bitmask=bitmask,
        acount=acount,
        class1_rows=tuple(c1_rows),
        class2_rows=tuple(c2_rows),
        class3_rows=tuple(c3_rows),
        class1_sf=tuple(c1_sf),
    )


def three_sum_decomposition(
    sampler: RmfSampler, sets: PrimeClassSets, scale_index: int
) -> tuple[int, int, int]:
    """Split the partial sum at scale number scale_index (1-based) exactly.

    Returns (single-new-prime rows, other-scale rows, untouched rows); the
    three add up to the partial sum over n <= x_i.
    """
    k = len(sets.scales.xs)
    if not 1 <= scale_index <= k:
        raise ValueError(f"scale_index must be in [1, {k}]")
    idx = scale_index - 1
    v = _f_values_vector(sampler.seed, sets.table, sampler.model)
    parts = tuple(
        v[rows_i].sum()
        for rows_i in (
            sets.class1_rows[idx],
            sets.class2_rows[idx],
            sets.class3_rows[idx],
        )
    )
    if sampler.model == RADEMACHER:
        return tuple(int(round(float(p))) for p in parts)
    return parts


@dataclass(frozen=True)
class FluctuationReport:
    """Across-trial statistics of the multi-scale decomposition."""

    xs: tuple[int, ...]
    mode: str
    c: float
    trials: int
    seed: int
    sizes: tuple[int, ...]
    candidate_sizes: tuple[int, ...]
    class1_sf: tuple[int, ...]
    beta_exact: tuple[float, ...]
    beta_hat: tuple[float, ...]
    sigma_hat: tuple[float, ...]
    norm_stat_mean: tuple[float, ...]
    s1_mean: tuple[float, ...]
    s2_mean: tuple[float, ...]
    s3_mean: tuple[float, ...]
    s1_sq_mean: tuple[float, ...]
    s2_sq_mean: tuple[float, ...]
    s3_sq_mean: tuple[float, ...]
    max_stat_quantiles: tuple[tuple[float, float], ...]
    threshold_fractions: tuple[tuple[float, float], ...]
    partition_exact: bool
    degenerate_scales: tuple[int, ...]


def lil_scan(
    scales: ScaleSet,
    trials: int = 500,
    seed: int = 0,
    c: float = 0.01,
    sets: PrimeClassSets | None = None,
    table: ValueTable | None = None,
    thresholds: tuple[float, ...] | None = None,
) -> FluctuationReport:
    """Monte Carlo scan of the scale decomposition under Rademacher f.

    Every trial checks the exact three-way partition of each scale's partial
    sum, then the per-scale single-prime sums are studentized by their
    across-trial standard deviation and the maximum over scales is compared
    against the thresholds (default: sqrt(log k)). Scales whose single-prime
    sum never varies are excluded from the maximum and reported.
    """
    if trials < 2:
        raise ValueError("need at least two trials")
    if sets is None:
        sets = build_prime_class_sets(scales, c=c, table=table)
    else:
        if sets.scales != scales:
            raise ValueError("sets were built for different scales")
        c = sets.c
    xs = scales.xs
    k = len(xs)
    if thresholds is None:
        thresholds = (math.sqrt(math.log(k)),)
    xarr = np.array(xs, dtype=np.int64)
    s1 = np.zeros((trials, k))
    s2 = np.zeros((trials, k))
    s3 = np.zeros((trials, k))
    msum = np.zeros((trials, k))
    partition_exact = True
    for t in range(trials):
        v = _f_values_vector(derive_seed(seed, t), sets.table, RADEMACHER)
        cums = np.cumsum(v)
        msum[t] = cums[xarr - 1]
        for i in range(k):
            s1[t, i] = v[sets.class1_rows[i]].sum()
            s2[t, i] = v[sets.class2_rows[i]].sum()
            s3[t, i] = v[sets.class3_rows[i]].sum()
        if not np.array_equal(s1[t] + s2[t] + s3[t], msum[t]):
            partition_exact = False
    lnln = np.log(np.log(xarr.astype(np.float64)))
    norm_stat = np.abs(msum) / np.sqrt(xarr * lnln)
    sigma = s1.std(axis=0, ddof=1)
    beta_hat = s1.var(axis=0, ddof=1) / xarr
    beta_exact = np.array(sets.class1_sf, dtype=np.float64) / xarr
    alive = sigma > 0
    degenerate = tuple(int(i + 1) for i in np.nonzero(~alive)[0])
    if alive.any():
        stud = np.abs(s1[:, alive]) / sigma[alive]
        max_stud = stud.max(axis=1)
    else:
        max_stud = np.zeros(trials)
    qs = (0.1, 0.25, 0.5, 0.75, 0.9)
    quants = tuple((float(q), float(np.quantile(max_stud, q))) for q in qs)
    fractions = tuple((float(u), float((max_stud > u).mean())) for u in thresholds)
    return FluctuationReport(
        xs=xs,
        mode=scales.mode,
        c=c,
        trials=trials,
        seed=seed,
        sizes=sets.sizes,
        candidate_sizes=sets.candidate_sizes,
        class1_sf=sets.class1_sf,
        beta_exact=tuple(float(b) for b in beta_exact),
        beta_hat=tuple(float(b) for b in beta_hat),
        sigma_hat=tuple(float(s) for s in sigma),
        norm_stat_mean=tuple(float(m) for m in norm_stat.mean(axis=0)),
        s1_mean=tuple(float(m) for m in s1.mean(axis=0)),
        s2_mean=tuple(float(m) for m in s2.mean(axis=0)),
        s3_mean=tuple(float(m) for m in s3.mean(axis=0)),
        s1_sq_mean=tuple(float(m) for m in (s1**2).mean(axis=0)),
        s2_sq_mean=tuple(float(m) for m in (s2**2).mean(axis=0)),
        s3_sq_mean=tuple(float(m) for m in (s3**2).mean(axis=0)),
        max_stat_quantiles=quants,
        threshold_fractions=fractions,
        partition_exact=partition_exact,
        degenerate_scales=degenerate,
    )

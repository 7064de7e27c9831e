"""Random multiplicative functions and Monte Carlo partial-sum statistics.

Prime signs/angles come from a counter-based hash (the splitmix64 finalizer)
of (seed, prime), so a sampler is a pure function of its seed: no state, no
order dependence, and the scalar and vectorized paths are bit-identical.
Rademacher samplers give f(p) = +-1 i.i.d. with f supported on squarefree
values; Steinhaus samplers give f(p) uniform on the unit circle extended
completely multiplicatively.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DomainError
from .moments import second_moment_exact, _value_multiplicities
from .poly import IRREDUCIBLE_QUADRATIC, LINEAR_FACTORS, IntPolynomial, classify, is_admissible
from .sieve import ValueRecord, ValueTable, kappa_euler, sieve_values

RADEMACHER = "rademacher"
STEINHAUS = "steinhaus"
_MODELS = (RADEMACHER, STEINHAUS)

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SEED_TWEAK = 0xA0761D6478BD642F
_PRIME_TWEAK = 0xE7037ED1A0B428DB
_MIX_C1 = 0xBF58476D1CE4E5B9
_MIX_C2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit word."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_C1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_C2) & _MASK
    return z ^ (z >> 31)


def _mix64_u64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX_C1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX_C2)
    return z ^ (z >> np.uint64(31))


def prime_hash(seed: int, p: int) -> int:
    """64-bit hash of (seed, p); the sole source of randomness for f(p)."""
    return mix64(mix64(p ^ _PRIME_TWEAK) ^ mix64(seed ^ _SEED_TWEAK))


def derive_seed(seed: int, index: int) -> int:
    """Stream seed for trial number index, independent across indices."""
    if index < 0:
        raise ValueError("index must be >= 0")
    return mix64((seed + (index + 1) * _GOLDEN) & _MASK)


def _angle_fraction(h: int) -> float:
    return (h >> 11) * 2.0**-53


@dataclass(frozen=True)
class RmfSampler:
    """One realization of a random multiplicative function.

    Frozen and hash-driven: f(p) depends only on (seed, model, p), so values
    can be queried in any order, in parallel, or recomputed later.
    """

    seed: int
    model: str = RADEMACHER

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}")
        object.__setattr__(self, "seed", int(self.seed) & _MASK)

    def f_prime(self, p: int):
        h = prime_hash(self.seed, p)
        if self.model == RADEMACHER:
            return 1 if (h >> 63) == 0 else -1
        return cmath.exp(2j * cmath.pi * _angle_fraction(h))

    def derive(self, index: int) -> "RmfSampler":
        return RmfSampler(derive_seed(self.seed, index), self.model)


def f_value(sampler: RmfSampler, record: ValueRecord):
    """f at one table record: int for Rademacher, complex for Steinhaus."""
    if sampler.model == RADEMACHER:
        if not record.is_squarefree:
            return 0
        out = 1
        for p, _ in record.factors:
            out *= sampler.f_prime(p)
        return out
    frac = 0.0
    for p, e in record.factors:
        frac += e * _angle_fraction(prime_hash(sampler.seed, p))
    return cmath.exp(2j * cmath.pi * (frac % 1.0))


def _vector_ctx(table: ValueTable, model: str) -> dict:
    """Cached per-table arrays for the vectorized f evaluation."""
    cache = table.__dict__.setdefault("_rmf_ctx", {})
    if model in cache:
        return cache[model]
    if isinstance(table.values, list):
        raise TypeError("vectorized path requires an int64 table")
    primes, inv = table.prime_index()
    lengths = np.diff(table.row_ptr)
    ctx = {
        "n": table.n_max,
        "pm": _mix64_u64(primes.astype(np.uint64) ^ np.uint64(_PRIME_TWEAK)),
        "unit_rows": np.nonzero(lengths == 0)[0],
    }
    if model == RADEMACHER:
        keep = np.asarray(table.is_squarefree) & (lengths > 0)
        ctx["rows"] = np.nonzero(keep)[0]
        ctx["flat"] = inv[np.repeat(keep, lengths)]
        kept_len = lengths[keep]
        ctx["starts"] = np.concatenate(([0], np.cumsum(kept_len)[:-1])).astype(np.int64)
    else:
        nonempty = lengths > 0
        ctx["rows"] = np.nonzero(nonempty)[0]
        ctx["flat"] = inv
        ctx["exps"] = table.flat_exps.astype(np.float64)
        ctx["starts"] = table.row_ptr[:-1][nonempty].astype(np.int64)
    cache[model] = ctx
    return ctx


def _f_values_vector(seed: int, table: ValueTable, model: str) -> np.ndarray:
    """f(P(n)) for n = 1..N as one array; rows with f = 0 stay zero."""
    ctx = _vector_ctx(table, model)
    s0 = np.uint64(mix64(seed ^ _SEED_TWEAK))
    h = _mix64_u64(ctx["pm"] ^ s0)
    if model == RADEMACHER:
        eps = np.where((h >> np.uint64(63)) == 0, 1.0, -1.0)
        out = np.zeros(ctx["n"], dtype=np.float64)
        if len(ctx["flat"]):
            out[ctx["rows"]] = np.multiply.reduceat(eps[ctx["flat"]], ctx["starts"])
        out[ctx["unit_rows"]] = 1.0
        return out
    frac = (h >> np.uint64(11)).astype(np.float64) * 2.0**-53
    contrib = frac[ctx["flat"]] * ctx["exps"]
    out = np.zeros(ctx["n"], dtype=np.complex128)
    if len(contrib):
        sums = np.add.reduceat(contrib, ctx["starts"])
        out[ctx["rows"]] = np.exp(2j * np.pi * sums)
    out[ctx["unit_rows"]] = 1.0
    return out


def partial_sum(sampler: RmfSampler, table: ValueTable):
    """Sum of f(P(n)) over n = 1..N: exact int for Rademacher."""
    if isinstance(table.values, list):
        total = sum(f_value(sampler, rec) for rec in table)
        return total
    v = _f_values_vector(sampler.seed, table, sampler.model)
    if sampler.model == RADEMACHER:
        return int(round(float(v.sum())))
    return complex(v.sum())


def partial_sum_by_class(sampler: RmfSampler, table: ValueTable) -> dict:
    """Partial sum split by largest prime factor of the value.

    Keys are the class primes, with None for the unit class (value 1). The
    dict values sum to partial_sum exactly; non-squarefree rows contribute
    zero under the Rademacher model but land in their class regardless.
    """
    if isinstance(table.values, list):
        out: dict = {}
        for rec in table:
            key = rec.largest_prime
            out[key] = out.get(key, 0) + f_value(sampler, rec)
        return out
    v = _f_values_vector(sampler.seed, table, sampler.model)
    u, invc = np.unique(table.largest, return_inverse=True)
    sums = np.zeros(len(u), dtype=v.dtype)
    np.add.at(sums, invc, v)
    result: dict = {}
    for lp, s in zip(u.tolist(), sums.tolist()):
        key = None if lp == 0 else int(lp)
        if sampler.model == RADEMACHER:
            result[key] = int(round(s))
        else:
            result[key] = s
    return result


@dataclass(frozen=True)
class CltReport:
    """Summary statistics of Monte Carlo normalized partial sums."""

    poly: str
    n_max: int
    trials: int
    seed: int
    model: str
    normalization: str
    normalizer: float
    outside_proven_class: bool
    mean_real: float
    mean_imag: float
    m2: float
    m4: float
    ks: float
    ks_vacuous: bool
    raw_m2: float
    raw_m4: float
    hist_edges: tuple[float, ...]
    hist_counts: tuple[int, ...]


def _ks_against_normal(x: np.ndarray) -> float:
    xs = np.sort(x)
    n = len(xs)
    cdf = ndtr(xs)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def monte_carlo_clt(
    P: IntPolynomial,
    n_max: int,
    trials: int,
    seed: int = 0,
    model: str = RADEMACHER,
    normalization: str = "exact",
    table: ValueTable | None = None,
    prime_bound: int = 100_000,
) -> CltReport:
    """Monte Carlo check of the central limit behavior of f-partial sums.

    normalization 'exact' divides by the exact L2 norm of the sum (the
    square root of the ordered equal-value squarefree pair count, or of the
    all-value count for Steinhaus); 'kappa' divides by sqrt(kappa * N)
    (sqrt(N) for Steinhaus), which requires an admissible polynomial.
    The Kolmogorov statistic is computed against the standard normal (the
    real part scaled by sqrt(2) for Steinhaus) and flagged vacuous below 100
    trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if model not in _MODELS:
        raise ValueError(f"model must be one of {_MODELS}")
    if normalization not in ("exact", "kappa"):
        raise ValueError("normalization must be 'exact' or 'kappa'")
    if table is None:
        table = sieve_values(P, n_max)
    elif table.n_max != n_max or table.poly.coeffs != P.coeffs:
        raise ValueError("supplied table does not match the polynomial and range")
    kind = classify(P).kind
    outside = kind not in (LINEAR_FACTORS, IRREDUCIBLE_QUADRATIC) or not is_admissible(P)
    if normalization == "kappa":
        if model == RADEMACHER:
            normalizer = float(np.sqrt(kappa_euler(P, prime_bound) * n_max))
        else:
            if not is_admissible(P):
                raise DomainError("kappa normalization needs an admissible polynomial")
            normalizer = float(np.sqrt(n_max))
    else:
        if model == RADEMACHER:
            b = second_moment_exact(table)
        else:
            b = sum(m * m for m in _value_multiplicities_all(table).values())
        if b == 0:
            raise DomainError("partial sum is identically zero on this range")
        normalizer = float(np.sqrt(b))

    object_mode = isinstance(table.values, list)
    if model == RADEMACHER:
        raw = np.zeros(trials, dtype=np.float64)
    else:
        raw = np.zeros(trials, dtype=np.complex128)
    base = RmfSampler(seed, model)
    for t in range(trials):
        s = base.derive(t)
        if object_mode:
            raw[t] = partial_sum(s, table)
        else:
            raw[t] = _f_values_vector(s.seed, table, model).sum()
    z = raw / normalizer
    if model == RADEMACHER:
        mean_real, mean_imag = float(z.mean()), 0.0
        m2 = float(np.mean(z**2))
        m4 = float(np.mean(z**4))
        raw_m2 = float(np.mean(raw**2))
        raw_m4 = float(np.mean(raw**4))
        ks_input = z
    else:
        mean_real, mean_imag = float(z.real.mean()), float(z.imag.mean())
        a2 = np.abs(z) ** 2
        m2 = float(a2.mean())
        m4 = float((a2**2).mean())
        ra = np.abs(raw) ** 2
        raw_m2 = float(ra.mean())
        raw_m4 = float((ra**2).mean())
        ks_input = z.real * np.sqrt(2.0)
    ks = _ks_against_normal(np.asarray(ks_input, dtype=np.float64))
    counts, edges = np.histogram(
        np.asarray(ks_input, dtype=np.float64), bins=np.linspace(-5.0, 5.0, 41)
    )
    return CltReport(
        poly=str(P),
        n_max=n_max,
        trials=trials,
        seed=seed,
        model=model,
        normalization=normalization,
        normalizer=normalizer,
        outside_proven_class=outside,
        mean_real=mean_real,
        mean_imag=mean_imag,
        m2=m2,
        m4=m4,
        ks=ks,
        ks_vacuous=trials < 100,
        raw_m2=raw_m2,
        raw_m4=raw_m4,
        hist_edges=tuple(float(e) for e in edges),
        hist_counts=tuple(int(c) for c in counts),
    )


def _value_multiplicities_all(table: ValueTable) -> dict:
    """Multiplicity of every value, squarefree or not."""
    if isinstance(table.values, list):
        out: dict = {}
        for v in table.values:
            out[v] = out.get(v, 0) + 1
        return out
    u, c = np.unique(table.values, return_counts=True)
    return {int(v): int(k) for v, k in zip(u, c)}

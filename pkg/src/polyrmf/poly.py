"""Integer polynomials: exact evaluation, classification, and roots modulo m.

Coefficients are stored ascending (constant term first) and all arithmetic on
polynomial values is exact Python-integer arithmetic. Root finding modulo a
prime uses an exhaustive residue scan for small moduli and closed-form solving
(linear inversion, quadratic formula with a Tonelli-Shanks square root) for
large primes; the two paths agree exactly and are cross-checked in tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .intmath import (
    crt_pair,
    inv_mod,
    is_perfect_square,
    is_squarefree_int,
    sqrt_mod_prime,
    trial_factorize,
)

LINEAR_FACTORS = "distinct_linear_factors"
IRREDUCIBLE_QUADRATIC = "irreducible_quadratic"
UNSUPPORTED = "unsupported"

# below this, root finding mod p just scans every residue
_SCAN_LIMIT = 1024


@dataclass(frozen=True)
class PolyClass:
    """Structural class of a polynomial of degree >= 2.

    kind is one of LINEAR_FACTORS (product of pairwise non-proportional
    integer linear factors a*x + b, listed in factors), IRREDUCIBLE_QUADRATIC,
    or UNSUPPORTED (everything else: repeated factors, irreducible degree >= 3,
    mixed factorizations).
    """

    kind: str
    factors: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients ascending; degree >= 1."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs) -> None:
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2:
            raise ValueError("polynomial must have degree at least 1")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_string(cls, text: str) -> "IntPolynomial":
        """Parse a comma-separated ascending coefficient list, e.g. '1,0,1'."""
        return cls([int(part) for part in text.split(",")])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def eval(self, n: int) -> int:
        """P(n) by Horner's rule, exact."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    __call__ = eval

    def derivative_coeffs(self) -> tuple[int, ...]:
        return tuple(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


def fixed_divisor(P: IntPolynomial) -> int:
    """gcd of P(n) over all integers n, computed as gcd(P(0), ..., P(d)).

    The gcd of any d+1 consecutive values already equals the gcd over all of
    Z, by finite differences.
    """
    g = 0
    for n in range(P.degree + 1):
        g = math.gcd(g, P(n))
    if g == 0:
        raise ValueError("polynomial vanishes at 0..d; cannot happen for degree >= 1")
    return g


def is_admissible(P: IntPolynomial) -> bool:
    """True when no prime p has p**2 dividing every value P(n).

    Equivalent to the fixed divisor being squarefree, since p**2 | P(n) for
    all n exactly when p**2 divides gcd of all values.
    """
    return is_squarefree_int(fixed_divisor(P))


def _is_rational_root(coeffs: tuple[int, ...], num: int, den: int) -> bool:
    # P(num/den) == 0 iff sum c_i num^i den^(d-i) == 0
    d = len(coeffs) - 1
    acc = 0
    for i, c in enumerate(coeffs):
        acc += c * num**i * den ** (d - i)
    return acc == 0


def _positive_divisors(n: int) -> list[int]:
    n = abs(n)
    small, big = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                big.append(n // i)
        i += 1
    return small + big[::-1]


def _find_rational_root(coeffs: tuple[int, ...]) -> tuple[int, int] | None:
    """A root num/den of the polynomial, in lowest terms with den > 0, or None."""
    if coeffs[0] == 0:
        return (0, 1)
    for den in _positive_divisors(coeffs[-1]):
        for num in _positive_divisors(coeffs[0]):
            if math.gcd(num, den) != 1:
                continue
            for s in (num, -num):
                if _is_rational_root(coeffs, s, den):
                    return (s, den)
    return None


def _divide_linear(coeffs: tuple[int, ...], den: int, num: int) -> tuple[int, ...]:
    """Quotient of the polynomial by (den*x - num); the division must be exact."""
    work = [Fraction(c) for c in reversed(coeffs)]  # descending
    quot: list[Fraction] = []
    carry = Fraction(0)
    for c in work[:-1]:
        q = (c + carry) / den
        quot.append(q)
        carry = q * num
    assert work[-1] + carry == 0, "linear factor does not divide exactly"
    out = []
    for q in reversed(quot):
        assert q.denominator == 1, "quotient is not an integer polynomial"
        out.append(int(q))
    return tuple(out)


def _split_linear_factors(P: IntPolynomial) -> tuple[tuple[int, int], ...] | None:
    """Write P as a product of integer linear factors (a, b) ~ a*x + b, or None.

    The returned factors multiply out to P exactly; any constant content is
    absorbed into the first factor.
    """
    work = P.coeffs
    factors: list[tuple[int, int]] = []
    while len(work) > 1:
        root = _find_rational_root(work)
        if root is None:
            return None
        num, den = root
        factors.append((den, -num))
        work = _divide_linear(work, den, num)
    const = work[0]
    if const != 1:
        a, b = factors[0]
        factors[0] = (a * const, b * const)
    return tuple(factors)


@lru_cache(maxsize=512)
def classify(P: IntPolynomial) -> PolyClass:
    """Classify a polynomial of degree >= 2 by its factorization over Z."""
    if P.degree < 2:
        raise ValueError("classification needs degree >= 2")
    factors = _split_linear_factors(P)
    if factors is not None:
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                (a1, b1), (a2, b2) = factors[i], factors[j]
                if a1 * b2 - a2 * b1 == 0:  # proportional: same root
                    return PolyClass(UNSUPPORTED)
        return PolyClass(LINEAR_FACTORS, factors)
    if P.degree == 2:
        c, b, a = P.coeffs
        if not is_perfect_square(b * b - 4 * a * c):
            return PolyClass(IRREDUCIBLE_QUADRATIC)
    return PolyClass(UNSUPPORTED)


# ---------------------------------------------------------------------------
# roots modulo primes, prime squares, and squarefree m


def _roots_scan_small(coeffs_mod: list[int], p: int) -> list[int]:
    roots = []
    for x in range(p):
        acc = 0
        for c in reversed(coeffs_mod):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


def _roots_scan_vector(coeffs_mod: list[int], p: int) -> list[int]:
    # Horner over all residues at once; safe in int64 while p*p < 2**63
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs_mod):
        acc = (acc * x + c) % p
    return np.nonzero(acc == 0)[0].tolist()


def _roots_scan(coeffs_mod: list[int], p: int) -> list[int]:
    if p <= 64:
        return _roots_scan_small(coeffs_mod, p)
    return _roots_scan_vector(coeffs_mod, p)


def _roots_linear(a: int, b: int, p: int) -> list[int] | range:
    a %= p
    b %= p
    if a == 0:
        return range(p) if b == 0 else []
    return [(-b) * inv_mod(a, p) % p]


def _roots_quadratic(c0: int, c1: int, c2: int, p: int) -> list[int]:
    """Roots of c2 x^2 + c1 x + c0 mod an odd prime p with p not dividing c2."""
    disc = (c1 * c1 - 4 * c2 * c0) % p
    s = sqrt_mod_prime(disc, p)
    if s is None:
        return []
    inv2a = inv_mod(2 * c2 % p, p)
    r1 = (-c1 + s) * inv2a % p
    r2 = (-c1 - s) * inv2a % p
    return sorted({r1, r2})


def roots_mod_prime(P: IntPolynomial, p: int) -> list[int] | range:
    """Sorted roots of P mod prime p; range(p) when P vanishes identically mod p."""
    coeffs_mod = [c % p for c in P.coeffs]
    if all(c == 0 for c in coeffs_mod):
        return range(p)
    if p <= _SCAN_LIMIT:
        return _roots_scan(coeffs_mod, p)
    deg = P.degree
    if deg == 1:
        return _roots_linear(P.coeffs[1], P.coeffs[0], p)
    cls = classify(P)
    if cls.kind == LINEAR_FACTORS:
        roots: set[int] = set()
        for a, b in cls.factors:
            r = _roots_linear(a, b, p)
            if isinstance(r, range):
                return r
            roots.update(r)
        return sorted(roots)
    if deg == 2:
        c0, c1, c2 = coeffs_mod
        if c2 == 0:
            r = _roots_linear(c1, c0, p)
            return r if isinstance(r, range) else sorted(r)
        return _roots_quadratic(c0, c1, c2, p)
    return _roots_scan(coeffs_mod, p)


def _lift_roots_prime_square(P: IntPolynomial, p: int, base_roots) -> list[int]:
    """Scan the residues mod p**2 lying over each root mod p.

    Residues x with P(x) != 0 mod p cannot be roots mod p**2, so only the p
    lifts r + t*p of each base root are scanned. Each candidate is tested via
    the exact expansion P(r + t*p) = P(r) + t*p*P'(r) (mod p**2); all terms
    stay below p**3 so the int64 vector arithmetic is exact for p <= 10**5.
    """
    m = p * p
    roots = []
    dcoeffs = P.derivative_coeffs()
    for r in base_roots:
        r = int(r)
        a0 = P(r) % m
        d = 0
        for c in reversed(dcoeffs):
            d = (d * r + c) % p
        if p <= 64:
            for t in range(p):
                if (a0 + t * p * d) % m == 0:
                    roots.append(r + t * p)
        else:
            t = np.arange(p, dtype=np.int64)
            vals = (a0 + t * (p * d)) % m
            roots.extend((r + t[vals == 0] * p).tolist())
    return sorted(roots)


def _roots_mod_prime_square(P: IntPolynomial, p: int) -> list[int]:
    base = roots_mod_prime(P, p)
    if isinstance(base, range):
        # P = p*Q mod p**2; scan everything (only content primes land here)
        m = p * p
        if m > 1 << 22:
            raise ValueError(f"residue scan mod {p}^2 too large")
        coeffs_mod = [c % m for c in P.coeffs]
        x = np.arange(m, dtype=np.int64)
        acc = np.zeros(m, dtype=np.int64)
        for c in reversed(coeffs_mod):
            acc = (acc * x + c) % m
        return np.nonzero(acc == 0)[0].tolist()
    if not base:
        return []
    return _lift_roots_prime_square(P, p, base)


def count_roots_mod_prime_square(P: IntPolynomial, p: int) -> int:
    """Number of residues r mod p**2 with P(r) = 0 mod p**2."""
    return len(_roots_mod_prime_square(P, p))


def roots_mod(P: IntPolynomial, m: int) -> list[int]:
    """Sorted residues r in [0, m) with P(r) = 0 mod m.

    m must be squarefree or the square of a prime; these are the only two
    shapes the rest of the package needs. Root sets are found per prime (or
    prime square) and recombined with the Chinese Remainder Theorem, so the
    count is multiplicative over coprime factors.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return [0]
    fac = trial_factorize(m)
    if len(fac) == 1 and fac[0][1] == 2:
        return _roots_mod_prime_square(P, fac[0][0])
    if any(e != 1 for _, e in fac):
        raise ValueError("modulus must be squarefree or a prime square")
    residues = [0]
    modulus = 1
    for p, _ in fac:
        pr = roots_mod_prime(P, p)
        pr_list = list(pr)
        if not pr_list:
            return []
        residues = [crt_pair(r, modulus, s, p) for r in residues for s in pr_list]
        modulus *= p
    return sorted(residues)

"""Smooth numbers and the largest prime factor of n^2 + 1.

psi(x, y) counts integers up to x with no prime factor above y; the
proportion psi(x, x^(1/u)) / x approaches the Dickman function at u.
The second half looks at P+(n^2 + 1): for well over half of all n it
exceeds n itself, which is what makes the single-witness prime sets of
the fluctuation construction so plentiful.
"""
import math

from polyrmf.poly import IntPolynomial
from polyrmf.sieve import largest_prime_stats, sieve_values, smooth_count

# Dickman rho at u = 1, 1.5, 2, 2.5, 3 (rho(2) = 1 - ln 2, etc.)
_RHO = {1.0: 1.0, 1.5: 0.5945, 2.0: 0.3069, 2.5: 0.1303, 3.0: 0.0486}


def main() -> None:
    x = 10**6
    print(f"x = {x}")
    print(f"{'u':>4} {'y=x^(1/u)':>10} {'psi(x,y)':>9} {'psi/x':>7} {'rho(u)':>7}")
    for u, rho in _RHO.items():
        y = round(x ** (1 / u))
        c = smooth_count(x, y)
        print(f"{u:>4} {y:>10} {c:>9} {c / x:>7.4f} {rho:>7.4f}")

    P = IntPolynomial((1, 0, 1))
    stats = largest_prime_stats(sieve_values(P, 10**5))
    print()
    print(f"P = {P}, n up to {stats.n_max}")
    print(f"fraction with P+(P(n)) > n:          {stats.proportion_gt_n:.4f}")
    print(f"fraction with P+(P(n)) > cn log n    {stats.proportion_gt_nlogn:.4f}"
          f"  (c = {stats.c})")
    mass = sum(c for e, c in zip(stats.hist_edges, stats.hist_counts) if e >= 1.0)
    print(f"rows with log P+ / log n >= 1: {mass} "
          f"of {sum(stats.hist_counts)} histogrammed")


if __name__ == "__main__":
    main()

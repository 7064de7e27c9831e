"""Integral points on a*(x^2+1) = b*(y^2+1) and why they are so rare.

For (a, b) = (1, 2) the equation is the Pell equation x^2 - 2y^2 = 1 and
the solutions below any bound can be listed; each one is roughly 5.8 times
the last, so a box of size N holds only about log N of them. Random (a, b)
pairs almost always admit no solution at all, while the diagonal a = b is
degenerate and matches every x = y.
"""
from polyrmf.curves import exponent_scan, integral_points
from polyrmf.poly import IntPolynomial


def main() -> None:
    P = IntPolynomial((1, 0, 1))
    pts = integral_points(P, 1, 2, 10**6)
    print("x^2 + 1 = 2 (y^2 + 1), solutions with x, y <= 10^6:")
    prev = None
    for x, y in pts:
        ratio = f"   ratio vs previous: {x / prev:.3f}" if prev else ""
        print(f"  x={x:>7}  y={y:>7}{ratio}")
        prev = x

    print()
    scan = exponent_scan(P, n_values=(10**3, 10**4), ab_samples=200, seed=1)
    for i, n in enumerate(scan.n_values):
        nonzero = sum(1 for c in scan.counts_by_n[i] if c)
        print(f"N = {n:>6}: {nonzero}/{len(scan.pairs)} random pairs have any "
              f"solution, max count {scan.max_count[i]}, "
              f"diagonal count {scan.diagonal_count[i]}")
    a, b, count, sample = scan.top_examples[0]
    if count:
        print(f"busiest pair (a, b) = ({a}, {b}) with {count} points, "
              f"first few: {list(sample[:3])}")
    else:
        print("no sampled off-diagonal pair admits a single solution")


if __name__ == "__main__":
    main()

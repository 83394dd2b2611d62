"""Exact integer sequences and the closed-form growth machinery.

Everything here is exact: Fibonacci identities are checked in the quadratic
integer ring Z[sqrt(5)], ratio monotonicity uses integer cross products, and
the named growth constants live in one table with their provenance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def fib(n: int) -> int:
    if n < 0:
        raise ValueError("negative index")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def baxter(n: int) -> int:
    """Baxter numbers via the standard triple-binomial sum."""
    if n == 0:
        return 1
    c1 = math.comb(n + 1, 1)
    c2 = math.comb(n + 1, 2)
    total = Fraction(0)
    for k in range(1, n + 1):
        total += Fraction(
            math.comb(n + 1, k - 1) * math.comb(n + 1, k) * math.comb(n + 1, k + 1),
            c1 * c2,
        )
    assert total.denominator == 1
    return int(total)


def sparse_sequences(n: int) -> list[tuple[int, ...]]:
    """All 0-1 sequences of length n with no two consecutive ones."""
    if n == 0:
        return [()]
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        prefix.append(0)
        rec(prefix)
        prefix.pop()
        if not prefix or prefix[-1] == 0:
            prefix.append(1)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def sparse_count_with_one_at(n: int, i: int) -> int:
    """Number of sparse sequences of length n whose i-th entry (1-based) is
    one; a product of two Fibonacci numbers."""
    return fib(i) * fib(n + 1 - i)


def _binet_exact(n: int) -> bool:
    """Check the closed form in Z[sqrt5]: (1+sqrt5)^n - (1-sqrt5)^n equals
    2^n sqrt5 F_n."""
    a, b = 1, 0  # a + b sqrt5 = 1
    c, d = 1, 0
    for _ in range(n):
        a, b = a + 5 * b, a + b  # times (1 + sqrt5)
        c, d = c - 5 * d, c - d  # times (1 - sqrt5)
    da, db = a - c, b - d
    return da == 0 and db == (1 << n) * fib(n)


def fib_suite(n: int) -> dict:
    """All the Fibonacci facts used by the strip counting, verified exactly
    for one index."""
    conv = sum(fib(i) * fib(n - i) for i in range(n + 1))
    conv_closed = Fraction(n * (fib(n + 1) + fib(n - 1)) - fib(n), 5) if n >= 1 else Fraction(0)
    marked = sum(sparse_count_with_one_at(n, i) for i in range(1, n + 1))
    marked_closed = Fraction(2 * (n + 1) * fib(n) + n * fib(n + 1), 5)
    report = {
        "n": n,
        "fib": fib(n),
        "binet_exact": _binet_exact(n),
        "convolution": conv,
        "convolution_closed": conv_closed,
        "convolution_ok": conv == conv_closed,
        "marked_sum": marked,
        "marked_closed": marked_closed,
        "marked_ok": marked == marked_closed,
        "sparse_count_ok": None,
    }
    if n <= 20:
        seqs = sparse_sequences(n)
        ok = len(seqs) == fib(n + 2)
        for i in range(1, n + 1):
            ok = ok and sum(s[i - 1] for s in seqs) == sparse_count_with_one_at(n, i)
        report["sparse_count_ok"] = ok
    return report


# -- crossover recursion ---------------------------------------------------------


def crossover_pairs(kmax: int) -> list[tuple[int, int]]:
    """(x_k, y_k): extensions of valid and invalid boundary configurations of
    the k-fold crossover gadget; x/y decreases strictly toward the positive
    root of 4t^2 - t - 2."""
    pairs = [(1, 1)]
    for _ in range(kmax):
        x, y = pairs[-1]
        pairs.append((4 * x + 2 * y, 4 * x + 3 * y))
    return pairs


def crossover_certificate(kmax: int) -> dict:
    pairs = crossover_pairs(kmax)
    decreasing = all(
        x1 * y2 > x2 * y1  # x1/y1 > x2/y2
        for (x1, y1), (x2, y2) in zip(pairs, pairs[1:])
    )
    # x/y > c where c is the positive root of 4t^2 - t - 2 = 0:
    # equivalent to 4x^2 - xy - 2y^2 > 0 for positive x, y.
    above_root = all(4 * x * x - x * y - 2 * y * y > 0 for x, y in pairs)
    return {
        "pairs_checked": kmax + 1,
        "first": pairs[: 3],
        "strictly_decreasing": decreasing,
        "above_limit_root": above_root,
    }


# -- named constants -------------------------------------------------------------


def growth_constants() -> dict[str, dict]:
    """Reference growth rates with provenance; values only, never used as
    acceptance ground truth."""
    return {
        "lieb_square_ice": {
            "value": 8 * math.sqrt(3) / 9,
            "about": "per-vertex Eulerian orientations of the square torus grid (Lieb)",
        },
        "baxter_triangular_ice": {
            "value": 3 * math.sqrt(3) / 2,
            "about": "per-vertex Eulerian orientations of the triangular torus grid (Baxter)",
        },
        "grid_matchings": {
            "value": math.exp(0.29),
            "about": "per-vertex perfect matchings of large square grids (Kasteleyn)",
        },
        "spanning_trees_planar_lower": {"value": 5.02, "about": "max spanning trees of planar graphs, lower"},
        "spanning_trees_planar_upper": {"value": 5.34, "about": "max spanning trees of planar graphs, upper"},
        "any_alpha_upper": {"value": 3.73, "about": "orientations with arbitrary demands, upper"},
        "any_alpha_lower": {"value": 2.598, "about": "orientations with arbitrary demands, lower (triangular ice)"},
        "woods_triangulation_upper": {"value": 3.56, "about": "woods on triangulations, upper"},
        "woods_triangulation_lower": {"value": 2.37, "about": "woods on triangulations, lower"},
        "woods_3connected_upper": {"value": 8.0, "about": "woods on 3-connected maps, upper"},
        "woods_grid": {"value": 3.209, "about": "woods on the augmented square grid"},
        "two_orientations_upper": {"value": 1.91, "about": "2-orientations of quadrangulations, upper"},
        "bipolar_planar_upper": {"value": 3.97, "about": "bipolar orientations of planar maps, upper"},
        "bipolar_planar_lower": {"value": 2.91, "about": "bipolar orientations of planar maps, lower"},
        "bipolar_grid_lower": {"value": 2.18, "about": "bipolar orientations of square grids, lower"},
        "bipolar_grid_upper": {"value": 2.619, "about": "bipolar orientations of square grids, upper"},
        "golden_ratio": {"value": (1 + math.sqrt(5)) / 2, "about": "sparse-sequence growth"},
        "eigen_ratio_bound": {"value": 1.537, "about": "certified 2-orientation growth from the eigenvalue ratio"},
    }


def woods_total_by_size(n: int) -> int:
    """Woods summed over all triangulations with n vertices: a difference of
    Catalan products (non-crossing Dyck path pairs)."""
    return catalan(n + 2) * catalan(n) - catalan(n + 1) ** 2

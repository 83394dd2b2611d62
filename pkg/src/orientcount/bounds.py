"""Upper-bound evaluators for orientation counts.

Every bound is reported as an exact rational (or a float where the closed
form is irrational) together with the inputs it was computed from, and a
report can be asked to verify that a measured count stays below it.
Independent sets are found exactly by branch and bound for small maps,
greedily otherwise; a greedy set only weakens the reported bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .maps import OutDegreeSpec, PlanarMap


@dataclass
class BoundReport:
    name: str
    value: Fraction | float
    inputs: dict
    measured: Optional[int] = None

    @property
    def dominates(self) -> Optional[bool]:
        if self.measured is None:
            return None
        return self.measured <= self.value


def maximum_independent_set(m: PlanarMap, exact_cap: int = 25) -> list[int]:
    neighbors = [set(m.neighbors(v)) for v in range(m.n)]
    if m.n > exact_cap:
        order = sorted(range(m.n), key=lambda v: len(neighbors[v]))
        chosen, blocked = [], set()
        for v in order:
            if v not in blocked:
                chosen.append(v)
                blocked.add(v)
                blocked |= neighbors[v]
        return chosen

    best: list[int] = []

    def rec(candidates: list[int], acc: list[int]):
        nonlocal best
        if len(acc) + len(candidates) <= len(best):
            return
        if not candidates:
            if len(acc) > len(best):
                best = acc[:]
            return
        v = candidates[0]
        rest = candidates[1:]
        rec([u for u in rest if u not in neighbors[v]], acc + [v])
        rec(rest, acc)

    rec(list(range(m.n)), [])
    return best


def spanning_forest_size(m: PlanarMap) -> int:
    seen = set()
    edges = 0
    for root in range(m.n):
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for w in m.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    edges += 1
                    stack.append(w)
    return edges


def forest_bound(m: PlanarMap) -> BoundReport:
    """Fixing the edges outside a cycle-free set leaves at most one way to
    finish, so 2^(m - |forest|) bounds any demand's count."""
    a = spanning_forest_size(m)
    return BoundReport(
        "forest", Fraction(2) ** (m.m - a), {"m": m.m, "forest": a}
    )


def independent_set_bound(
    m: PlanarMap, spec: OutDegreeSpec, independent: Optional[list[int]] = None
) -> BoundReport:
    """2^(2n-4-|I2|) times the per-vertex window factors over an independent
    set; degree-2 members tighten the exponent, the others contribute
    binomial(d, a) / 2^(d-1)."""
    if independent is None:
        independent = maximum_independent_set(m)
    i2 = [v for v in independent if m.degree(v) == 2]
    i1 = [v for v in independent if m.degree(v) != 2]
    value = Fraction(2) ** (2 * m.n - 4 - len(i2))
    for v in i1:
        d = m.degree(v)
        a = spec.get(v)
        a = d // 2 if a is None else a
        value *= Fraction(math.comb(d, a), 2 ** (d - 1))
    return BoundReport(
        "independent-set",
        value,
        {"n": m.n, "I1": len(i1), "I2": len(i2), "independent": list(independent)},
    )


def universal_exponential_bound(m: PlanarMap) -> BoundReport:
    """3.73^n for any demands on a planar map (window factors are at most 3/4
    over an independent set of size n/4)."""
    return BoundReport("universal-3.73", Fraction(373, 100) ** m.n, {"n": m.n})


def triangulation_wood_bound(m: PlanarMap) -> BoundReport:
    """3.56^n for woods on triangulations: the demand-3 window factor is at
    most 5/8."""
    return BoundReport("triangulation-3.56", Fraction(356, 100) ** m.n, {"n": m.n})


def quadrangulation_bound(m: PlanarMap) -> BoundReport:
    """2^n (3/4)^(n/6) <= 1.91^n for 2-orientations of quadrangulations."""
    value = 2.0 ** m.n * (3 / 4) ** (m.n / 6)
    return BoundReport("quadrangulation-1.91", value, {"n": m.n, "cap": 1.91 ** m.n})


def bipolar_sign_bound(m: PlanarMap) -> BoundReport:
    """Sign vectors injectively encode bipolar orientations: 2^(f-1), and
    with the per-vertex feasibility loss 4^(n-1) 2^(-outer) (31/32)^((n-2)/4)
    which stays under 3.97^n."""
    f_inf = m.face_size(m.outer_face)
    refined = 4.0 ** (m.n - 1) * 2.0 ** (-f_inf) * (31 / 32) ** ((m.n - 2) / 4)
    return BoundReport(
        "bipolar-3.97",
        min(refined, 3.97 ** m.n),
        {"n": m.n, "outer_size": f_inf, "two_to_f_minus_1": Fraction(2) ** (m.f - 1)},
    )


def window_factor_inequalities(dmax: int = 20) -> bool:
    """The two per-vertex window inequalities behind the exponential bounds,
    checked for all degrees up to dmax."""
    ok = True
    for d in range(3, dmax + 1):
        ok = ok and Fraction(math.comb(d, d // 2), 2 ** (d - 1)) <= Fraction(3, 4)
        ok = ok and Fraction(math.comb(d, 3), 2 ** (d - 1)) <= Fraction(5, 8)
    return ok


def corollary_envelope(n_max: int = 10_000) -> bool:
    """2^(2n-4) (3/4)^(n/4) <= 3.73^n numerically for n up to n_max."""
    for n in range(1, n_max + 1):
        lhs = (2 * n - 4) * math.log(2) + (n / 4) * math.log(3 / 4)
        if lhs > n * math.log(3.73) + 1e-12:
            return False
    return True


def bound_reports(
    m: PlanarMap,
    spec: OutDegreeSpec,
    measured: Optional[int] = None,
    kinds: Optional[list[str]] = None,
) -> list[BoundReport]:
    """Every applicable bound for the instance; planar-only bounds are
    skipped for unembedded rotation systems."""
    reports = [forest_bound(m)]
    if m.embedded and not m.has_multi and not m.has_loops:
        reports.append(independent_set_bound(m, spec))
        reports.append(universal_exponential_bound(m))
        if kinds:
            if "triangulation-woods" in kinds:
                reports.append(triangulation_wood_bound(m))
            if "quadrangulation" in kinds:
                reports.append(quadrangulation_bound(m))
            if "bipolar" in kinds:
                reports.append(bipolar_sign_bound(m))
    for r in reports:
        r.measured = measured
    return reports

"""Distributive lattice structure on the set of orientations.

Cover relations come from flipping directed bounded-face cycles: reversing a
counterclockwise facial cycle is a step downward.  The resulting order is
checked, not assumed: we verify connectivity, acyclicity, unique extremes,
existence of all meets and joins, and distributivity via the Birkhoff
representation over join-irreducibles.  Any failure raises LatticeViolation,
which would indicate an engine bug rather than a property of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import (
    EdgeOrientation,
    directed_facial_cycles,
    enumerate_orientations,
    flip,
)
from .errors import CapExceeded, LatticeViolation
from .maps import OutDegreeSpec, PlanarMap


@dataclass
class FlipLattice:
    elements: list[EdgeOrientation]
    covers_down: list[list[int]]  # i -> j when j is obtained by a ccw flip
    minimum: int
    maximum: int
    downsets: Optional[list[int]] = None  # bitmask per element
    meet_table: Optional[list[list[int]]] = None
    join_table: Optional[list[list[int]]] = None
    distributive_checked: bool = False

    def __len__(self):
        return len(self.elements)

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        return bool((self.downsets[b] >> a) & 1)

    def to_dot(self) -> str:
        lines = ["digraph flips {"]
        for i, x in enumerate(self.elements):
            lines.append(f'  x{i} [label="{x.mask:0{x.map.m}b}"];')
        for i, down in enumerate(self.covers_down):
            for j in down:
                lines.append(f"  x{i} -> x{j};")
        lines.append("}")
        return "\n".join(lines)


def build_lattice(
    m: PlanarMap,
    spec: OutDegreeSpec,
    cap: int = 100_000,
    table_cap: int = 5000,
) -> FlipLattice:
    """Enumerate the orientations and assemble their flip order.

    Meets, joins and the distributivity check are only materialized up to
    ``table_cap`` elements (quadratic tables); beyond that the structural
    checks still run.
    """
    elements: list[EdgeOrientation] = []
    index: dict[int, int] = {}
    for x in enumerate_orientations(m, spec):
        index[x.mask] = len(elements)
        elements.append(x)
        if len(elements) > cap:
            raise CapExceeded(f"more than {cap} orientations")
    if not elements:
        raise LatticeViolation("no orientations; empty lattice")

    covers_down = [[] for _ in elements]
    covers_up = [[] for _ in elements]
    for i, x in enumerate(elements):
        for cyc in directed_facial_cycles(x):
            j = index[flip(x, cyc).mask]
            if cyc.chirality == "ccw":
                covers_down[i].append(j)
                covers_up[j].append(i)

    _check_connected(covers_down, covers_up)
    sinks = [i for i, d in enumerate(covers_down) if not d]
    sources = [i for i, u in enumerate(covers_up) if not u]
    if len(sinks) != 1 or len(sources) != 1:
        raise LatticeViolation(
            f"expected unique extremes, found {len(sinks)} minima / {len(sources)} maxima"
        )
    order = _topo_order(covers_down)

    lat = FlipLattice(elements, covers_down, sinks[0], sources[0])
    if len(elements) <= table_cap:
        _build_tables(lat, covers_up, order)
        _check_distributive(lat, covers_down)
        lat.distributive_checked = True
    return lat


def _check_connected(covers_down, covers_up):
    n = len(covers_down)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    k = 1
    while stack:
        v = stack.pop()
        for w in covers_down[v] + covers_up[v]:
            if not seen[w]:
                seen[w] = True
                k += 1
                stack.append(w)
    if k != n:
        raise LatticeViolation("facial flip graph is disconnected")


def _topo_order(covers_down):
    n = len(covers_down)
    indeg = [0] * n
    for down in covers_down:
        for j in down:
            indeg[j] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    order = []
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        order.append(v)
        for j in covers_down[v]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(order) != n:
        raise LatticeViolation("cover relation contains a directed cycle")
    return order  # from maximum side down to minimum


def _build_tables(lat: FlipLattice, covers_up, order):
    n = len(lat.elements)
    down = [0] * n
    for v in reversed(order):  # minimum side first
        mask = 1 << v
        for j in lat.covers_down[v]:
            mask |= down[j]
        down[v] = mask
    up = [0] * n
    for v in order:
        mask = 1 << v
        for j in covers_up[v]:
            mask |= up[j]
        up[v] = mask
    lat.downsets = down

    by_pop_down = {}
    for v in range(n):
        by_pop_down.setdefault(down[v].bit_count(), []).append(v)
    by_pop_up = {}
    for v in range(n):
        by_pop_up.setdefault(up[v].bit_count(), []).append(v)

    def extreme(sets, by_pop, a, b, what):
        inter = sets[a] & sets[b]
        k = inter.bit_count()
        for c in by_pop.get(k, []):
            if sets[c] == inter:
                return c
        raise LatticeViolation(f"{what}({a},{b}) does not exist")

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            mv = extreme(down, by_pop_down, a, b, "meet")
            jv = extreme(up, by_pop_up, a, b, "join")
            meet[a][b] = meet[b][a] = mv
            join[a][b] = join[b][a] = jv
    lat.meet_table = meet
    lat.join_table = join


def _check_distributive(lat: FlipLattice, covers_down):
    """Birkhoff check: represent each element by the join-irreducibles below
    it; the lattice is distributive iff meet and join act as intersection and
    union on these sets."""
    n = len(lat.elements)
    irr = [v for v in range(n) if len(covers_down[v]) == 1]
    rep = [0] * n
    for k, j in enumerate(irr):
        for v in range(n):
            if lat.leq(j, v):
                rep[v] |= 1 << k
    if len(set(rep)) != n:
        raise LatticeViolation("join-irreducible representation is not injective")
    for a in range(n):
        for b in range(a, n):
            if rep[lat.meet_table[a][b]] != rep[a] & rep[b]:
                raise LatticeViolation(f"meet({a},{b}) breaks distributivity")
            if rep[lat.join_table[a][b]] != rep[a] | rep[b]:
                raise LatticeViolation(f"join({a},{b}) breaks distributivity")

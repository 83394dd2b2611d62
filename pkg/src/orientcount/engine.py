"""Exact counting and enumeration of orientations with prescribed out-degrees.

The search orients one edge at a time and propagates forced edges: whenever
the remaining demand of a vertex hits zero all its undecided edges must point
inward, and whenever it equals the number of undecided incident edges they
must all point outward.  The brute-force oracle at the bottom re-counts by
sweeping all 2^m bit patterns and is kept independent of the search path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import CapExceeded, CycleNotDirected, Infeasible
from .maps import OutDegreeSpec, PlanarMap

UNDECIDED = -1
ORACLE_EDGE_CAP = 18  # 2^18 bit patterns; adjustable per call


class EdgeOrientation:
    """One direction bit per edge of a parent map.

    Bit ``e`` set means edge ``e`` is directed along its canonical dart
    ``2e`` (away from ``origin(2e)``).
    """

    __slots__ = ("map", "mask")

    def __init__(self, m: PlanarMap, mask: int):
        self.map = m
        self.mask = mask

    def direction(self, e: int) -> bool:
        return bool((self.mask >> e) & 1)

    def dart_of_edge(self, e: int) -> int:
        """The dart the edge is directed along."""
        return 2 * e if self.direction(e) else 2 * e + 1

    def is_dart_directed(self, d: int) -> bool:
        return self.dart_of_edge(d >> 1) == d

    def out_darts(self, v: int) -> list[int]:
        return [d for d in self.map.darts_at(v) if self.is_dart_directed(d)]

    def in_darts(self, v: int) -> list[int]:
        return [d for d in self.map.darts_at(v) if not self.is_dart_directed(d)]

    def out_degree(self, v: int) -> int:
        return len(self.out_darts(v))

    def out_degrees(self) -> list[int]:
        deg = [0] * self.map.n
        for e in range(self.map.m):
            deg[self.map.origin[self.dart_of_edge(e)]] += 1
        return deg

    def satisfies(self, spec: OutDegreeSpec) -> bool:
        deg = self.out_degrees()
        return all(deg[v] == a for v, a in spec.demand.items())

    def reverse_darts(self, darts) -> "EdgeOrientation":
        mask = self.mask
        for d in darts:
            mask ^= 1 << (d >> 1)
        return EdgeOrientation(self.map, mask)

    def __eq__(self, other):
        return (
            isinstance(other, EdgeOrientation)
            and other.map is self.map
            and other.mask == self.mask
        )

    def __hash__(self):
        return hash((id(self.map), self.mask))

    def __repr__(self):
        return f"<EdgeOrientation mask={self.mask:0{self.map.m}b}>"


@dataclass
class CountResult:
    """Exact count plus search statistics."""

    count: int
    nodes: int
    rigid_found: int  # edges forced before the first branch; all are rigid
    ms: float


# -- feasibility via max flow ---------------------------------------------------


class _Dinic:
    def __init__(self, size):
        self.size = size
        self.head = [[] for _ in range(size)]
        self.to = []
        self.cap = []

    def add(self, u, v, c):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s, t):
        flow = 0
        while True:
            level = [-1] * self.size
            level[s] = 0
            queue = [s]
            for u in queue:
                for i in self.head[u]:
                    if self.cap[i] > 0 and level[self.to[i]] < 0:
                        level[self.to[i]] = level[u] + 1
                        queue.append(self.to[i])
            if level[t] < 0:
                return flow
            it = [0] * self.size

            def dfs(u, pushed):
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    i = self.head[u][it[u]]
                    v = self.to[i]
                    if self.cap[i] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[i]))
                        if got:
                            self.cap[i] -= got
                            self.cap[i ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed


def _orientation_by_flow(
    m: PlanarMap, spec: OutDegreeSpec, forced: Optional[dict[int, bool]] = None
) -> Optional[EdgeOrientation]:
    """Some orientation meeting the demands, or None.

    Each edge sends one unit to the endpoint it points away from; vertex v
    absorbs exactly alpha(v) units (its degree if unconstrained).
    """
    forced = forced or {}
    src, snk = m.m + m.n, m.m + m.n + 1
    net = _Dinic(m.m + m.n + 2)
    deg = m.degree_list()
    tail_arc = {}
    for e in range(m.m):
        net.add(src, e, 1)
        u, v = m.edge_endpoints(e)
        if e in forced:
            tails = [u] if forced[e] else [v]
        else:
            tails = [u, v] if u != v else [u]
        for w in tails:
            tail_arc[(e, w)] = len(net.to)
            net.add(e, m.m + w, 1)
    total = 0
    for v in range(m.n):
        a = spec.get(v)
        a = deg[v] if a is None else a
        if a > deg[v]:
            return None
        net.add(m.m + v, snk, a)
        total += a
    if total != m.m:
        return None
    if net.max_flow(src, snk) != m.m:
        return None
    mask = 0
    for e in range(m.m):
        u, v = m.edge_endpoints(e)
        arc = tail_arc.get((e, u))
        if arc is not None and net.cap[arc] == 0:  # saturated: u is the tail
            mask |= 1 << e
    return EdgeOrientation(m, mask)


def feasible(m: PlanarMap, spec: OutDegreeSpec) -> bool:
    """True iff at least one orientation meets every demanded out-degree."""
    return _orientation_by_flow(m, spec) is not None


def find_orientation(m: PlanarMap, spec: OutDegreeSpec) -> EdgeOrientation:
    x = _orientation_by_flow(m, spec)
    if x is None:
        raise Infeasible("no orientation satisfies the demands")
    return x


# -- the search ----------------------------------------------------------------


def _edge_order(m: PlanarMap) -> list[int]:
    """Edges by BFS from the outer face; forced chains collapse early."""
    if m.embedded and m.outer_dart is not None:
        seeds = sorted(set(m.origin[d] for d in m.faces[m.outer_face]))
    else:
        seeds = [0]
    seen_v = set(seeds)
    order, seen_e = [], set()
    queue = list(seeds)
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for d in m.darts_at(v):
            e = d >> 1
            if e not in seen_e:
                seen_e.add(e)
                order.append(e)
            w = m.target(d)
            if w not in seen_v:
                seen_v.add(w)
                queue.append(w)
    order.extend(e for e in range(m.m) if e not in seen_e)
    return order


class _Search:
    """Backtracking enumeration with exhaustive unit propagation."""

    def __init__(self, m, spec, forced=None):
        self.map = m
        self.spec = spec
        self.state = [UNDECIDED] * m.m
        self.und = [0] * m.n  # undecided dart slots per vertex
        self.rem = [None] * m.n  # remaining out-demand; None = unconstrained
        for d in range(2 * m.m):
            self.und[m.origin[d]] += 1
        for v in range(m.n):
            a = spec.get(v)
            if a is not None:
                self.rem[v] = a
        self.order = _edge_order(m)
        self.trail: list[int] = []
        self.nodes = 0
        self.ok = True
        for e, val in (forced or {}).items():
            if not self._assign(e, 1 if val else 0):
                self.ok = False
                return
        if not self._propagate():
            self.ok = False

    def _assign(self, e, val) -> bool:
        if self.state[e] != UNDECIDED:
            return self.state[e] == val
        self.state[e] = val
        self.trail.append(e)
        tail = self.map.origin[2 * e] if val else self.map.origin[2 * e + 1]
        head = self.map.origin[2 * e + 1] if val else self.map.origin[2 * e]
        self.und[tail] -= 1
        self.und[head] -= 1
        if self.rem[tail] is not None:
            self.rem[tail] -= 1
            if self.rem[tail] < 0:
                return False
        for v in (tail, head):
            r = self.rem[v]
            if r is not None and r > self.und[v]:
                return False
        return True

    def _propagate(self) -> bool:
        # scan until stable; vertex-local rules only, desk-scale maps
        changed = True
        while changed:
            changed = False
            for v in range(self.map.n):
                r = self.rem[v]
                if r is None or self.und[v] == 0:
                    continue
                if r < 0 or r > self.und[v]:
                    return False
                if r == 0 or r == self.und[v]:
                    outward = r != 0
                    for d in self.map.darts_at(v):
                        e = d >> 1
                        if self.state[e] != UNDECIDED:
                            continue
                        at_origin = (d & 1) == 0
                        val = 1 if (outward == at_origin) else 0
                        if not self._assign(e, val):
                            return False
                        changed = True
        return True

    def _undo(self, mark):
        while len(self.trail) > mark:
            e = self.trail.pop()
            val = self.state[e]
            self.state[e] = UNDECIDED
            tail = self.map.origin[2 * e] if val else self.map.origin[2 * e + 1]
            head = self.map.origin[2 * e + 1] if val else self.map.origin[2 * e]
            self.und[tail] += 1
            self.und[head] += 1
            if self.rem[tail] is not None:
                self.rem[tail] += 1

    def _next_branch(self):
        for e in self.order:
            if self.state[e] == UNDECIDED:
                return e
        return None

    def run(self) -> Iterator[int]:
        """Yield one bitmask per solution."""
        if not self.ok:
            return
        yield from self._descend()

    def _descend(self):
        e = self._next_branch()
        if e is None:
            mask = 0
            for i, s in enumerate(self.state):
                if s:
                    mask |= 1 << i
            yield mask
            return
        for val in (1, 0):
            self.nodes += 1
            mark = len(self.trail)
            if self._assign(e, val) and self._propagate():
                yield from self._descend()
            self._undo(mark)


def enumerate_orientations(
    m: PlanarMap,
    spec: OutDegreeSpec,
    forced: Optional[dict[int, bool]] = None,
) -> Iterator[EdgeOrientation]:
    """Every orientation meeting the demands, each exactly once."""
    search = _Search(m, spec, forced)
    for mask in search.run():
        yield EdgeOrientation(m, mask)


def count(
    m: PlanarMap,
    spec: OutDegreeSpec,
    forced: Optional[dict[int, bool]] = None,
    threads: int = 1,
) -> CountResult:
    """Exact number of orientations meeting the demands."""
    t0 = time.perf_counter()
    if threads > 1:
        tasks = split_tasks(m, spec, forced, parts=threads)
        total = nodes = 0
        rigid = None
        for task in tasks:
            sub = _Search(m, spec, task)
            n_sub = sum(1 for _ in sub.run())
            total += n_sub
            nodes += sub.nodes
            rigid = len(sub.trail) if rigid is None else rigid
        return CountResult(total, nodes, rigid or 0, (time.perf_counter() - t0) * 1e3)
    search = _Search(m, spec, forced)
    rigid = len(search.trail) if search.ok else 0
    total = sum(1 for _ in search.run())
    return CountResult(total, search.nodes, rigid, (time.perf_counter() - t0) * 1e3)


def split_tasks(
    m: PlanarMap,
    spec: OutDegreeSpec,
    forced: Optional[dict[int, bool]] = None,
    parts: int = 2,
) -> list[dict[int, bool]]:
    """Partition the search space at the first branching edges.

    The returned forced-assignment dictionaries cover the solution set
    disjointly, so per-task counts sum to the full count no matter how the
    tasks are scheduled.
    """
    tasks = [dict(forced or {})]
    while len(tasks) < parts:
        grown = []
        progressed = False
        for task in tasks:
            search = _Search(m, spec, task)
            if not search.ok:
                continue
            e = search._next_branch()
            if e is None:
                grown.append(task)
                continue
            progressed = True
            for val in (True, False):
                t2 = dict(task)
                t2[e] = val
                grown.append(t2)
        tasks = grown or tasks
        if not progressed:
            break
    return tasks


# -- rigid edges ---------------------------------------------------------------


def rigid_edges(m: PlanarMap, spec: OutDegreeSpec) -> set[int]:
    """Edges with the same direction in every orientation meeting the spec.

    Two orientations with equal out-degrees differ on a union of directed
    cycles of either one, so an edge can change direction iff its endpoints
    lie in one strongly connected component of any single solution.
    """
    if not spec.is_total_for(m):
        raise ValueError("rigid edges need a total demand function")
    x = find_orientation(m, spec)
    adj = [[] for _ in range(m.n)]
    for e in range(m.m):
        d = x.dart_of_edge(e)
        adj[m.origin[d]].append(m.origin[d ^ 1])
    comp = _tarjan_scc(adj)
    return {
        e
        for e in range(m.m)
        if comp[m.origin[2 * e]] != comp[m.origin[2 * e + 1]]
    }


def _tarjan_scc(adj):
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    comp = [-1] * n
    stack, call = [], []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        call.append((root, 0))
        while call:
            v, pi = call.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            recurse = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] < 0:
                    call.append((v, i + 1))
                    call.append((w, 0))
                    recurse = True
                    break
                elif on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if call:
                parent = call[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


# -- cycle flips ---------------------------------------------------------------


@dataclass(frozen=True)
class FlipCycle:
    """A simple directed cycle of darts with its chirality in the embedding."""

    darts: tuple[int, ...]
    chirality: str  # "cw" or "ccw"


def cycle_chirality(m: PlanarMap, darts) -> str:
    """"ccw" iff the cycle interior is on the left of its darts.

    Decided by flood-filling faces from the left side without crossing the
    cycle; the side not containing the outer face is the interior.
    """
    cyc_edges = {d >> 1 for d in darts}
    region = {m.face_of(d) for d in darts}
    frontier = list(region)
    while frontier:
        fi = frontier.pop()
        for d in m.faces[fi]:
            if (d >> 1) in cyc_edges:
                continue
            g = m.face_of(d ^ 1)
            if g not in region:
                region.add(g)
                frontier.append(g)
    return "cw" if m.outer_face in region else "ccw"


def make_cycle(m: PlanarMap, darts) -> FlipCycle:
    darts = tuple(darts)
    for a, b in zip(darts, darts[1:] + darts[:1]):
        if m.origin[a ^ 1] != m.origin[b]:
            raise ValueError("darts do not chain into a cycle")
    verts = [m.origin[d] for d in darts]
    if len(set(verts)) != len(verts):
        raise ValueError("cycle is not simple")
    return FlipCycle(darts, cycle_chirality(m, darts))


def flip(x: EdgeOrientation, cycle: FlipCycle) -> EdgeOrientation:
    """Reverse a directed cycle; out-degrees are unchanged."""
    for d in cycle.darts:
        if not x.is_dart_directed(d):
            raise CycleNotDirected(f"dart {d} is not directed in the orientation")
    return x.reverse_darts(cycle.darts)


def directed_facial_cycles(x: EdgeOrientation) -> list[FlipCycle]:
    """Bounded faces whose boundary is a directed cycle in ``x``.

    The face walk carries the face on its left, so a walk directed as-is is a
    ccw cycle and a fully reversed walk is a cw cycle.
    """
    m = x.map
    out = []
    for fi in range(m.f):
        if fi == m.outer_face:
            continue
        walk = m.faces[fi]
        verts = [m.origin[d] for d in walk]
        if len(set(verts)) != len(verts):
            continue
        if all(x.is_dart_directed(d) for d in walk):
            out.append(FlipCycle(tuple(walk), "ccw"))
        elif all(x.is_dart_directed(d ^ 1) for d in walk):
            rev = tuple(d ^ 1 for d in reversed(walk))
            out.append(FlipCycle(rev, "cw"))
    return out


# -- brute-force oracle ----------------------------------------------------------


def brute_force_count(
    m: PlanarMap,
    spec: OutDegreeSpec,
    forced: Optional[dict[int, bool]] = None,
    edge_cap: int = ORACLE_EDGE_CAP,
) -> int:
    """Count by sweeping all 2^m orientations; independent of the search."""
    return len(brute_force_masks(m, spec, forced, edge_cap))


def brute_force_masks(m, spec, forced=None, edge_cap=ORACLE_EDGE_CAP):
    if m.m > edge_cap:
        raise CapExceeded(f"{m.m} edges exceeds the brute-force cap {edge_cap}")
    masks = np.arange(1 << m.m, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(m.m)) & 1  # (2^m, m)
    coef = np.zeros((m.m, m.n), dtype=np.int64)
    base = np.zeros(m.n, dtype=np.int64)
    for e in range(m.m):
        coef[e, m.origin[2 * e]] += 1
        coef[e, m.origin[2 * e + 1]] -= 1
        base[m.origin[2 * e + 1]] += 1
    outdeg = bits @ coef + base
    keep = np.ones(len(masks), dtype=bool)
    for v, a in spec.demand.items():
        keep &= outdeg[:, v] == a
    for e, val in (forced or {}).items():
        keep &= bits[:, e] == (1 if val else 0)
    return [int(v) for v in masks[keep]]


def brute_force_orientations(m, spec, forced=None, edge_cap=ORACLE_EDGE_CAP):
    return [EdgeOrientation(m, mask) for mask in brute_force_masks(m, spec, forced, edge_cap)]

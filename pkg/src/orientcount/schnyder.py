"""Schnyder woods: axioms, color deduction, and counting.

Colors are 0, 1, 2.  A wood assigns a color to each directed dart it uses;
an edge is unidirected (one colored dart) or bidirected (both darts, distinct
colors).  At the suspension vertex ``a_i`` an implicit half-edge of color i
points into the outer face.  The working form of the vertex axiom: the three
out-darts carry all three colors and read 0, 1, 2 in clockwise order, and an
edge entering with color c lies in the clockwise sector between the out-darts
of colors c+1 and c-1.

On a triangulation the orientation determines the coloring: walking
counterclockwise from an in-dart of color c, the first out-dart met has color
c+1, so colors propagate as mod-3 difference constraints anchored at the
suspension vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .completion import suspend_and_complete
from .engine import CountResult, EdgeOrientation, count, enumerate_orientations
from .errors import MultipleColorings, NoColoring, NotInnerTriangulation
from .maps import OutDegreeSpec, PlanarMap, delete_edges


@dataclass
class SchnyderWood:
    map: PlanarMap
    specials: tuple[int, int, int]
    color: dict[int, int]  # directed dart -> color

    def edge_state(self, e: int):
        c0, c1 = self.color.get(2 * e), self.color.get(2 * e + 1)
        return c0, c1

    def out_dart_of_color(self, v: int, c: int) -> Optional[int]:
        for d in self.map.darts_at(v):
            if self.color.get(d) == c:
                return d
        return None


@dataclass
class ThreeOrientationInstance:
    """A triangulation's inner edges as a stand-alone demand problem."""

    base: PlanarMap
    specials: tuple[int, int, int]
    inner: PlanarMap
    spec: OutDegreeSpec
    edge_map: list[int]  # inner edge id -> base edge id
    outer_edges: list[int]


def three_orientation_instance(tri: PlanarMap, specials=None) -> ThreeOrientationInstance:
    """Demands 3 at interior vertices and 0 at the outer corners, on the map
    with the outer triangle removed."""
    _require_triangulation(tri)
    outer_vs = tri.outer_vertices()
    if len(outer_vs) != 3:
        raise NotInnerTriangulation("outer face must be a triangle")
    if specials is None:
        specials = tuple(outer_vs)
    outer_edges = sorted({d >> 1 for d in tri.faces[tri.outer_face]})
    inner, edge_map, _ = delete_edges(tri, outer_edges)
    demand = {v: (0 if v in set(specials) else 3) for v in range(tri.n)}
    return ThreeOrientationInstance(
        tri, tuple(specials), inner, OutDegreeSpec(demand), edge_map, outer_edges
    )


def _require_triangulation(m: PlanarMap):
    for fi in range(m.f):
        if fi != m.outer_face and m.face_size(fi) != 3:
            raise NotInnerTriangulation(f"face {fi} has size {m.face_size(fi)}")


# -- axioms --------------------------------------------------------------------


def schnyder_check(wood: SchnyderWood) -> tuple[bool, list[str]]:
    """Check (W1)-(W4); returns (ok, human-readable violations)."""
    m, specials = wood.map, wood.specials
    bad: list[str] = []

    for e in range(m.m):
        c0, c1 = wood.edge_state(e)
        if c0 is None and c1 is None:
            bad.append(f"W1: edge {e} carries no direction")
        elif c0 is not None and c1 is not None and c0 == c1:
            bad.append(f"W1: edge {e} bidirected with equal colors")

    for v in range(m.n):
        darts = m.darts_at(v)
        out = [(i, wood.color[d]) for i, d in enumerate(darts) if d in wood.color]
        half_slot = None
        if v in specials:
            # the half-edge occupies the outer corner of a_i
            i = specials.index(v)
            at = next(
                (k for k, d in enumerate(darts) if m.face_of(d) == m.outer_face), None
            )
            if at is None:
                bad.append(f"W2: special {v} not on the outer face")
                continue
            half_slot = at + 0.5  # between darts `at` and `at + 1`, ccw
            out.append((half_slot, i))
        colors = sorted(c for _, c in out)
        if colors != [0, 1, 2]:
            bad.append(f"W3: out-colors at vertex {v} are {colors}")
            continue
        # clockwise order 0,1,2 means descending color along ccw slots
        slot = {c: s for s, c in out}
        k = len(darts)

        def ccw_dist(a, b):
            return (b - a) % k

        if ccw_dist(slot[0], slot[2]) > ccw_dist(slot[0], slot[1]):
            bad.append(f"W3: out-darts at vertex {v} not clockwise 0,1,2")
        for i, d in enumerate(darts):
            cin = wood.color.get(d ^ 1)
            if cin is None:
                continue
            # closed clockwise sector from out(cin+1) to out(cin-1);
            # clockwise from slot a means decreasing ccw slot index
            a, b = slot[(cin + 1) % 3], slot[(cin - 1) % 3]
            if not (a - i) % k <= (a - b) % k:
                bad.append(f"W3: in-color {cin} at vertex {v} outside its sector")

    for fi in range(m.f):
        if fi == m.outer_face:
            continue
        walk = m.faces[fi]
        for darts_dir in (walk, [d ^ 1 for d in walk]):
            cols = {wood.color.get(d) for d in darts_dir}
            if len(cols) == 1 and None not in cols:
                bad.append(f"W4: face {fi} is a monochromatic directed cycle")
    return (not bad, bad)


# -- color deduction on triangulations -------------------------------------------


def colors_from_3orientation(
    inst: ThreeOrientationInstance, x: EdgeOrientation
) -> SchnyderWood:
    """The unique wood whose orientation is ``x``; mod-3 propagation.

    Raises NoColoring / MultipleColorings when the difference system is
    inconsistent or underdetermined, which would mean the input is not a
    valid 3-orientation of a triangulation.
    """
    tri, inner = inst.base, inst.inner
    specials = inst.specials
    special_set = set(specials)

    # Out-darts of each interior vertex, as darts of the *base* map, in ccw
    # rotation order.  base_color[v] is the color of the first out-dart; the
    # t-th out-dart counterclockwise has color base_color[v] - t (mod 3).
    base_dart = {}
    for ie in range(inner.m):
        be = inst.edge_map[ie]
        base_dart[2 * ie] = 2 * be
        base_dart[2 * ie + 1] = 2 * be + 1

    out_slot: dict[int, dict[int, int]] = {}
    dart_dir = {}  # base dart -> directed?
    for ie in range(inner.m):
        d = x.dart_of_edge(ie)
        dart_dir[base_dart[d]] = True
        dart_dir[base_dart[d ^ 1]] = False
    for v in range(tri.n):
        if v in special_set:
            continue
        outs = [d for d in tri.darts_at(v) if dart_dir.get(d)]
        if len(outs) != 3:
            raise NoColoring(f"vertex {v} has out-degree {len(outs)}, not 3")
        out_slot[v] = {d: t for t, d in enumerate(outs)}

    # Difference constraints: color(u->v) = base[u] - t(u->v), and equals
    # (color of first out-dart ccw after the entry slot at v) - 1.
    anchors: dict[int, int] = {}
    relations: list[tuple[int, int, int]] = []  # base[u] - base[v] = delta (mod 3)

    def first_out_ccw_after(v, d):
        darts = tri.darts_at(v)
        i = darts.index(d)
        k = len(darts)
        for step in range(1, k + 1):
            cand = darts[(i + step) % k]
            if dart_dir.get(cand):
                return cand
        return None

    for bd, is_out in dart_dir.items():
        if not is_out:
            continue
        u = tri.origin[bd]
        v = tri.origin[bd ^ 1]
        tu = out_slot[u][bd]
        if v in special_set:
            # edges into a_i carry color i
            want = (specials.index(v) + tu) % 3
            if anchors.get(u, want) != want:
                raise NoColoring("conflicting anchors at a suspension vertex")
            anchors[u] = want
            continue
        nxt = first_out_ccw_after(v, bd ^ 1)
        tv = out_slot[v][nxt]
        # base[u] - tu = (base[v] - tv) - 1
        relations.append((u, v, (tu - tv - 1) % 3))

    base_color: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    for (u, v, delta) in relations:
        adj.setdefault(u, []).append((v, delta))
        adj.setdefault(v, []).append((u, (-delta) % 3))
    for u, c in anchors.items():
        if base_color.get(u, c) != c:
            raise NoColoring("anchor conflict")
        base_color[u] = c
    pending = list(base_color)
    while pending:
        u = pending.pop()
        for (v, delta) in adj.get(u, []):
            want = (base_color[u] - delta) % 3
            if v in base_color:
                if base_color[v] != want:
                    raise NoColoring("inconsistent color propagation")
            else:
                base_color[v] = want
                pending.append(v)
    interior = [v for v in range(tri.n) if v not in special_set]
    if any(v not in base_color for v in interior):
        raise MultipleColorings("color system is underdetermined")

    color: dict[int, int] = {}
    for bd, is_out in dart_dir.items():
        if is_out:
            u = tri.origin[bd]
            color[bd] = (base_color[u] - out_slot[u][bd]) % 3
    # outer triangle: bidirected, a_i -> a_{i+1} has color i+1, reverse i
    for i in range(3):
        u, w = specials[i], specials[(i + 1) % 3]
        d = tri.dart_between(u, w)
        color[d] = (i + 1) % 3
        color[d ^ 1] = i
    return SchnyderWood(tri, specials, color)


def count_woods_triangulation(tri: PlanarMap, specials=None) -> int:
    inst = three_orientation_instance(tri, specials)
    return count(inst.inner, inst.spec).count


def enumerate_3orientations(tri: PlanarMap, specials=None):
    inst = three_orientation_instance(tri, specials)
    return inst, list(enumerate_orientations(inst.inner, inst.spec))


# -- counting via the completion --------------------------------------------------


def count_woods_via_completion(m: PlanarMap, a1: int, a2: int, a3: int) -> CountResult:
    """Wood count of the suspended map as an orientation count of its
    completion."""
    comp = suspend_and_complete(m, a1, a2, a3)
    return count(comp.map, comp.alpha)


# -- exhaustive wood enumeration (small maps) --------------------------------------


def enumerate_woods(m: PlanarMap, specials: tuple[int, int, int]):
    """All Schnyder woods of a small suspended map by direct search.

    Iterates over direction patterns (each edge one-way or bidirected) and
    counts valid colorings per pattern; exponential, for tests only.
    """
    woods = []
    states = []  # per edge: list of colored-dart dicts to try

    def patterns(e):
        out = []
        for c in range(3):
            out.append({2 * e: c})
            out.append({2 * e + 1: c})
        for c0 in range(3):
            for c1 in range(3):
                if c0 != c1:
                    out.append({2 * e: c0, 2 * e + 1: c1})
        return out

    opts = [patterns(e) for e in range(m.m)]
    color: dict[int, int] = {}

    def vertex_ok(v, complete):
        darts = m.darts_at(v)
        out = [(i, color[d]) for i, d in enumerate(darts) if d in color]
        if v in specials:
            i = specials.index(v)
            at = next(
                (k for k, d in enumerate(darts) if m.face_of(d) == m.outer_face),
                None,
            )
            if at is None:
                return False
            out.append((at + 0.5, i))
        cols = [c for _, c in out]
        if len(set(cols)) != len(cols):
            return False
        if not complete:
            return True
        if sorted(cols) != [0, 1, 2]:
            return False
        wood = SchnyderWood(m, specials, color)
        ok, _ = _vertex_axiom_only(wood, v)
        return ok

    def rec(e):
        if e == m.m:
            wood = SchnyderWood(m, specials, dict(color))
            ok, _ = schnyder_check(wood)
            if ok:
                woods.append(wood)
            return
        for pat in opts[e]:
            color.update(pat)
            endpoints = {m.origin[2 * e], m.origin[2 * e + 1]}
            if all(vertex_ok(v, _vertex_complete(m, v, e)) for v in endpoints):
                rec(e + 1)
            for d in pat:
                del color[d]

    def _vertex_complete(mm, v, e):
        return all((d >> 1) <= e for d in mm.darts_at(v))

    rec(0)
    return woods


def _vertex_axiom_only(wood: SchnyderWood, v: int):
    ok, bad = schnyder_check(wood)
    mine = [s for s in bad if f"vertex {v} " in s or f"vertex {v}'" in s]
    return (not mine, mine)

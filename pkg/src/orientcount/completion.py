"""Suspension of a 3-connected map and its primal-dual completion.

The completion superimposes the suspended map and its suspension dual: every
primal edge crosses its dual edge in a new degree-4 edge vertex, the outer
dual vertex is replaced by a triangle b1 b2 b3 whose sides are crossed by the
rays leaving the three suspension vertices, and all six rays end in a final
vertex ``v_infinity``.  Orientations of the completion demanding out-degree
3 at primal and dual vertices, 1 at edge vertices and 0 at ``v_infinity``
are in bijection with the Schnyder woods of the suspended map, which is how
the wood counters downstream work.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotThreeConnected, SpecialVerticesNotOnOuterFace
from .maps import (
    OutDegreeSpec,
    PlanarMap,
    build_map,
    is_three_connected,
    with_outer_face,
)


@dataclass
class Completion:
    map: PlanarMap
    alpha: OutDegreeSpec
    classes: dict[int, str]  # 'primal' | 'dual' | 'edge' | 'infinity'
    specials: tuple[int, int, int]
    b: tuple[int, int, int]
    dual_of_face: dict[int, int]  # bounded face of the base map -> vertex
    edge_vertex: dict[int, int]  # base edge id -> vertex
    ray_cross: tuple[int, int, int]
    v_infinity: int


def suspend_and_complete(m: PlanarMap, a1: int, a2: int, a3: int) -> Completion:
    """Completion of the suspension of ``m`` at a1, a2, a3.

    The suspension vertices must lie on the outer face in clockwise order,
    which is the order the outer face walk visits them.
    """
    if m.n > 1000:
        raise NotThreeConnected("3-connectivity check capped at n = 1000")
    if not is_three_connected(m):
        raise NotThreeConnected("map is not 3-connected")

    walk = m.faces[m.outer_face]
    boundary = [m.origin[d] for d in walk]
    for a in (a1, a2, a3):
        if a not in boundary:
            raise SpecialVerticesNotOnOuterFace(f"vertex {a} is not on the outer face")
    hits = [v for v in boundary if v in (a1, a2, a3)]
    i1 = hits.index(a1)
    if hits[(i1 + 1) % 3] != a2:
        raise SpecialVerticesNotOnOuterFace(
            "special vertices must appear in clockwise order a1, a2, a3"
        )

    n = m.n
    specials = (a1, a2, a3)
    dual_of_face = {}
    for fi in range(m.f):
        if fi != m.outer_face:
            dual_of_face[fi] = n + len(dual_of_face)
    b = tuple(n + len(dual_of_face) + i for i in range(3))
    edge_vertex = {e: n + len(dual_of_face) + 3 + e for e in range(m.m)}
    r = tuple(n + len(dual_of_face) + 3 + m.m + i for i in range(3))
    v_inf = n + len(dual_of_face) + 3 + m.m + 3

    # Outer edges split into the three paths between consecutive specials;
    # path i avoids a_i, so its duals attach to b_i.  The outer walk is
    # clockwise and visits a1, a2, a3 in order, hence the segment entered at
    # a_{i+1} belongs to path i.
    idx1 = boundary.index(a1)
    rotated = walk[idx1:] + walk[:idx1]
    side_of_edge = {}
    path_edges = {0: [], 1: [], 2: []}  # path i (0-based): avoids special i
    current = 2  # segment leaving a1 heads for a2, avoiding a3
    for d in rotated:
        v = m.origin[d]
        if v == a2:
            current = 0
        elif v == a3:
            current = 1
        side_of_edge[d >> 1] = current
        path_edges[current].append(d >> 1)

    def dual_id(d):
        fi = m.face_of(d)
        if fi == m.outer_face:
            return b[side_of_edge[d >> 1]]
        return dual_of_face[fi]

    rot: dict[int, list[int]] = {}
    for v in range(n):
        lst = [edge_vertex[d >> 1] for d in m.darts_at(v)]
        if v in specials:
            i = specials.index(v)
            darts = m.darts_at(v)
            at = next(k for k, d in enumerate(darts) if m.face_of(d) == m.outer_face)
            lst.insert(at + 1, r[i])
        rot[v] = lst
    for fi, dv in dual_of_face.items():
        rot[dv] = [edge_vertex[d >> 1] for d in m.faces[fi]]
    for i in range(3):
        rot[b[i]] = (
            [r[(i + 1) % 3]]
            + [edge_vertex[e] for e in path_edges[i]]
            + [r[(i - 1) % 3], v_inf]
        )
    for e in range(m.m):
        u, v = m.origin[2 * e], m.origin[2 * e + 1]
        rot[edge_vertex[e]] = [v, dual_id(2 * e), u, dual_id(2 * e + 1)]
    for i in range(3):
        rot[r[i]] = [v_inf, b[(i + 1) % 3], specials[i], b[(i - 1) % 3]]
    rot[v_inf] = [r[0], b[2], r[1], b[0], r[2], b[1]]

    comp = build_map(rot, outer=None)
    d_out = comp.dart_between(v_inf, r[0])
    comp = with_outer_face(comp, comp.face_of(d_out))

    classes = {}
    demand = {}
    for v in range(n):
        classes[v] = "primal"
        demand[v] = 3
    for dv in dual_of_face.values():
        classes[dv] = "dual"
        demand[dv] = 3
    for bi in b:
        classes[bi] = "dual"
        demand[bi] = 3
    for xv in edge_vertex.values():
        classes[xv] = "edge"
        demand[xv] = 1
    for ri in r:
        classes[ri] = "edge"
        demand[ri] = 1
    classes[v_inf] = "infinity"
    demand[v_inf] = 0

    return Completion(
        comp,
        OutDegreeSpec(demand),
        classes,
        specials,
        b,
        dual_of_face,
        edge_vertex,
        r,
        v_inf,
    )

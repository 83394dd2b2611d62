"""Generators for the named graph families, with canonical indexing.

Planar families are produced from explicit integer coordinates: rotations
come from an exact angular sort of the incident segments and the outer face
is recognized by its negative signed area, so every generator is
deterministic and self-validating through the Euler check.  Torus families
are abstract rotation systems flagged as unembedded; they are consumed only
by the pure counting machinery.

Vertex numbering is row-major with special vertices appended last and any
``v_infinity`` taking the final index.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import EdgeOrientation
from .errors import BadParameters, NoCanonicalDefined, UnknownFace
from .maps import OutDegreeSpec, PlanarMap, build_map, delete_edges, with_outer_face

FAMILIES = (
    "grid",
    "torus-grid",
    "augmented-grid",
    "quad-grid",
    "tri-grid",
    "tri-torus",
    "augmented-tri-grid",
    "hex-grid",
    "stacked",
    "strip",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    k: int = 0
    l: int = 0
    sequence: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadParameters(f"unknown family {self.family!r}")
        if self.family not in ("stacked",) and not (self.k >= 2 and self.l >= 2):
            if self.family == "strip":
                if self.l < 2:
                    raise BadParameters("strip needs l >= 2")
            else:
                raise BadParameters("k and l must be at least 2")


@dataclass
class GeneratedMap:
    map: PlanarMap
    alpha: Optional[OutDegreeSpec]
    spec: FamilySpec
    meta: dict = field(default_factory=dict)


# -- construction from coordinates ---------------------------------------------


def _angle_key(vec):
    dx, dy = vec
    if dx == 0 and dy == 0:
        raise ValueError("zero direction")
    half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
    return half, dx, dy


def _angle_cmp(a, b):
    ha, dxa, dya = _angle_key(a)
    hb, dxb, dyb = _angle_key(b)
    if ha != hb:
        return -1 if ha < hb else 1
    cross = dxa * dyb - dya * dxb
    if cross == 0:
        raise ValueError("two edges leave a vertex in the same direction")
    return -1 if cross > 0 else 1


def map_from_points(points: Sequence[tuple[int, int]], segments) -> PlanarMap:
    """Build an embedded map from integer coordinates and straight edges.

    ``points[v]`` is the position of vertex ``v``; rotations are sorted by
    exact angle and the outer face is the unique face walk with negative
    signed area.  The construction raises if the drawing is not a planar
    embedding, via the Euler check.
    """
    rotations = [[] for _ in points]
    for (u, v) in segments:
        rotations[u].append(v)
        rotations[v].append(u)

    def sort_at(v):
        px, py = points[v]

        def cmp(a, b):
            return _angle_cmp(
                (points[a][0] - px, points[a][1] - py),
                (points[b][0] - px, points[b][1] - py),
            )

        rotations[v].sort(key=functools.cmp_to_key(cmp))

    for v in range(len(points)):
        sort_at(v)
    m = build_map(rotations, outer=None, require_simple=True)

    outer = None
    for fi, walk in enumerate(m.faces):
        area2 = 0
        for d in walk:
            (x1, y1) = points[m.origin[d]]
            (x2, y2) = points[m.target(d)]
            area2 += x1 * y2 - x2 * y1
        if area2 < 0:
            if outer is not None:
                raise ValueError("two clockwise face walks; drawing is invalid")
            outer = fi
    if outer is None:
        raise ValueError("no clockwise face walk; drawing is invalid")
    return PlanarMap(m.origin, m.next_rot, m.faces[outer][0], embedded=True)


# -- square and triangular grids ------------------------------------------------


def _grid_points(k, l):
    """Row-major coordinates; row 1 at the top so rotations read naturally."""
    idx = {(i, j): (i - 1) * l + (j - 1) for i in range(1, k + 1) for j in range(1, l + 1)}
    pts = [None] * (k * l)
    for (i, j), v in idx.items():
        pts[v] = (2 * j, -2 * i)
    return idx, pts


def _grid_segments(idx, k, l, diagonals=False):
    segs = []
    for i in range(1, k + 1):
        for j in range(1, l):
            segs.append((idx[(i, j)], idx[(i, j + 1)]))
    for i in range(1, k):
        for j in range(1, l + 1):
            segs.append((idx[(i, j)], idx[(i + 1, j)]))
    if diagonals:
        for i in range(2, k + 1):
            for j in range(1, l):
                segs.append((idx[(i, j)], idx[(i - 1, j + 1)]))
    return segs


def _gen_grid(spec, diagonals):
    k, l = spec.k, spec.l
    idx, pts = _grid_points(k, l)
    m = map_from_points(pts, _grid_segments(idx, k, l, diagonals))
    alpha = _alpha_star(idx, k, l) if diagonals else None
    return GeneratedMap(m, alpha, spec, {"index": idx})


def _alpha_star(idx, k, l):
    """Demands making the triangular grid's orientations match its woods:
    3 at interior vertices, 1 at three corners, 2 elsewhere on the boundary."""
    demand = {}
    for (i, j), v in idx.items():
        if 2 <= i <= k - 1 and 2 <= j <= l - 1:
            demand[v] = 3
        elif (i, j) in ((1, 1), (1, l), (k, l)):
            demand[v] = 1
        else:
            demand[v] = 2
    return OutDegreeSpec(demand)


def _augmented(spec, diagonals):
    k, l = spec.k, spec.l
    idx, pts = _grid_points(k, l)
    segs = _grid_segments(idx, k, l, diagonals)
    big = 64 * (k + l + 2)
    a1, a2, a3 = k * l, k * l + 1, k * l + 2
    pts = pts + [(l + 1, big), (2 * l + big, -(k + 1)), (-big, -2 * k - big)]
    segs += [(a1, a2), (a2, a3), (a3, a1)]
    segs += [(a1, idx[(1, j)]) for j in range(1, l + 1)]
    segs += [(a2, idx[(i, l)]) for i in range(1, k + 1)]
    third = [(k, j) for j in range(1, l + 1)] + [(i, 1) for i in range(1, k)]
    segs += [(a3, idx[c]) for c in third]
    m = map_from_points(pts, segs)
    demand = {v: 3 for v in range(k * l)}
    demand.update({a1: 0, a2: 0, a3: 0})
    outer_edges = [m.edge_between(a1, a2), m.edge_between(a2, a3), m.edge_between(a3, a1)]
    return GeneratedMap(
        m,
        OutDegreeSpec(demand),
        spec,
        {"index": idx, "specials": (a1, a2, a3), "outer_edges": outer_edges},
    )


# -- quadrangulation with a far vertex ------------------------------------------


def _gen_quad(spec):
    k, l = spec.k, spec.l
    idx, pts = _grid_points(k, l)
    grid = map_from_points(pts, _grid_segments(idx, k, l))
    vinf = k * l
    walk = grid.faces[grid.outer_face]
    boundary = [grid.origin[d] for d in walk]  # clockwise in the plane
    coord_of = {v: c for c, v in idx.items()}
    ring = [v for v in boundary if sum(coord_of[v]) % 2 == 1]

    rotations = [list(grid.neighbors(v)) for v in range(grid.n)]
    for d in walk:
        v = grid.origin[d]
        if sum(coord_of[v]) % 2 == 1:
            at = rotations[v].index(grid.target(d))
            rotations[v].insert(at + 1, vinf)
    rotations.append(ring)  # cw around the grid = ccw as seen from outside
    m = build_map(rotations, outer=None)
    fouter = next(
        fi
        for fi in range(m.f)
        if vinf in m.face_vertices(fi) and idx[(1, 1)] in m.face_vertices(fi)
    )
    m = with_outer_face(m, fouter)
    demand = {v: 2 for v in range(m.n)}
    demand[idx[(1, 1)]] = 0
    demand[vinf] = 0
    return GeneratedMap(
        m, OutDegreeSpec(demand), spec, {"index": idx, "v_infinity": vinf, "sinks": (idx[(1, 1)], vinf)}
    )


# -- torus families --------------------------------------------------------------


def _gen_torus_grid(spec):
    k, l = spec.k, spec.l
    idx = {(i, j): (i - 1) * l + (j - 1) for i in range(1, k + 1) for j in range(1, l + 1)}
    rotations = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, l + 1):
            e = idx[(i, j % l + 1)]
            w = idx[(i, (j - 2) % l + 1)]
            n = idx[((i - 2) % k + 1, j)]
            s = idx[(i % k + 1, j)]
            row.append([e, n, w, s])
        rotations.extend(row)
    m = build_map(rotations, outer=None, require_simple=False, embedded=False)
    return GeneratedMap(m, OutDegreeSpec.constant(m, 2), spec, {"index": idx})


def _gen_tri_torus(spec):
    # Helical east wrap: east of (i, l) is (i-1, 1); with bottom row first the
    # neighbors are the circulant offsets +-1, +-l, +-(l+1) on k*l vertices.
    k, l = spec.k, spec.l
    n = k * l
    rotations = []
    for u in range(n):
        e, w = (u + 1) % n, (u - 1) % n
        no, s = (u + l) % n, (u - l) % n
        ne, sw = (u + l + 1) % n, (u - l - 1) % n
        rotations.append([e, ne, no, w, sw, s])
    m = build_map(rotations, outer=None, require_simple=False, embedded=False)
    idx = {(i, j): (k - i) * l + (j - 1) for i in range(1, k + 1) for j in range(1, l + 1)}
    return GeneratedMap(m, OutDegreeSpec.constant(m, 3), spec, {"index": idx})


# -- filled hexagonal grid --------------------------------------------------------


def _gen_hex(spec):
    k, l = spec.k, spec.l
    corner_id: dict[tuple[int, int], int] = {}
    pts: list[tuple[int, int]] = []

    def corner(p):
        if p not in corner_id:
            corner_id[p] = len(pts)
            pts.append(p)
        return corner_id[p]

    # First pass: hexagon-lattice corners in row-major reading order.
    bricks = [(r, c) for r in range(k) for c in range(l)]
    outline = {}
    for (r, c) in bricks:
        x0, y0 = 20 * c + 10 * (r % 2), 10 * r
        a = (x0, y0)
        mb = (x0 + 10, y0)
        b = (x0 + 20, y0)
        cc = (x0 + 20, y0 + 10)
        mt = (x0 + 10, y0 + 10)
        d = (x0, y0 + 10)
        outline[(r, c)] = (a, mb, b, cc, mt, d)
        for p in (a, mb, b, cc, mt, d):
            corner(p)

    segments = set()
    centers = {}
    hexmeta = {}
    for (r, c) in bricks:
        a, mb, b, cc, mt, d = outline[(r, c)]
        x0, y0 = 20 * c + 10 * (r % 2), 10 * r
        t1 = corner((x0 + 5, y0 + 3))
        t2 = corner((x0 + 15, y0 + 5))
        t3 = corner((x0 + 5, y0 + 7))
        centers[(r, c)] = (t1, t2, t3)
        ca, cmb, cb, ccc, cmt, cd = (corner_id[p] for p in (a, mb, b, cc, mt, d))
        ring = [ca, cmb, cb, ccc, cmt, cd]
        for u, v in zip(ring, ring[1:] + ring[:1]):
            segments.add((min(u, v), max(u, v)))
        inner = [
            (t1, t2), (t2, t3), (t3, t1),
            (t1, ca), (t1, cmb), (t2, cb), (t2, ccc), (t3, cmt), (t3, cd),
        ]
        for u, v in inner:
            segments.add((min(u, v), max(u, v)))
        hexmeta[(r, c)] = {
            "corners": ring,
            "triangle": (t1, t2, t3),
            # boundary edges flanked inside this hexagon by a triangle
            "tri_edges": [(ca, cmb), (cb, ccc), (cmt, cd)],
            "quad_edges": [(cmb, cb), (ccc, cmt), (cd, ca)],
        }

    m = map_from_points(pts, sorted(segments))
    return GeneratedMap(
        m, None, spec, {"hexagons": hexmeta, "centers": centers, "points": pts}
    )


# -- stacked triangulations --------------------------------------------------------


def stacked_triangulation(sequence: Sequence[tuple[int, int, int]]) -> PlanarMap:
    """Plane triangulation grown by stacking degree-3 vertices into bounded
    faces; each step names the face by its vertex triple."""
    m = build_map({0: [1, 2], 1: [2, 0], 2: [0, 1]}, outer=(1, 0))
    for step, triple in enumerate(sequence):
        want = frozenset(triple)
        target = None
        for fi in range(m.f):
            if fi != m.outer_face and frozenset(m.face_vertices(fi)) == want:
                target = fi
                break
        if target is None:
            raise UnknownFace(f"step {step}: no bounded face {sorted(want)}")
        w = m.n
        rotations = [list(m.neighbors(v)) for v in range(m.n)]
        walk = m.faces[target]
        for d in walk:
            v = m.origin[d]
            at = rotations[v].index(m.target(d))
            # face `target` sits in the corner between d and its successor
            rotations[v].insert(at + 1, w)
        rotations.append([m.origin[d] for d in walk])
        m = build_map(rotations, outer=(m.origin[m.outer_dart], m.target(m.outer_dart)))
    return m


def random_stacking_sequence(n: int, seed: int) -> list[tuple[int, int, int]]:
    """Face choices growing a triangle into an n-vertex stacked triangulation."""
    if n < 3:
        raise BadParameters("need n >= 3")
    rng = random.Random(seed)
    m = build_map({0: [1, 2], 1: [2, 0], 2: [0, 1]}, outer=(1, 0))
    seq = []
    while m.n < n:
        faces = sorted(
            tuple(sorted(m.face_vertices(fi)))
            for fi in range(m.f)
            if fi != m.outer_face
        )
        choice = faces[rng.randrange(len(faces))]
        seq.append(choice)
        m = stacked_triangulation(seq)
    return seq


# -- dispatch -----------------------------------------------------------------------


def generate(spec: FamilySpec) -> GeneratedMap:
    fam = spec.family
    if fam == "grid":
        return _gen_grid(spec, diagonals=False)
    if fam == "tri-grid":
        return _gen_grid(spec, diagonals=True)
    if fam == "strip":
        return _gen_grid(FamilySpec("tri-grid", 2, spec.l), diagonals=True)
    if fam == "augmented-grid":
        return _augmented(spec, diagonals=False)
    if fam == "augmented-tri-grid":
        return _augmented(spec, diagonals=True)
    if fam == "quad-grid":
        return _gen_quad(spec)
    if fam == "torus-grid":
        return _gen_torus_grid(spec)
    if fam == "tri-torus":
        return _gen_tri_torus(spec)
    if fam == "hex-grid":
        return _gen_hex(spec)
    if fam == "stacked":
        m = stacked_triangulation(spec.sequence)
        return GeneratedMap(m, None, spec, {})
    raise BadParameters(fam)


# -- canonical orientations -----------------------------------------------------------


def _oriented_mask(m: PlanarMap, arcs) -> EdgeOrientation:
    mask = 0
    for (u, v) in arcs:
        d = m.dart_between(u, v)
        if d is None:
            raise ValueError(f"no edge {u}->{v}")
        if d % 2 == 0:
            mask |= 1 << (d >> 1)
    return EdgeOrientation(m, mask)


def _tri_rule_arcs(idx, k, l):
    """Vertical edges up, horizontal right, diagonals left-down."""
    arcs = []
    for i in range(1, k + 1):
        for j in range(1, l):
            arcs.append((idx[(i, j)], idx[(i, j + 1)]))
    for i in range(1, k):
        for j in range(1, l + 1):
            arcs.append((idx[(i + 1, j)], idx[(i, j)]))
    for i in range(2, k + 1):
        for j in range(1, l):
            arcs.append((idx[(i - 1, j + 1)], idx[(i, j)]))
    return arcs


def _assert_acyclic_bipolar(m: PlanarMap, x: EdgeOrientation, s: int, t: int):
    indeg = [0] * m.n
    outdeg = x.out_degrees()
    for e in range(m.m):
        indeg[m.origin[x.dart_of_edge(e) ^ 1]] += 1
    assert [v for v in range(m.n) if indeg[v] == 0] == [s]
    assert [v for v in range(m.n) if outdeg[v] == 0] == [t]
    color = [0] * m.n

    def dfs(v):
        color[v] = 1
        for d in x.out_darts(v):
            w = m.target(d)
            if color[w] == 1:
                raise AssertionError("cycle in canonical orientation")
            if color[w] == 0:
                dfs(w)
        color[v] = 2

    for v in range(m.n):
        if color[v] == 0:
            dfs(v)


def canonical_orientation(spec: FamilySpec):
    """The family's reference orientation.

    For ``tri-grid`` this is the rule-driven orientation meeting the attached
    demands; for ``augmented-tri-grid`` it lives on the inner-edge instance
    (spokes point into the corner vertices); for ``strip`` and ``grid`` it is
    the standard bipolar orientation.  Returns ``(generated, orientation)``
    where the orientation's map may be the derived inner instance.
    """
    gen = generate(spec)
    fam = spec.family
    if fam == "tri-grid":
        idx = gen.meta["index"]
        x = _oriented_mask(gen.map, _tri_rule_arcs(idx, spec.k, spec.l))
        assert x.satisfies(gen.alpha)
        return gen, x
    if fam == "augmented-tri-grid":
        idx = gen.meta["index"]
        a1, a2, a3 = gen.meta["specials"]
        inner, edge_map, _ = delete_edges(gen.map, gen.meta["outer_edges"])
        arcs = _tri_rule_arcs(idx, spec.k, spec.l)
        arcs += [(idx[(1, j)], a1) for j in range(1, spec.l + 1)]
        arcs += [(idx[(i, spec.l)], a2) for i in range(1, spec.k + 1)]
        arcs += [(idx[(spec.k, j)], a3) for j in range(1, spec.l + 1)]
        arcs += [(idx[(i, 1)], a3) for i in range(1, spec.k)]
        x = _oriented_mask(inner, arcs)
        demand = {v: gen.alpha[v] for v in range(gen.map.n)}
        assert x.satisfies(OutDegreeSpec(demand))
        gen.meta["inner_instance"] = (inner, edge_map)
        return gen, x
    if fam == "strip":
        idx = gen.meta["index"]
        l = spec.l
        arcs = [(idx[(1, j)], idx[(1, j + 1)]) for j in range(1, l)]
        arcs += [(idx[(2, j)], idx[(2, j + 1)]) for j in range(1, l)]
        arcs += [(idx[(1, 1)], idx[(2, 1)]), (idx[(1, l)], idx[(2, l)])]
        arcs += [(idx[(1, j)], idx[(2, j)]) for j in range(2, l)]  # inner verticals down
        arcs += [(idx[(2, j)], idx[(1, j + 1)]) for j in range(1, l)]  # diagonals up
        x = _oriented_mask(gen.map, arcs)
        _assert_acyclic_bipolar(gen.map, x, idx[(1, 1)], idx[(2, l)])
        return gen, x
    if fam == "grid":
        idx = gen.meta["index"]
        k, l = spec.k, spec.l
        arcs = [(idx[(i, j)], idx[(i, j + 1)]) for i in range(1, k + 1) for j in range(1, l)]
        arcs += [(idx[(i, j)], idx[(i + 1, j)]) for i in range(1, k) for j in range(1, l + 1)]
        x = _oriented_mask(gen.map, arcs)
        _assert_acyclic_bipolar(gen.map, x, idx[(1, 1)], idx[(k, l)])
        return gen, x
    raise NoCanonicalDefined(f"no canonical orientation for {fam}")

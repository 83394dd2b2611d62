"""Planar maps as rotation systems, and the derived map constructions.

A map is stored dart-based.  Edge ``i`` owns the darts ``2*i`` (its canonical
dart) and ``2*i + 1``; ``d ^ 1`` is the reversal of dart ``d``.  Per-vertex
rotations list darts in counterclockwise order.  Faces are the orbits of
``next_rot . reversal``; a face is traversed with its region on the *left* of
every dart, so bounded faces come out counterclockwise and the outer face
clockwise.  Maps are immutable after construction; every operation here
returns a new map.

Torus families are carried by the same class with ``embedded=False``:
rotations are stored but faces and the Euler check are skipped, and such maps
may only be used by the pure counting machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    Disconnected,
    EulerViolation,
    LoopEdge,
    MultiEdge,
    NonSymmetricAdjacency,
    NotThreeConnected,
    SpecialVerticesNotOnOuterFace,
)


@dataclass(frozen=True)
class OutDegreeSpec:
    """Demanded out-degree per vertex.

    ``demand`` may omit vertices; a missing vertex is unconstrained.  That
    relaxation is used by the face-coloring codec; the classical orientation
    problems always supply a total function.
    """

    demand: Mapping[int, int]

    def __post_init__(self):
        for v, a in self.demand.items():
            if a < 0:
                raise ValueError(f"negative demand at vertex {v}")

    def __getitem__(self, v: int) -> int:
        return self.demand[v]

    def get(self, v: int, default=None):
        return self.demand.get(v, default)

    def total(self) -> int:
        return sum(self.demand.values())

    def is_total_for(self, m: "PlanarMap") -> bool:
        return all(v in self.demand for v in range(m.n))

    @staticmethod
    def constant(m: "PlanarMap", value: int) -> "OutDegreeSpec":
        return OutDegreeSpec({v: value for v in range(m.n)})

    @staticmethod
    def from_list(values: Sequence[int]) -> "OutDegreeSpec":
        return OutDegreeSpec(dict(enumerate(values)))


class PlanarMap:
    """Immutable combinatorial embedding with a distinguished outer face."""

    __slots__ = (
        "n",
        "origin",
        "next_rot",
        "prev_rot",
        "outer_dart",
        "embedded",
        "labels",
        "has_multi",
        "has_loops",
        "_vertex_dart",
        "_faces",
        "_face_of_dart",
        "_outer_face",
    )

    def __init__(self, origin, next_rot, outer_dart=None, embedded=True, labels=None):
        self.origin = tuple(origin)
        self.next_rot = tuple(next_rot)
        if len(self.origin) != len(self.next_rot) or len(self.origin) % 2:
            raise ValueError("dart arrays must have equal even length")
        self.n = (max(self.origin) + 1) if self.origin else 0
        self.outer_dart = outer_dart
        self.embedded = embedded
        self.labels = tuple(labels) if labels is not None else None
        prev = [0] * len(self.next_rot)
        for d, e in enumerate(self.next_rot):
            prev[e] = d
        self.prev_rot = tuple(prev)

        seen = {}
        multi = loops = False
        for e in range(self.m):
            u, v = self.origin[2 * e], self.origin[2 * e + 1]
            if u == v:
                loops = True
            key = (min(u, v), max(u, v))
            multi = multi or key in seen
            seen[key] = e
        self.has_multi = multi
        self.has_loops = loops

        first = [None] * self.n
        for d, v in enumerate(self.origin):
            if first[v] is None:
                first[v] = d
        self._vertex_dart = tuple(first)

        self._faces = None
        self._face_of_dart = None
        self._outer_face = None
        if embedded:
            self._compute_faces()
            self._check_euler()

    # -- basic accessors ------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.origin) // 2

    def target(self, d: int) -> int:
        return self.origin[d ^ 1]

    def edge_of(self, d: int) -> int:
        return d >> 1

    def darts_at(self, v: int) -> list[int]:
        """Darts with origin ``v`` in counterclockwise rotation order."""
        d0 = self._vertex_dart[v]
        if d0 is None:
            return []
        out, d = [d0], self.next_rot[d0]
        while d != d0:
            out.append(d)
            d = self.next_rot[d]
        return out

    def degree(self, v: int) -> int:
        return len(self.darts_at(v))

    def neighbors(self, v: int) -> list[int]:
        return [self.target(d) for d in self.darts_at(v)]

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        return self.origin[2 * e], self.origin[2 * e + 1]

    def edges(self) -> list[tuple[int, int]]:
        return [self.edge_endpoints(e) for e in range(self.m)]

    def edge_between(self, u: int, v: int) -> Optional[int]:
        for d in self.darts_at(u):
            if self.target(d) == v:
                return d >> 1
        return None

    def dart_between(self, u: int, v: int) -> Optional[int]:
        for d in self.darts_at(u):
            if self.target(d) == v:
                return d
        return None

    # -- faces ----------------------------------------------------------------

    def face_next(self, d: int) -> int:
        """Next dart along the face on the left of ``d``.

        With counterclockwise rotations this is ``rotation^-1 . reversal``:
        bounded faces are walked counterclockwise, the outer face clockwise.
        """
        return self.prev_rot[d ^ 1]

    def _compute_faces(self):
        m2 = 2 * self.m
        face_of = [-1] * m2
        faces = []
        for d0 in range(m2):
            if face_of[d0] >= 0:
                continue
            idx = len(faces)
            walk, d = [d0], self.face_next(d0)
            face_of[d0] = idx
            while d != d0:
                face_of[d] = idx
                walk.append(d)
                d = self.face_next(d)
            faces.append(tuple(walk))
        self._faces = tuple(faces)
        self._face_of_dart = tuple(face_of)
        if self.outer_dart is not None:
            self._outer_face = face_of[self.outer_dart]

    def _check_euler(self):
        if self.n == 0:
            return
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        if count != self.n:
            raise EulerViolation("map is not connected")
        if self.n - self.m + len(self._faces) != 2:
            raise EulerViolation(
                f"n - m + f = {self.n} - {self.m} + {len(self._faces)} != 2"
            )

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return self._faces

    @property
    def f(self) -> int:
        return len(self._faces)

    def face_of(self, d: int) -> int:
        """Index of the face on the left of dart ``d``."""
        return self._face_of_dart[d]

    @property
    def outer_face(self) -> int:
        return self._outer_face

    def face_vertices(self, fi: int) -> list[int]:
        return [self.origin[d] for d in self._faces[fi]]

    def face_size(self, fi: int) -> int:
        return len(self._faces[fi])

    def outer_vertices(self) -> list[int]:
        """Vertices along the outer face walk (clockwise in the plane)."""
        return self.face_vertices(self._outer_face)

    def bounded_faces(self) -> list[int]:
        return [fi for fi in range(self.f) if fi != self._outer_face]

    def corner_insert_position(self, v: int, fi: int) -> int:
        """A dart ``d`` at ``v`` such that face ``fi`` lies in the corner
        between ``d`` and its rotation successor."""
        for d in self.darts_at(v):
            if self._face_of_dart[d] == fi:
                return d
        raise ValueError(f"vertex {v} not on face {fi}")

    # -- misc -----------------------------------------------------------------

    def degree_list(self) -> list[int]:
        deg = [0] * self.n
        for v in self.origin:
            deg[v] += 1
        return deg

    def __repr__(self):
        kind = "map" if self.embedded else "rotation-system"
        return f"<PlanarMap {kind} n={self.n} m={self.m}>"


# -- construction from neighbor lists -----------------------------------------

def build_map(
    rotations: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
    outer: Optional[tuple[int, int]] = None,
    require_simple: bool = True,
    embedded: bool = True,
    labels=None,
) -> PlanarMap:
    """Build a map from counterclockwise neighbor lists.

    ``outer`` names the dart (vertex, neighbor) that has the unbounded face on
    its left.  With ``require_simple`` the input must have no loops or
    parallel edges; construction outputs that legitimately carry parallel
    edges pass ``require_simple=False`` and are flagged on the result.
    """
    if not isinstance(rotations, Mapping):
        rotations = dict(enumerate(rotations))
    n = len(rotations)
    if set(rotations) != set(range(n)):
        raise NonSymmetricAdjacency("vertex ids must be 0..n-1")

    for v, nbrs in rotations.items():
        for u in nbrs:
            if u == v:
                if require_simple:
                    raise LoopEdge(f"loop at vertex {v}")
            elif rotations[u].count(v) != nbrs.count(u):
                raise NonSymmetricAdjacency(f"edge {{{v},{u}}} is not symmetric")
        if require_simple:
            if len(set(nbrs)) != len(nbrs):
                raise MultiEdge(f"parallel edges at vertex {v}")

    # Assign dart ids per rotation position, then pair the two sides of each
    # edge.  Parallel edges of a planar embedding nest, so the i-th occurrence
    # of u in rot(v) pairs with the (k-i)-th occurrence of v in rot(u); loops
    # pair consecutive occurrences.
    pos_dart = {}
    counter = 0
    slot_list = {v: list(nbrs) for v, nbrs in rotations.items()}
    for v in range(n):
        for i in range(len(slot_list[v])):
            pos_dart[(v, i)] = counter
            counter += 1
    origin = [0] * counter
    next_rot = [0] * counter
    for v in range(n):
        nbrs = slot_list[v]
        k = len(nbrs)
        for i in range(k):
            d = pos_dart[(v, i)]
            origin[d] = v
            next_rot[d] = pos_dart[(v, (i + 1) % k)]

    partner = [-1] * counter
    for v in range(n):
        nbrs = slot_list[v]
        for u in sorted(set(nbrs)):
            if u < v or (u == v):
                continue
            v_slots = [i for i, w in enumerate(nbrs) if w == u]
            u_slots = [i for i, w in enumerate(slot_list[u]) if w == v]
            for a, b in zip(v_slots, reversed(u_slots)):
                partner[pos_dart[(v, a)]] = pos_dart[(u, b)]
                partner[pos_dart[(u, b)]] = pos_dart[(v, a)]
        loop_slots = [i for i, w in enumerate(nbrs) if w == v]
        for a, b in zip(loop_slots[0::2], loop_slots[1::2]):
            partner[pos_dart[(v, a)]] = pos_dart[(v, b)]
            partner[pos_dart[(v, b)]] = pos_dart[(v, a)]
    if any(p < 0 for p in partner):
        raise NonSymmetricAdjacency("unpaired dart (odd loop multiplicity?)")

    # Renumber darts so the two halves of edge i are darts 2i and 2i+1.
    new_id = [-1] * counter
    nxt = 0
    for d in range(counter):
        if new_id[d] < 0:
            new_id[d] = nxt
            new_id[partner[d]] = nxt + 1
            nxt += 2
    org2 = [0] * counter
    rot2 = [0] * counter
    for d in range(counter):
        org2[new_id[d]] = origin[d]
        rot2[new_id[d]] = new_id[next_rot[d]]

    outer_dart = None
    if outer is not None:
        v, u = outer
        cand = [
            new_id[pos_dart[(v, i)]]
            for i, w in enumerate(slot_list.get(v, []))
            if w == u
        ]
        if not cand:
            raise NonSymmetricAdjacency(f"outer dart ({v},{u}) does not exist")
        outer_dart = cand[0]
    return PlanarMap(org2, rot2, outer_dart, embedded=embedded, labels=labels)


def neighbor_rotations(m: PlanarMap) -> list[list[int]]:
    return [m.neighbors(v) for v in range(m.n)]


def with_outer_face(m: PlanarMap, fi: int) -> PlanarMap:
    """Same rotation system with face ``fi`` designated as outer."""
    return PlanarMap(
        m.origin, m.next_rot, m.faces[fi][0], embedded=True, labels=m.labels
    )


# -- isomorphism --------------------------------------------------------------

def _anchored_match(m1: PlanarMap, d1: int, m2: PlanarMap, d2: int, mirror: bool) -> bool:
    """Try to extend dart ``d1 -> d2`` to an isomorphism of rotation systems.

    With ``mirror`` the rotation of ``m2`` is read clockwise.
    """
    if 2 * m1.m != 2 * m2.m or m1.n != m2.n:
        return False
    nxt2 = m2.next_rot
    if mirror:
        inv = [0] * len(nxt2)
        for d, e in enumerate(nxt2):
            inv[e] = d
        nxt2 = inv
    img = [-1] * (2 * m1.m)
    img[d1] = d2
    stack = [d1]
    while stack:
        a = stack.pop()
        b = img[a]
        for a2, b2 in ((a ^ 1, img[a] ^ 1), (m1.next_rot[a], nxt2[b])):
            if img[a2] == -1:
                img[a2] = b2
                stack.append(a2)
            elif img[a2] != b2:
                return False
    # bijectivity on darts follows; check vertex consistency
    vmap = {}
    for a in range(2 * m1.m):
        v, w = m1.origin[a], m2.origin[img[a]]
        if vmap.setdefault(v, w) != w:
            return False
    return len(set(img)) == 2 * m1.m


def maps_isomorphic(m1: PlanarMap, m2: PlanarMap, allow_mirror: bool = True) -> bool:
    """Rotation-system isomorphism by anchored traversal over all dart pairs.

    Quadratic in m; adequate at desk scale.  Outer-face designation and
    labels are ignored.
    """
    if m1.n != m2.n or m1.m != m2.m:
        return False
    if m1.m == 0:
        return True
    if sorted(m1.degree_list()) != sorted(m2.degree_list()):
        return False
    for d2 in range(2 * m2.m):
        if _anchored_match(m1, 0, m2, d2, False):
            return True
        if allow_mirror and _anchored_match(m1, 0, m2, d2, True):
            return True
    return False


# -- connectivity helpers -----------------------------------------------------

def is_connected_without(m: PlanarMap, removed: set[int]) -> bool:
    keep = [v for v in range(m.n) if v not in removed]
    if not keep:
        return True
    seen = {keep[0]}
    stack = [keep[0]]
    while stack:
        v = stack.pop()
        for w in m.neighbors(v):
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(keep)


def is_three_connected(m: PlanarMap) -> bool:
    """Check 3-connectivity by deleting vertex pairs; O(n^2 (n+m))."""
    if m.n < 4:
        return False
    for u in range(m.n):
        for v in range(u + 1, m.n):
            if not is_connected_without(m, {u, v}):
                return False
    return True


# -- dual ---------------------------------------------------------------------

def dual(m: PlanarMap) -> PlanarMap:
    """Dual map: one vertex per face, one edge per primal edge.

    Reuses the primal dart indices: the dual origin of a dart is the face on
    its left and the dual rotation is the face permutation, which makes
    ``dual(dual(m))`` isomorphic to ``m`` for free.  The dual outer face is
    the one corresponding to the origin of the primal outer dart.
    """
    origin = [m.face_of(d) for d in range(2 * m.m)]
    next_rot = [m.face_next(d) for d in range(2 * m.m)]
    outer = m.outer_dart  # its dual face cycle encircles origin(outer_dart)
    return PlanarMap(origin, next_rot, outer_dart=outer, embedded=True)


# -- angle graph ---------------------------------------------------------------

def angle_graph(m: PlanarMap) -> PlanarMap:
    return angle_graph_with_corners(m)[0]


def angle_graph_with_corners(m: PlanarMap):
    """Vertex-face incidence map on V union F; one edge per corner of ``m``.

    Returns ``(map, corner_edge)`` where ``corner_edge[d]`` is the angle edge
    of the corner that dart ``d`` spans, joining ``origin(d)`` and the vertex
    of ``face_of(d)`` (face ``fi`` becomes vertex ``n + fi``).  The result is
    bipartite and every face is the quadrilateral of one primal edge.
    """
    rotations: list[list[tuple[int, int]]] = []
    for v in range(m.n):
        rotations.append([("a", d) for d in m.darts_at(v)])
    for fi, walk in enumerate(m.faces):
        rotations.append([("b", d) for d in walk])

    # Assemble darts directly: angle edge d has an "a" side (at the vertex)
    # and a "b" side (at the face).
    pos_of = {}
    counter = 0
    for vid, rot in enumerate(rotations):
        for i, key in enumerate(rot):
            pos_of[key] = counter
            counter += 1
    origin = [0] * counter
    next_rot = [0] * counter
    base = 0
    for vid, rot in enumerate(rotations):
        k = len(rot)
        for i in range(k):
            d = base + i
            origin[d] = vid
            next_rot[d] = base + (i + 1) % k
        base += k
    partner = [0] * counter
    for d in range(2 * m.m):
        a, b = pos_of[("a", d)], pos_of[("b", d)]
        partner[a] = b
        partner[b] = a

    new_id = [-1] * counter
    nxt = 0
    for d in range(counter):
        if new_id[d] < 0:
            new_id[d] = nxt
            new_id[partner[d]] = nxt + 1
            nxt += 2
    org2 = [0] * counter
    rot2 = [0] * counter
    for d in range(counter):
        org2[new_id[d]] = origin[d]
        rot2[new_id[d]] = new_id[next_rot[d]]

    corner_edge = [new_id[pos_of[("a", d)]] >> 1 for d in range(2 * m.m)]
    out = new_id[pos_of[("a", m.outer_dart)]]
    amap = PlanarMap(org2, rot2, outer_dart=out, embedded=True)
    return amap, corner_edge


def angle_vertex_of_face(m: PlanarMap, fi: int) -> int:
    """Vertex id of face ``fi`` inside ``angle_graph(m)``."""
    return m.n + fi


# -- subdivision ---------------------------------------------------------------

def subdivide(m: PlanarMap, spec: Optional[OutDegreeSpec] = None):
    """Subdivide every edge once.

    Returns ``(map, spec2)`` where the new map is bipartite (original
    vertices versus subdivision vertices, which take ids n..n+m-1) and the
    demands extend ``spec`` by out-degree 1 at every subdivision vertex.
    """
    rotations = []
    for v in range(m.n):
        rotations.append([m.n + (d >> 1) for d in m.darts_at(v)])
    for e in range(m.m):
        u, v = m.edge_endpoints(e)
        rotations.append([u, v])
    outer = None
    if m.outer_dart is not None:
        outer = (m.origin[m.outer_dart], m.n + (m.outer_dart >> 1))
    sub = build_map(
        rotations, outer=outer, require_simple=False, embedded=m.embedded
    )
    demand = {}
    if spec is not None:
        demand.update({v: spec[v] for v in range(m.n) if spec.get(v) is not None})
    demand.update({m.n + e: 1 for e in range(m.m)})
    return sub, OutDegreeSpec(demand)


# -- edge deletion -------------------------------------------------------------

def delete_edges(m: PlanarMap, dead: Iterable[int], drop_isolated: bool = False):
    """Map with the given edges removed.

    Returns ``(map2, edge_map, vertex_map)`` where ``edge_map[new_edge]`` is
    the original edge id and ``vertex_map[new_vertex]`` the original vertex.
    The new outer face is the face that absorbed the old outer region.  The
    result must stay connected.
    """
    dead = set(dead)
    keep_darts = [d for d in range(2 * m.m) if (d >> 1) not in dead]
    if not keep_darts:
        raise Disconnected("cannot delete every edge")
    vkeep = sorted({m.origin[d] for d in keep_darts})
    if not drop_isolated:
        vkeep = sorted(set(vkeep) | set(range(m.n)))
    vmap = {v: i for i, v in enumerate(vkeep)}

    rotations = [[] for _ in vkeep]
    for v in vkeep:
        for d in m.darts_at(v):
            if (d >> 1) not in dead:
                rotations[vmap[v]].append(d)

    pos_of = {}
    counter = 0
    origin = []
    next_rot_l = []
    base = 0
    for vid, rot in enumerate(rotations):
        for i, d in enumerate(rot):
            pos_of[d] = base + i
        for i, d in enumerate(rot):
            origin.append(vid)
            next_rot_l.append(base + (i + 1) % len(rot))
        base += len(rot)

    new_id = [-1] * base
    nxt = 0
    edge_map = []
    for d in keep_darts:
        p = pos_of[d]
        if new_id[p] < 0:
            new_id[p] = nxt
            new_id[pos_of[d ^ 1]] = nxt + 1
            edge_map.append(d >> 1)
            nxt += 2
    org2 = [0] * base
    rot2 = [0] * base
    for d in keep_darts:
        p = pos_of[d]
        org2[new_id[p]] = origin[p]
        rot2[new_id[p]] = new_id[next_rot_l[p]]

    outer_dart = None
    if m.embedded and m.outer_dart is not None:
        # The old outer region merges into the face holding the surviving
        # darts of any face adjacent to it across a deleted edge, or keeps its
        # own surviving darts.
        probe = None
        region = {m.outer_face}
        frontier = [m.outer_face]
        while frontier and probe is None:
            fi = frontier.pop()
            for d in m.faces[fi]:
                if (d >> 1) not in dead:
                    probe = d
                    break
                f2 = m.face_of(d ^ 1)
                if f2 not in region:
                    region.add(f2)
                    frontier.append(f2)
        if probe is not None:
            outer_dart = new_id[pos_of[probe]]
    m2 = PlanarMap(org2, rot2, outer_dart, embedded=m.embedded)
    return m2, edge_map, vkeep

"""Bipolar orientations and their encodings.

Four interlocking pieces:

* the angle-graph correspondence: bipolar orientations of a map match the
  orientations of its vertex-face incidence map in which every vertex has
  out-degree 2 except the two poles, which are sinks;
* the plus/minus codec for inner triangulations: each bounded triangle is
  signed by the side its short-cut (source-to-sink) edge sees it on, and the
  orientation can be rebuilt from the signs by a vertex rule and a face rule;
* the sign-vector validity criterion through unique perfect matchings of the
  two sign-induced halves of the reduced angle graph;
* the sparse-sequence codec for two-row triangular strips and the face
  3-coloring codec for grid-like quadrangular maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import CountResult, EdgeOrientation, count, enumerate_orientations
from .errors import AxiomViolation, InvalidInput, NotGridLike, NotInnerTriangulation, Stalled
from .maps import OutDegreeSpec, PlanarMap, angle_graph_with_corners


@dataclass
class BipolarOrientation:
    map: PlanarMap
    x: EdgeOrientation
    source: int
    sink: int

    def __eq__(self, other):
        return (
            isinstance(other, BipolarOrientation)
            and self.map is other.map
            and self.x == other.x
            and (self.source, self.sink) == (other.source, other.sink)
        )

    def __hash__(self):
        return hash((id(self.map), self.x.mask, self.source, self.sink))


class BipolarImplicationGap(AssertionError):
    """Local properties held but the orientation was not bipolar; the theory
    says this cannot happen, so surface it loudly."""


def _is_acyclic(m: PlanarMap, x: EdgeOrientation) -> bool:
    color = [0] * m.n
    for root in range(m.n):
        if color[root]:
            continue
        stack = [(root, iter(x.out_darts(root)))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            adv = False
            for d in it:
                w = m.target(d)
                if color[w] == 1:
                    return False
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(x.out_darts(w))))
                    adv = True
                    break
            if not adv:
                color[v] = 2
                stack.pop()
    return True


def is_bipolar(m: PlanarMap, x: EdgeOrientation, s: int, t: int) -> bool:
    """Acyclic with unique source s and unique sink t."""
    outdeg = x.out_degrees()
    indeg = [m.degree(v) - outdeg[v] for v in range(m.n)]
    if [v for v in range(m.n) if indeg[v] == 0] != [s]:
        return False
    if [v for v in range(m.n) if outdeg[v] == 0] != [t]:
        return False
    return _is_acyclic(m, x)


def bipolar_check(b: BipolarOrientation) -> bool:
    """Local characterization: interior vertices have both in- and out-edges
    and no face boundary is a directed cycle.

    Whenever the two local properties hold, the stronger bundle and face
    source/sink properties are asserted too; a failure there would falsify
    the characterization and raises BipolarImplicationGap.
    """
    m, x, s, t = b.map, b.x, b.source, b.sink
    outdeg = x.out_degrees()
    prop1 = all(
        0 < outdeg[v] < m.degree(v) for v in range(m.n) if v not in (s, t)
    )
    prop1 = prop1 and outdeg[s] == m.degree(s) and outdeg[t] == 0
    prop2 = not any(
        all(x.is_dart_directed(d) for d in walk)
        or all(x.is_dart_directed(d ^ 1) for d in walk)
        for walk in m.faces
    )
    if not (prop1 and prop2):
        return False
    if not (_bundles_consecutive(b) and _faces_one_source_one_sink(b)):
        raise BipolarImplicationGap("local properties held but bundles/faces failed")
    if not is_bipolar(m, x, s, t):
        raise BipolarImplicationGap("local properties held but orientation not bipolar")
    return True


def _bundles_consecutive(b: BipolarOrientation) -> bool:
    m, x = b.map, b.x
    for v in range(m.n):
        if v in (b.source, b.sink):
            continue
        flags = [x.is_dart_directed(d) for d in m.darts_at(v)]
        switches = sum(flags[i] != flags[i - 1] for i in range(len(flags)))
        if switches != 2:
            return False
    return True


def _faces_one_source_one_sink(b: BipolarOrientation) -> bool:
    m, x = b.map, b.x
    for walk in m.faces:
        k = len(walk)
        sources = sinks = 0
        for i in range(k):
            into = x.is_dart_directed(walk[i - 1])  # arrives at this corner
            outof = x.is_dart_directed(walk[i])
            if outof and not into:
                sources += 1
            if into and not outof:
                sinks += 1
        if sources != 1 or sinks != 1:
            return False
    return True


def enumerate_bipolar_bruteforce(m: PlanarMap, s: int, t: int) -> list[BipolarOrientation]:
    """All bipolar orientations by sweeping every edge orientation."""
    out = []
    for mask in range(1 << m.m):
        x = EdgeOrientation(m, mask)
        if is_bipolar(m, x, s, t):
            out.append(BipolarOrientation(m, x, s, t))
    return out


# -- angle-graph correspondence ---------------------------------------------------


@dataclass
class AngleInstance:
    base: PlanarMap
    amap: PlanarMap
    corner_edge: list[int]  # base dart -> angle edge
    spec: OutDegreeSpec
    source: int
    sink: int


def angle_instance(m: PlanarMap, s: int, t: int) -> AngleInstance:
    """Out-degree-2 demands on the angle graph with sinks at the poles."""
    amap, corner_edge = angle_graph_with_corners(m)
    demand = {v: 2 for v in range(amap.n)}
    demand[s] = 0
    demand[t] = 0
    return AngleInstance(m, amap, corner_edge, OutDegreeSpec(demand), s, t)


def bipolar_to_angle(inst: AngleInstance, b: BipolarOrientation) -> EdgeOrientation:
    """Corner edges point from a vertex to its two lateral faces and from a
    face to its source and its sink."""
    m, x = b.map, b.x
    mask = 0
    for d in range(2 * m.m):
        v = m.origin[d]
        e_here = x.is_dart_directed(d)
        e_next = x.is_dart_directed(m.next_rot[d])
        to_face = e_here != e_next  # lateral corner at v
        ae = inst.corner_edge[d]
        # angle edge joins v and n + face_of(d); orient v -> face iff lateral
        dart0_origin = inst.amap.origin[2 * ae]
        v_is_canon = dart0_origin == v
        if to_face == v_is_canon:
            mask |= 1 << ae
    return EdgeOrientation(inst.amap, mask)


def angle_to_bipolar(inst: AngleInstance, y: EdgeOrientation) -> BipolarOrientation:
    """Inverse of ``bipolar_to_angle``; propagates bundle membership from the
    source."""
    m, s, t = inst.base, inst.source, inst.sink
    if not y.satisfies(inst.spec):
        raise InvalidInput("not a 2-orientation with sinks at the poles")
    lateral: dict[int, list[int]] = {v: [] for v in range(m.n)}
    for d in range(2 * m.m):
        v = m.origin[d]
        if v in (s, t):
            continue
        ae = inst.corner_edge[d]
        towards_face = y.is_dart_directed(2 * ae) == (inst.amap.origin[2 * ae] == v)
        if towards_face:
            lateral[v].append(d)

    direction: dict[int, bool] = {}  # edge -> directed along canonical dart

    def set_dart(d, outward):
        e = d >> 1
        val = outward == (d % 2 == 0)
        if direction.setdefault(e, val) != val:
            raise InvalidInput("inconsistent decode")

    for d in m.darts_at(s):
        set_dart(d, True)
    resolved = {s}
    queue = [s]
    while queue:
        u = queue.pop()
        for du in m.darts_at(u):
            w = m.target(du)
            if w in resolved or w in (s, t):
                continue
            if (du ^ 1) >> 1 not in direction and du >> 1 not in direction:
                continue
            darts = m.darts_at(w)
            if len(lateral[w]) != 2:
                raise InvalidInput(f"vertex {w} does not have two lateral corners")
            # lateral corner after dart d: bundle switch between d and next.
            a, bd = lateral[w]
            ia, ib = darts.index(a), darts.index(bd)
            k = len(darts)
            arc1 = [darts[(ia + 1 + i) % k] for i in range((ib - ia) % k)]
            arc2 = [darts[(ib + 1 + i) % k] for i in range((ia - ib) % k)]
            known = du ^ 1
            e = known >> 1
            outward = direction[e] == (known % 2 == 0)
            in_arc1 = known in arc1
            for d2 in arc1:
                set_dart(d2, outward if in_arc1 else not outward)
            for d2 in arc2:
                set_dart(d2, not outward if in_arc1 else outward)
            resolved.add(w)
            queue.append(w)
    for d in m.darts_at(t):
        set_dart(d, False)
    if len(direction) != m.m:
        raise InvalidInput("decode did not reach every edge")
    mask = 0
    for e, val in direction.items():
        if val:
            mask |= 1 << e
    b = BipolarOrientation(m, EdgeOrientation(m, mask), s, t)
    if not is_bipolar(m, b.x, s, t):
        raise InvalidInput("decoded orientation is not bipolar")
    return b


def count_bipolar_via_angle(m: PlanarMap, s: int, t: int) -> CountResult:
    inst = angle_instance(m, s, t)
    return count(inst.amap, inst.spec)


def enumerate_bipolar_via_angle(m: PlanarMap, s: int, t: int) -> list[BipolarOrientation]:
    inst = angle_instance(m, s, t)
    return [angle_to_bipolar(inst, y) for y in enumerate_orientations(inst.amap, inst.spec)]


# -- plus/minus codec --------------------------------------------------------------


def _require_inner_triangulation(m: PlanarMap):
    for fi in range(m.f):
        if fi != m.outer_face and m.face_size(fi) != 3:
            raise NotInnerTriangulation(f"bounded face {fi} has size {m.face_size(fi)}")


def _triangle_pattern(m: PlanarMap, x_has, fi):
    """(source_corner, sink_corner, direct_dart) of an acyclically oriented
    triangle, or None if it is a directed cycle."""
    walk = m.faces[fi]
    dirs = [x_has(d) for d in walk]
    if all(dirs) or not any(dirs):
        return None
    verts = [m.origin[d] for d in walk]
    src = snk = None
    for i in range(3):
        # dart walk[i-1] ends at verts[i]: directed means it points into it
        into = dirs[i - 1]
        outof = dirs[i]
        if outof and not into:
            src = i
        if into and not outof:
            snk = i
    u, w = verts[src], verts[snk]
    d = m.dart_between(u, w)
    return u, w, d


def sign_encode(b: BipolarOrientation) -> dict[int, str]:
    """Sign per bounded face: '+' iff the face lies left of its direct
    source-to-sink dart, i.e. that dart is on the face's own walk."""
    m, x = b.map, b.x
    _require_inner_triangulation(m)
    signs = {}
    for fi in range(m.f):
        if fi == m.outer_face:
            continue
        pat = _triangle_pattern(m, x.is_dart_directed, fi)
        if pat is None:
            raise InvalidInput("directed facial triangle; not bipolar")
        _, _, d = pat
        signs[fi] = "+" if m.face_of(d) == fi else "-"
    return signs


def sign_decode(
    m: PlanarMap, s: int, t: int, signs: dict[int, str]
) -> BipolarOrientation:
    """Rebuild the orientation from bounded-face signs.

    Vertex rule: a run of undecided edges flanked by two outgoing edges at a
    vertex that already has an incoming edge is oriented outward.  Face rule:
    a triangle with two decided edges gets its third from the sign.  Raises
    Stalled or AxiomViolation when the vector is not an encoding.
    """
    _require_inner_triangulation(m)
    state: dict[int, bool] = {}  # dart -> directed? (both darts recorded)

    def decided(e):
        return 2 * e in state

    def set_edge(d, along):
        state[d] = along
        state[d ^ 1] = not along

    walk = m.faces[m.outer_face]
    verts = [m.origin[d] for d in walk]
    if s not in verts or t not in verts:
        raise InvalidInput("poles must lie on the outer face")
    i_s = verts.index(s)
    rot = walk[i_s:] + walk[:i_s]
    seg = 0  # before reaching t: walk runs s -> t, orient along
    for d in rot:
        if m.origin[d] == t:
            seg = 1
        set_edge(d, seg == 0)

    changed = True
    while changed and len(state) < 2 * m.m:
        changed = False
        # vertex rule; at the source every edge is outgoing, so the rule is
        # sound there without a known incoming edge
        for v in range(m.n):
            darts = m.darts_at(v)
            know = [state.get(d) for d in darts]
            has_in = any(k is False for k in know)
            has_out = any(k is True for k in know)
            if not has_out or not (has_in or v == s):
                continue
            k = len(darts)
            for i in range(k):
                if know[i] is not None:
                    continue
                a = i
                while know[a % k] is None:
                    a -= 1
                bnd = i
                while know[bnd % k] is None:
                    bnd += 1
                if know[a % k] is True and know[bnd % k] is True:
                    set_edge(darts[i], True)
                    know[i] = True
                    changed = True
        # face rule
        for fi in range(m.f):
            if fi == m.outer_face:
                continue
            wk = m.faces[fi]
            undecided = [d for d in wk if d not in state]
            if len(undecided) != 1:
                continue
            d = undecided[0]
            sign = signs.get(fi)
            ok_vals = []
            for along in (True, False):
                trial = dict(state)
                trial[d] = along
                trial[d ^ 1] = not along
                pat = _triangle_pattern(m, lambda q: trial.get(q, False), fi)
                if pat is None:
                    continue
                _, _, direct = pat
                got = "+" if m.face_of(direct) == fi else "-"
                if got == sign:
                    ok_vals.append(along)
            if len(ok_vals) == 1:
                set_edge(d, ok_vals[0])
                changed = True
            elif len(ok_vals) == 0:
                raise AxiomViolation(f"no orientation of face {fi} matches its sign")
    if len(state) < 2 * m.m:
        raise Stalled(f"{m.m - len(state) // 2} edges left undecided")
    mask = 0
    for e in range(m.m):
        if state[2 * e]:
            mask |= 1 << e
    b = BipolarOrientation(m, EdgeOrientation(m, mask), s, t)
    if not is_bipolar(m, b.x, s, t):
        raise AxiomViolation("decoded orientation is not bipolar")
    if sign_encode(b) != signs:
        raise AxiomViolation("decoded orientation re-encodes differently")
    return b


def outer_sign_convention(m: PlanarMap, s: int, t: int) -> str:
    """Sign of the unbounded face: '+' iff the bounded face on the pole edge
    is signed '-' in encodings.

    In every valid encoding the face on the pole edge has the same sign,
    fixed by which side of the source-to-sink dart it lies on, so the outer
    sign is a constant of the map and poles.  Pinning it this way (rather
    than reading the tested vector's entry) is what lets the matching
    criterion reject the complement of a valid vector, which would otherwise
    produce the identical pair of subgraphs.
    """
    d = m.dart_between(s, t)
    if d is None:
        raise InvalidInput("poles must be adjacent for the matching criterion")
    st_face_sign = "+" if m.face_of(d) != m.outer_face else "-"
    return "+" if st_face_sign == "-" else "-"


def sign_validity_matching(
    m: PlanarMap, s: int, t: int, signs: dict[int, str]
) -> bool:
    """Criterion for a sign vector to encode a bipolar orientation: both
    sign-induced halves of the reduced angle graph must have a unique perfect
    matching.  ``signs`` covers bounded faces; the outer sign follows the
    convention above."""
    from .matchings import BipartiteGraph, unique_perfect_matching

    full = dict(signs)
    full[m.outer_face] = outer_sign_convention(m, s, t)
    amap, corner_edge = angle_graph_with_corners(m)
    keep_v = [v for v in range(m.n) if v not in (s, t)]
    result = True
    for sgn in ("+", "-"):
        faces = [fi for fi, sg in full.items() if sg == sgn]
        a_side = {v: i for i, v in enumerate(keep_v)}
        b_side = {m.n + fi: i for i, fi in enumerate(faces)}
        edges = set()
        for d in range(2 * m.m):
            v, fv = m.origin[d], m.n + m.face_of(d)
            if v in a_side and fv in b_side:
                edges.add((a_side[v], b_side[fv]))
        g = BipartiteGraph(len(keep_v), len(faces), sorted(edges))
        result = result and unique_perfect_matching(g)
    return result


# -- sparse-sequence codec for two-row strips ----------------------------------------


def strip_inner_edges(gen_meta: dict, m: PlanarMap, l: int) -> list[int]:
    """Inner edges of the two-row strip in left-to-right order: diagonal,
    vertical, diagonal, ..., diagonal."""
    idx = gen_meta["index"]
    order = []
    for j in range(1, l):
        order.append(m.edge_between(idx[(2, j)], idx[(1, j + 1)]))
        if j + 1 <= l - 1:
            order.append(m.edge_between(idx[(1, j + 1)], idx[(2, j + 1)]))
    return order


def strip_encode(gen_meta, b: BipolarOrientation, l: int) -> tuple[int, ...]:
    """0/1 per inner edge, 1 where the direction differs from the standard
    orientation (inner verticals down, diagonals up)."""
    m = b.map
    idx = gen_meta["index"]
    bits = []
    for e in strip_inner_edges(gen_meta, m, l):
        u, v = m.origin[2 * e], m.origin[2 * e + 1]
        coord_u = next(c for c, w in idx.items() if w == u)
        coord_v = next(c for c, w in idx.items() if w == v)
        if coord_u[0] == coord_v[0]:
            raise InvalidInput("not an inner edge")
        diagonal = coord_u[1] != coord_v[1]
        lo = u if coord_u[0] == 2 else v  # row-2 endpoint
        hi = v if lo == u else u
        d = m.dart_between(lo, hi)  # upward dart
        upward = b.x.is_dart_directed(d)
        standard_up = diagonal
        bits.append(0 if upward == standard_up else 1)
    return tuple(bits)


def strip_decode(gen, seq) -> BipolarOrientation:
    """Bipolar orientation of the strip from a sparse sequence."""
    if any(a and b for a, b in zip(seq, seq[1:])):
        raise InvalidInput("sequence has consecutive ones; not sparse")
    m = gen.map
    idx = gen.meta["index"]
    l = gen.spec.l
    s, t = idx[(1, 1)], idx[(2, l)]
    mask = 0

    def orient(u, v):
        nonlocal mask
        d = m.dart_between(u, v)
        if d % 2 == 0:
            mask |= 1 << (d >> 1)

    for j in range(1, l):
        orient(idx[(1, j)], idx[(1, j + 1)])
        orient(idx[(2, j)], idx[(2, j + 1)])
    orient(idx[(1, 1)], idx[(2, 1)])
    orient(idx[(1, l)], idx[(2, l)])
    inner = strip_inner_edges(gen.meta, m, l)
    if len(seq) != len(inner):
        raise InvalidInput("length mismatch")
    pos = 0
    for j in range(1, l):
        flip_bit = seq[pos]
        pos += 1
        u, v = idx[(2, j)], idx[(1, j + 1)]  # standard: up
        orient(*(v, u) if flip_bit else (u, v))
        if j + 1 <= l - 1:
            flip_bit = seq[pos]
            pos += 1
            u, v = idx[(1, j + 1)], idx[(2, j + 1)]  # standard: down
            orient(*(v, u) if flip_bit else (u, v))
    b = BipolarOrientation(m, EdgeOrientation(m, mask), s, t)
    if not is_bipolar(m, b.x, s, t):
        raise InvalidInput("sequence does not give a bipolar orientation")
    return b


# -- face 3-colorings of grid-like quadrangular maps ----------------------------------


def tilted_grid(k: int, l: int) -> PlanarMap:
    """The 45-degree grid: lattice points plus cell centers, one edge from
    each center to its four corners.  This is the core of the angle graph of
    the k x l grid once the rigid fringe at the far vertex is stripped; all
    bounded faces are diamonds and interior vertices have degree 4."""
    from .families import map_from_points

    pts = []
    idx = {}
    for i in range(1, k + 1):
        for j in range(1, l + 1):
            idx[("v", i, j)] = len(pts)
            pts.append((2 * j, -2 * i))
    for i in range(1, k):
        for j in range(1, l):
            idx[("f", i, j)] = len(pts)
            pts.append((2 * j + 1, -2 * i - 1))
    segs = []
    for i in range(1, k):
        for j in range(1, l):
            c = idx[("f", i, j)]
            for (di, dj) in ((0, 0), (0, 1), (1, 0), (1, 1)):
                segs.append((c, idx[("v", i + di, j + dj)]))
    return map_from_points(pts, segs)


def _interior_edges(m: PlanarMap) -> list[int]:
    return [
        e
        for e in range(m.m)
        if m.face_of(2 * e) != m.outer_face and m.face_of(2 * e + 1) != m.outer_face
    ]


def inner_vertices(m: PlanarMap) -> list[int]:
    on_outer = {m.origin[d] for d in m.faces[m.outer_face]}
    return [v for v in range(m.n) if v not in on_outer]


def inner_two_orientation_spec(m: PlanarMap) -> tuple[list[int], OutDegreeSpec]:
    """Demand out-degree 2 at interior vertices over the interior edges only;
    boundary vertices are unconstrained."""
    inner = inner_vertices(m)
    for v in inner:
        if m.degree(v) != 4:
            raise NotGridLike(f"inner vertex {v} has degree {m.degree(v)}")
    return _interior_edges(m), OutDegreeSpec({v: 2 for v in inner})


def coloring_from_orientation(
    m: PlanarMap, direction: dict[int, bool], reference_face: Optional[int] = None
) -> dict[int, int]:
    """Face 3-coloring from an interior-edge orientation.

    Crossing a directed edge from its left face to its right face raises the
    color by one (mod 3).  Consistency around interior vertices is exactly
    the out-degree-2 condition; inconsistency raises NotGridLike.
    """
    interior = _interior_edges(m)
    if set(direction) != set(interior):
        raise InvalidInput("need exactly the interior edges oriented")
    if reference_face is None:
        reference_face = next(fi for fi in range(m.f) if fi != m.outer_face)
    colors = {reference_face: 0}
    queue = [reference_face]
    while queue:
        fi = queue.pop()
        for d in m.faces[fi]:
            e = d >> 1
            if e not in direction:
                continue
            dd = 2 * e if direction[e] else 2 * e + 1
            left, right = m.face_of(dd), m.face_of(dd ^ 1)
            other = right if fi == left else left
            want = (colors[fi] + (1 if fi == left else -1)) % 3
            if other in colors:
                if colors[other] != want:
                    raise NotGridLike("inconsistent coloring; not an ice-type orientation")
            else:
                colors[other] = want
                queue.append(other)
    if len(colors) != m.f - 1:
        raise NotGridLike("bounded faces are not connected through interior edges")
    return colors


def orientation_from_coloring(m: PlanarMap, colors: dict[int, int]) -> dict[int, bool]:
    """Interior-edge orientation from a proper face 3-coloring."""
    direction = {}
    for e in _interior_edges(m):
        left, right = m.face_of(2 * e), m.face_of(2 * e + 1)
        diff = (colors[right] - colors[left]) % 3
        if diff == 1:
            direction[e] = True
        elif diff == 2:
            direction[e] = False
        else:
            raise InvalidInput("adjacent faces share a color")
    return direction


def enumerate_proper_3colorings(m: PlanarMap) -> list[dict[int, int]]:
    """All proper 3-colorings of the bounded faces (adjacency via shared
    edges); backtracking, for small maps."""
    bounded = [fi for fi in range(m.f) if fi != m.outer_face]
    adj = {fi: set() for fi in bounded}
    for e in _interior_edges(m):
        a, b = m.face_of(2 * e), m.face_of(2 * e + 1)
        adj[a].add(b)
        adj[b].add(a)
    out = []
    colors: dict[int, int] = {}

    def rec(i):
        if i == len(bounded):
            out.append(dict(colors))
            return
        fi = bounded[i]
        for c in range(3):
            if all(colors.get(g) != c for g in adj[fi]):
                colors[fi] = c
                rec(i + 1)
                del colors[fi]

    rec(0)
    return out

"""Exhaustive ground truth for small instances.

Planar embeddings are enumerated directly: a spanning tree is embedded in
every bimodal way, then each remaining edge is inserted into every face
containing both of its endpoints.  Angle labels follow from the rotation
system except for the choice of the large angle at every switch vertex,
which is decided by a matching of switches to faces.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import CapExceeded, DisconnectedInput
from .graph import Digraph, connected_components, is_connected
from .shapes import IN, OUT, FeasibleSet, Shape, contract, flip, validate_shape

DEFAULT_CAP = 8

# an angle at vertex x lies between the edge entering the walk and the edge leaving it
Angle = tuple[int, int, int]


def oracle_cap() -> int:
    return int(os.environ.get("UPLANAR_ORACLE_CAP", DEFAULT_CAP))


def _check_cap(g: Digraph, cap: Optional[int]) -> None:
    cap = oracle_cap() if cap is None else cap
    if g.n > cap or g.m > 2 * cap:
        raise CapExceeded(f"oracle limited to n <= {cap} and m <= {2 * cap}; got n={g.n}, m={g.m}")


@dataclass(frozen=True)
class EmbeddingCertificate:
    rotation: tuple[tuple[int, ...], ...]
    outer_face: int
    faces: tuple[tuple[Angle, ...], ...]
    labels: dict[Angle, int]

    def to_json(self) -> dict:
        return {
            "rotation": [list(r) for r in self.rotation],
            "outer_face": self.outer_face,
            "faces": [[list(a) for a in f] for f in self.faces],
            "labels": [[*a, lab] for a, lab in sorted(self.labels.items())],
        }


# ---------------------------------------------------------------------------
# Embedding enumeration
# ---------------------------------------------------------------------------


def _is_in(g: Digraph, e: int, x: int) -> bool:
    return g.edges[e][1] == x


def _bimodal(g: Digraph, x: int, rot: list[int]) -> bool:
    if len(rot) <= 2:
        return True
    flags = [_is_in(g, e, x) for e in rot]
    changes = sum(flags[i] != flags[i - 1] for i in range(len(flags)))
    return changes <= 2


def trace_faces(g: Digraph, rotation) -> list[tuple[Angle, ...]]:
    """Faces of a rotation system (possibly covering only some edges) as cyclic angle lists.

    The walk along edge ``e`` into ``y`` continues with the successor of
    ``e`` in ``rotation[y]``.
    """
    pos = [{e: i for i, e in enumerate(r)} for r in rotation]
    present = sorted({e for r in rotation for e in r})
    seen = set()
    faces = []
    for e in present:
        a, b = g.edges[e]
        for start in ((e, a), (e, b)):
            if start in seen:
                continue
            face = []
            dart = start
            while dart not in seen:
                seen.add(dart)
                edge, x = dart
                y = g.other(edge, x)
                r = rotation[y]
                nxt = r[(pos[y][edge] + 1) % len(r)]
                face.append((y, edge, nxt))
                dart = (nxt, y)
            faces.append(tuple(face))
    return faces


def _spanning_tree(g: Digraph) -> tuple[list[int], list[int]]:
    seen = [False] * g.n
    seen[0] = True
    tree, rest = [], []
    stack = [0]
    used = set()
    while stack:
        x = stack.pop()
        for e in g.incidence[x]:
            y = g.other(e, x)
            if not seen[y]:
                seen[y] = True
                tree.append(e)
                used.add(e)
                stack.append(y)
    rest = [e for e in range(g.m) if e not in used]
    return tree, rest


def iter_embeddings(g: Digraph) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every bimodal planar rotation system of a connected multigraph."""
    if g.n == 1:
        yield ((),)
        return
    tree, rest = _spanning_tree(g)
    tree_inc: list[list[int]] = [[] for _ in range(g.n)]
    for e in tree:
        a, b = g.edges[e]
        tree_inc[a].append(e)
        tree_inc[b].append(e)
    per_vertex = []
    for x in range(g.n):
        inc = tree_inc[x]
        orders = [[inc[0], *p] for p in itertools.permutations(inc[1:])] if inc else [[]]
        per_vertex.append([o for o in orders if _bimodal(g, x, o)])

    def insert(rot: list[list[int]], i: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i == len(rest):
            yield tuple(tuple(r) for r in rot)
            return
        e = rest[i]
        a, b = g.edges[e]
        for face in trace_faces(g, rot):
            at_a = [ang for ang in face if ang[0] == a]
            at_b = [ang for ang in face if ang[0] == b]
            for _, ea, _ in at_a:
                for _, eb, _ in at_b:
                    new = [list(r) for r in rot]
                    new[a].insert(new[a].index(ea) + 1, e)
                    new[b].insert(new[b].index(eb) + 1, e)
                    if _bimodal(g, a, new[a]) and _bimodal(g, b, new[b]):
                        yield from insert(new, i + 1)

    for combo in itertools.product(*per_vertex):
        yield from insert([list(r) for r in combo], 0)


# ---------------------------------------------------------------------------
# Angle labels
# ---------------------------------------------------------------------------


def _switch_angle(g: Digraph, ang: Angle) -> bool:
    x, e1, e2 = ang
    return _is_in(g, e1, x) == _is_in(g, e2, x)


def _is_switch(g: Digraph, x: int) -> bool:
    dirs = {_is_in(g, e, x) for e in g.incidence[x]}
    return len(dirs) == 1


class _Labeling:
    """Face demands of one embedding: how many large angles every face needs."""

    def __init__(self, g: Digraph, faces: list[tuple[Angle, ...]]) -> None:
        self.g = g
        self.faces = faces
        self.switches = [x for x in range(g.n) if g.incidence[x] and _is_switch(g, x)]
        # default label: flat for non-switch angles, small for switch angles
        self.base = [sum(-1 for a in f if _switch_angle(g, a)) for f in faces]
        self.faces_of: dict[int, list[tuple[int, Angle]]] = {x: [] for x in self.switches}
        for i, f in enumerate(faces):
            for a in f:
                if a[0] in self.faces_of:
                    self.faces_of[a[0]].append((i, a))

    def demand(self, i: int, outer: int) -> Optional[int]:
        target = 2 if i == outer else -2
        diff = target - self.base[i]
        if diff < 0 or diff % 2:
            return None
        return diff // 2

    def assignable(self, outer: int, fixed: Optional[dict[int, Optional[int]]] = None) -> bool:
        """Can every switch pick a face for its large angle so all demands hold?

        ``fixed`` maps some switches to a face (or to ``None``: not the outer face);
        the outer face's demand must then be met exactly by the fixed picks.
        """
        fixed = fixed or {}
        demands = []
        for i in range(len(self.faces)):
            d = self.demand(i, outer)
            if d is None:
                return False
            demands.append(d)
        free = []
        for x in self.switches:
            if x in fixed and fixed[x] is not None:
                demands[fixed[x]] -= 1
                if demands[fixed[x]] < 0:
                    return False
            else:
                free.append(x)
        if sum(demands) != len(free):
            return False
        slots = [i for i, d in enumerate(demands) for _ in range(d)]
        adj = []
        for x in free:
            options = {i for i, _ in self.faces_of[x]}
            if x in fixed:
                options.discard(outer)
            adj.append([k for k, i in enumerate(slots) if i in options])
        return _perfect(adj, len(slots))

    def assignments(self, outer: int) -> Iterator[dict[int, Angle]]:
        """Every choice of large angle per switch meeting all demands."""
        demands = [self.demand(i, outer) for i in range(len(self.faces))]
        if any(d is None for d in demands):
            return
        order = self.switches
        pick: dict[int, Angle] = {}

        def rec(k: int) -> Iterator[dict[int, Angle]]:
            if k == len(order):
                if all(d == 0 for d in demands):
                    yield dict(pick)
                return
            x = order[k]
            for i, a in self.faces_of[x]:
                if demands[i] > 0:
                    demands[i] -= 1
                    pick[x] = a
                    yield from rec(k + 1)
                    demands[i] += 1
            pick.pop(x, None)

        yield from rec(0)

    def labels(self, large: dict[int, Angle]) -> dict[Angle, int]:
        out = {}
        for f in self.faces:
            for a in f:
                if not _switch_angle(self.g, a):
                    out[a] = 0
                else:
                    out[a] = 1 if large.get(a[0]) == a else -1
        return out


def _perfect(adj: list[list[int]], right: int) -> bool:
    if len(adj) != right:
        return False
    match = [-1] * right

    def augment(i: int, seen: list[bool]) -> bool:
        for r in adj[i]:
            if not seen[r]:
                seen[r] = True
                if match[r] == -1 or augment(match[r], seen):
                    match[r] = i
                    return True
        return False

    return all(augment(i, [False] * right) for i in range(len(adj)))


# ---------------------------------------------------------------------------
# Public queries
# ---------------------------------------------------------------------------


def _mirror_canonical(g: Digraph, rotation) -> bool:
    """Keep one embedding of every mirror pair (decided at the first vertex of degree >= 3)."""
    for x in range(g.n):
        r = rotation[x]
        if len(r) >= 3:
            return _cyclic_min(r) <= _cyclic_min(tuple(reversed(r)))
    return True


def _cyclic_min(r: tuple[int, ...]) -> tuple[int, ...]:
    i = r.index(min(r))
    return r[i:] + r[:i]


def _embeddings(g: Digraph, canonical: bool):
    for rot in iter_embeddings(g):
        if canonical and not _mirror_canonical(g, rot):
            continue
        faces = trace_faces(g, rot)
        if len(faces) != g.m - g.n + 2:
            raise AssertionError("enumerated rotation system violates Euler's formula")
        yield rot, faces


def enumerate_certificates(g: Digraph, cap: Optional[int] = None) -> Iterator[EmbeddingCertificate]:
    """All upward planar embeddings (one per mirror pair) of a connected digraph."""
    _check_cap(g, cap)
    if not is_connected(g):
        raise DisconnectedInput("certificates are enumerated per connected component")
    if g.m == 0:
        return
    for rot, faces in _embeddings(g, canonical=True):
        lab = _Labeling(g, faces)
        for outer in range(len(faces)):
            for large in lab.assignments(outer):
                yield EmbeddingCertificate(rot, outer, tuple(faces), lab.labels(large))


def verify_certificate(g: Digraph, cert: EmbeddingCertificate) -> bool:
    """Re-check the certificate from scratch: planarity, bimodality and the angle rules."""
    faces = trace_faces(g, cert.rotation)
    if len(faces) != g.m - g.n + 2 or set(map(frozenset, faces)) != set(map(frozenset, cert.faces)):
        return False
    if not all(_bimodal(g, x, list(cert.rotation[x])) for x in range(g.n)):
        return False
    per_vertex: dict[int, list[int]] = {x: [] for x in range(g.n)}
    for f in faces:
        for a in f:
            lab = cert.labels.get(a)
            if lab is None:
                return False
            if (lab == 0) == _switch_angle(g, a):
                return False
            per_vertex[a[0]].append(lab)
    for x, labs in per_vertex.items():
        if not labs:
            continue
        if _is_switch(g, x):
            if labs.count(1) != 1 or labs.count(0) != 0:
                return False
        elif labs.count(1) != 0 or labs.count(0) != 2:
            return False
    for i, f in enumerate(faces):
        target = 2 if frozenset(f) == frozenset(cert.faces[cert.outer_face]) else -2
        if sum(cert.labels[a] for a in f) != target:
            return False
    return True


def oracle_upward_planar(g: Digraph, cap: Optional[int] = None) -> bool:
    _check_cap(g, cap)
    for comp in connected_components(g):
        if len(comp) < 2:
            continue
        sub, _ = g.subgraph([e for v in comp for e in g.incidence[v] if g.edges[e][0] == v])
        if not _component_upward(sub):
            return False
    return True


def _component_upward(g: Digraph) -> bool:
    for _, faces in _embeddings(g, canonical=True):
        lab = _Labeling(g, faces)
        if any(lab.assignable(outer) for outer in range(len(faces))):
            return True
    return False


def oracle_certificate(g: Digraph, cap: Optional[int] = None) -> Optional[EmbeddingCertificate]:
    """One certificate of a connected digraph, or ``None``."""
    return next(enumerate_certificates(g, cap), None)


def _outer_shapes(g: Digraph, lab: _Labeling, outer: int, u: int, v: int) -> set[Shape]:
    face = lab.faces[outer]
    L = len(face)
    on_outer: dict[int, list[Angle]] = {}
    for a in face:
        if a[0] in lab.faces_of:
            on_outer.setdefault(a[0], []).append(a)
    need = lab.demand(outer, outer)
    if need is None:
        return set()
    switches = list(on_outer)
    options = []
    for x in switches:
        opts: list[Optional[Angle]] = list(on_outer[x])
        if any(i != outer for i, _ in lab.faces_of[x]):
            opts.append(None)
        options.append(opts)
    shapes = set()
    for choice in itertools.product(*options):
        if sum(c is not None for c in choice) != need:
            continue
        fixed = {x: (outer if c is not None else None) for x, c in zip(switches, choice)}
        if not lab.assignable(outer, fixed):
            continue
        large = {x: c for x, c in zip(switches, choice) if c is not None}

        def label(a: Angle) -> int:
            if not _switch_angle(g, a):
                return 0
            return 1 if large.get(a[0]) == a else -1

        for ju in (j for j in range(L) if face[j][0] == u):
            for jv in (j for j in range(L) if face[j][0] == v):
                shapes.add(_read_shape(g, face, ju, jv, label))
    return shapes


def _read_shape(g: Digraph, face: tuple[Angle, ...], ju: int, jv: int, label) -> Shape:
    L = len(face)
    u, v = face[ju][0], face[jv][0]
    left = sum(label(face[j % L]) for j in range(ju + 1, ju + ((jv - ju) % L)))
    right = sum(label(face[j % L]) for j in range(jv + 1, jv + ((ju - jv) % L)))
    first_left, last_left = face[ju][2], face[jv][1]
    first_right, last_right = face[ju][1], face[jv][2]

    def direction(e: int, x: int) -> int:
        return OUT if g.edges[e][0] == x else IN

    return Shape(left, right, label(face[ju]), label(face[jv]),
                 direction(first_left, u), direction(first_right, u),
                 direction(last_left, v), direction(last_right, v))


def oracle_feasible_set(g: Digraph, poles: tuple[int, int], cap: Optional[int] = None) -> FeasibleSet:
    """Shapes of all upward planar embeddings of ``g`` with both poles on the outer face."""
    _check_cap(g, cap)
    if not is_connected(g):
        raise DisconnectedInput("a pertinent graph is connected")
    u, v = poles
    out: set[Shape] = set()
    for _, faces in _embeddings(g, canonical=True):
        lab = _Labeling(g, faces)
        for outer, face in enumerate(faces):
            verts = {a[0] for a in face}
            if u in verts and v in verts:
                out |= _outer_shapes(g, lab, outer, u, v)
    out |= {flip(s) for s in out}
    bad = [s for s in out if not validate_shape(s)]
    if bad:
        raise AssertionError(f"oracle produced invalid shapes {bad}")
    return FeasibleSet(out)


# ---------------------------------------------------------------------------
# Parallel compositions of small children
# ---------------------------------------------------------------------------


def child_universe(max_internal: int = 2) -> list[Digraph]:
    """Small children a parallel composition can have, with poles 0 and 1.

    All orientations of the connected graphs on ``{0, 1}`` plus at most
    ``max_internal`` further vertices that have no 0-1 edge, stay connected
    without the poles, and become a biconnected partial 2-tree when the
    edge 0-1 is added.  The single edge is included as well.
    """
    from .graph import reduces_to_edge

    found = [Digraph.from_edges(2, [(0, 1)]), Digraph.from_edges(2, [(1, 0)])]
    for k in range(1, max_internal + 1):
        n = k + 2
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) != (0, 1)]
        for mask in range(1, 1 << len(pairs)):
            und = [p for i, p in enumerate(pairs) if mask >> i & 1]
            inner = Digraph.from_edges(n, und)
            core = [(a, b) for a, b in und if a >= 2 and b >= 2]
            if k > 1 and not is_connected(Digraph.from_edges(k, [(a - 2, b - 2) for a, b in core])):
                continue
            if any(inner.degree(x) == 0 for x in range(n)):
                continue
            closed = und + [(0, 1)]
            if not _biconnected(n, closed) or not reduces_to_edge(n, closed):
                continue
            for bits in range(1 << len(und)):
                found.append(Digraph.from_edges(n, [(a, b) if bits >> i & 1 else (b, a) for i, (a, b) in enumerate(und)]))
    return found


def _biconnected(n: int, edges: list[tuple[int, int]]) -> bool:
    from .graph import block_cut_tree

    g = Digraph.from_edges(n, edges)
    return is_connected(g) and len(block_cut_tree(g).blocks) == 1


def compose_parallel(children: list[Digraph]) -> tuple[Digraph, list[set[int]]]:
    """Glue children at their poles 0 and 1; returns the graph and each child's edge ids."""
    edges: list[tuple[int, int]] = []
    owned: list[set[int]] = []
    nxt = 2
    for c in children:
        mapping = {0: 0, 1: 1}
        for x in range(2, c.n):
            mapping[x] = nxt
            nxt += 1
        owned.append(set(range(len(edges), len(edges) + c.m)))
        edges.extend((mapping[a], mapping[b]) for a, b in c.edges)
    return Digraph.from_edges(nxt, edges), owned


def composition_sequences(children: list[Digraph]) -> set[tuple[Shape, tuple[Shape, ...]]]:
    """``(outer shape, contracted child-shape sequence)`` over all upward embeddings of the composition."""
    g, owned = compose_parallel(children)
    owner = {e: i for i, es in enumerate(owned) for e in es}
    out = set()
    for rot, faces in _embeddings(g, canonical=True):
        lab = _Labeling(g, faces)
        for outer, face in enumerate(faces):
            ju = [j for j, a in enumerate(face) if a[0] == 0]
            jv = [j for j, a in enumerate(face) if a[0] == 1]
            if len(ju) != 1 or len(jv) != 1:
                continue
            for large in lab.assignments(outer):
                labels = lab.labels(large)
                s = _read_shape(g, face, ju[0], jv[0], labels.__getitem__)
                order = _children_left_to_right(rot[0], face[ju[0]][2], owner)
                seq = tuple(_child_shape(g, rot, faces, labels, owned[i]) for i in order)
                out.add((s, contract(seq)))
    out |= {(flip(s), tuple(flip(x) for x in reversed(seq))) for s, seq in out}
    return out


def _children_left_to_right(rot_u: tuple[int, ...], first: int, owner: dict[int, int]) -> list[int]:
    i = rot_u.index(first)
    order: list[int] = []
    for e in rot_u[i:] + rot_u[:i]:
        c = owner[e]
        if c not in order:
            order.append(c)
    return order


def _child_shape(g: Digraph, rot, faces, labels: dict[Angle, int], edges: set[int]) -> Shape:
    """Shape of one child read from the restriction of the composed embedding."""
    sub_rot = [tuple(e for e in r if e in edges) for r in rot]
    own_faces = {frozenset(a[1:] for a in f) for f in faces if all(a[1] in edges for a in f)}
    sub_faces = trace_faces(g, sub_rot)
    outer = next(f for f in sub_faces if frozenset(a[1:] for a in f) not in own_faces)
    deg: dict[int, int] = {}
    for e in edges:
        for x in g.edges[e]:
            deg[x] = deg.get(x, 0) + 1
    inner_sum: dict[int, int] = {}
    for f in sub_faces:
        if f is outer:
            continue
        for a in f:
            inner_sum[a[0]] = inner_sum.get(a[0], 0) + labels[a]

    def label(a: Angle) -> int:
        if a in labels:
            return labels[a]
        # merged angle at a pole: whatever the vertex budget leaves
        return 2 - deg[a[0]] - inner_sum.get(a[0], 0)

    ju = next(j for j, a in enumerate(outer) if a[0] == 0)
    jv = next(j for j, a in enumerate(outer) if a[0] == 1)
    return _read_shape(g, outer, ju, jv, label)


def oracle_generating_set(s: Shape, universe: Optional[list[Digraph]] = None, max_children: int = 4,
                          max_vertices: int = 6) -> set[tuple[Shape, ...]]:
    """Contracted child sequences of compositions from ``universe`` whose outer shape is ``s``."""
    return {seq for t, seq in _all_compositions(max_children, max_vertices, universe) if t == s}


_COMPOSITION_CACHE: dict = {}


def _all_compositions(max_children: int, max_vertices: int, universe: Optional[list[Digraph]] = None):
    key = (max_children, max_vertices, None if universe is None else tuple(universe))
    if key in _COMPOSITION_CACHE:
        return _COMPOSITION_CACHE[key]
    pool = universe if universe is not None else child_universe(max_vertices - 4 if max_vertices >= 5 else 1)
    result = set()
    for k in range(2, max_children + 1):
        for combo in itertools.combinations_with_replacement(range(len(pool)), k):
            if 2 + sum(pool[i].n - 2 for i in combo) > max_vertices:
                continue
            result |= composition_sequences([pool[i] for i in combo])
    _COMPOSITION_CACHE[key] = result
    return result

"""Directed multigraphs, block-cut trees and the partial 2-tree test."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DisconnectedInput, IsolatedVertex, ParseError


class SwitchStatus(enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    NON_SWITCH = "non-switch"

    @property
    def is_switch(self) -> bool:
        return self is not SwitchStatus.NON_SWITCH


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph on vertices ``0..n-1``; edge ids are list positions.

    Parallel and antiparallel edges are allowed, self-loops are not.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    incidence: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (a, b) in enumerate(self.edges):
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ParseError(f"edge {eid} ({a},{b}) references a vertex outside 0..{self.n - 1}")
            if a == b:
                raise ParseError(f"edge {eid} is a self-loop at {a}")
            inc[a].append(eid)
            inc[b].append(eid)
        object.__setattr__(self, "incidence", tuple(tuple(x) for x in inc))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        return cls(n, tuple((int(a), int(b)) for a, b in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def other(self, eid: int, x: int) -> int:
        a, b = self.edges[eid]
        return b if x == a else a

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def is_simple(self) -> bool:
        seen = set()
        for a, b in self.edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                return False
            seen.add(key)
        return True

    def subgraph(self, edge_ids: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Edge-induced subgraph with dense relabelling.

        Returns the subgraph and ``old_of_new`` (new vertex id -> original id).
        Vertices are numbered in increasing original id order.
        """
        eids = list(edge_ids)
        verts = sorted({x for e in eids for x in self.edges[e]})
        new_of_old = {v: i for i, v in enumerate(verts)}
        sub = Digraph(len(verts), tuple((new_of_old[self.edges[e][0]], new_of_old[self.edges[e][1]]) for e in eids))
        return sub, verts

    def reversed(self) -> "Digraph":
        return Digraph(self.n, tuple((b, a) for a, b in self.edges))


def parse_graph(text: str, strict_simple: bool = False) -> Digraph:
    """Parse the ``n m`` / ``tail head`` text format (``#`` starts a comment)."""
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ParseError("empty input")
    try:
        header = [int(x) for x in rows[0]]
        body = [tuple(int(x) for x in r) for r in rows[1:]]
    except ValueError as exc:
        raise ParseError(f"non-integer token: {exc}") from None
    if len(header) != 2:
        raise ParseError("first line must be 'n m'")
    n, m = header
    if n < 0 or m < 0:
        raise ParseError("negative counts")
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}")
    for r in body:
        if len(r) != 2:
            raise ParseError(f"edge line must have two vertices: {r}")
    g = Digraph.from_edges(n, body)  # type: ignore[arg-type]
    if strict_simple and not g.is_simple():
        raise ParseError("parallel or antiparallel edges are not allowed with strict_simple")
    return g


def format_graph(g: Digraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{a} {b}" for a, b in g.edges)
    return "\n".join(lines) + "\n"


def switch_status(g: Digraph, v: int, restriction: Optional[Iterable[int]] = None) -> SwitchStatus:
    """Classify ``v`` as source, sink or non-switch within an edge subset."""
    eids = g.incidence[v] if restriction is None else [e for e in restriction if v in g.edges[e]]
    has_in = has_out = False
    for e in eids:
        if g.edges[e][0] == v:
            has_out = True
        else:
            has_in = True
    if not (has_in or has_out):
        raise IsolatedVertex(f"vertex {v} has no incident edge in the restriction")
    if has_in and has_out:
        return SwitchStatus.NON_SWITCH
    return SwitchStatus.SOURCE if has_out else SwitchStatus.SINK


def connected_components(g: Digraph) -> list[list[int]]:
    """Vertex sets of the connected components of the underlying graph."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in g.incidence[x]:
                y = g.other(e, x)
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Digraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def has_directed_cycle(g: Digraph) -> bool:
    indeg = [0] * g.n
    out: list[list[int]] = [[] for _ in range(g.n)]
    for a, b in g.edges:
        indeg[b] += 1
        out[a].append(b)
    queue = deque(v for v in range(g.n) if indeg[v] == 0)
    seen = 0
    while queue:
        x = queue.popleft()
        seen += 1
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return seen < g.n


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[tuple[int, ...], ...]
    block_vertices: tuple[tuple[int, ...], ...]
    cut_vertices: tuple[int, ...]
    blocks_of_vertex: dict[int, tuple[int, ...]]

    def neighbors_of_block(self, b: int) -> list[int]:
        """Cut vertices contained in block ``b``."""
        return [v for v in self.block_vertices[b] if v in self.blocks_of_vertex]

    def rooted(self, root: int) -> tuple[dict[int, int], dict[int, int], list[int]]:
        """Orient the tree at block ``root``.

        Returns ``(parent_block_of_cut, parent_cut_of_block, cut_postorder)``
        where ``cut_postorder`` lists cut vertices children-first.
        """
        parent_block: dict[int, int] = {}
        parent_cut: dict[int, int] = {}
        order: list[int] = []
        stack = [root]
        while stack:
            b = stack.pop()
            for v in self.neighbors_of_block(b):
                if v == parent_cut.get(b):
                    continue
                parent_block[v] = b
                order.append(v)
                for c in self.blocks_of_vertex[v]:
                    if c != b:
                        parent_cut[c] = v
                        stack.append(c)
        order.reverse()
        return parent_block, parent_cut, order


def block_cut_tree(g: Digraph) -> BlockCutTree:
    """Biconnected components (as edge-id sets) and cut vertices of ``g``."""
    if not is_connected(g):
        raise DisconnectedInput("block_cut_tree expects a connected graph")
    disc = [-1] * g.n
    low = [0] * g.n
    blocks: list[list[int]] = []
    edge_stack: list[int] = []
    counter = 0
    for root in range(g.n):
        if disc[root] != -1 or not g.incidence[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        # frames: (vertex, edge used to enter, next incidence index)
        stack = [[root, -1, 0]]
        while stack:
            frame = stack[-1]
            x, via, idx = frame
            if idx < len(g.incidence[x]):
                frame[2] += 1
                e = g.incidence[x][idx]
                if e == via:
                    continue
                y = g.other(e, x)
                if disc[y] == -1:
                    edge_stack.append(e)
                    disc[y] = low[y] = counter
                    counter += 1
                    stack.append([y, e, 0])
                elif disc[y] < disc[x]:
                    edge_stack.append(e)
                    low[x] = min(low[x], disc[y])
            else:
                stack.pop()
                if not stack:
                    break
                p = stack[-1][0]
                low[p] = min(low[p], low[x])
                if low[x] >= disc[p]:
                    comp = []
                    while True:
                        e = edge_stack.pop()
                        comp.append(e)
                        if e == via:
                            break
                    blocks.append(sorted(comp))
    blocks.sort(key=lambda b: b[0])
    bverts = [tuple(sorted({x for e in b for x in g.edges[e]})) for b in blocks]
    count: dict[int, list[int]] = {}
    for i, vs in enumerate(bverts):
        for v in vs:
            count.setdefault(v, []).append(i)
    cut = {v: tuple(bs) for v, bs in count.items() if len(bs) > 1}
    return BlockCutTree(
        blocks=tuple(tuple(b) for b in blocks),
        block_vertices=tuple(bverts),
        cut_vertices=tuple(sorted(cut)),
        blocks_of_vertex=cut,
    )


def reduces_to_edge(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    """Exhaustive series/parallel reduction of an undirected multigraph.

    True iff the graph collapses to a single edge, i.e. a biconnected graph
    is a partial 2-tree.
    """
    adj: dict[int, dict[int, int]] = {}
    for a, b in edges:
        adj.setdefault(a, {})
        adj.setdefault(b, {})
        adj[a][b] = 1
        adj[b][a] = 1
    queue = deque(v for v in adj if len(adj[v]) == 2)
    alive = len(adj)
    while queue and alive > 2:
        w = queue.popleft()
        if w not in adj or len(adj[w]) != 2:
            continue
        x, y = adj.pop(w)
        alive -= 1
        del adj[x][w], adj[y][w]
        adj[x][y] = 1
        adj[y][x] = 1
        for z in (x, y):
            if len(adj[z]) == 2:
                queue.append(z)
    return alive <= 2


def validate_partial_two_tree(g: Digraph) -> bool:
    """True iff every block of the underlying graph is series-parallel."""
    for comp in connected_components(g):
        if len(comp) < 2:
            continue
        sub_edges = [e for v in comp for e in g.incidence[v] if g.edges[e][0] == v]
        sub, _ = g.subgraph(sorted(sub_edges))
        bct = block_cut_tree(sub)
        for block in bct.blocks:
            if len(block) > 1 and not reduces_to_edge(sub.n, (sub.edges[e] for e in block)):
                return False
    return True

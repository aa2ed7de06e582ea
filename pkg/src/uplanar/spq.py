"""SPQ-trees of biconnected partial 2-trees.

The tree is stored unrooted.  Every tree edge carries the pole pair shared by
the two pertinent graphs it separates, so a rooted view only has to orient
arcs.  Pole pairs are kept in canonical order (smaller vertex id first).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import NotPartialTwoTree, UnknownEdge
from .graph import Digraph

Q, S, P = "Q", "S", "P"


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass
class SPQTree:
    graph: Digraph
    edge_ids: tuple[int, ...]
    n_vertices: int
    kind: list[str]
    adj: list[list[int]]
    # canonical pole pair of the tree edge {mu, nu}, stored under both arcs
    poles: dict[tuple[int, int], tuple[int, int]]
    edge_of: dict[int, int]
    q_of_edge: dict[int, int]
    arc_sizes: dict[tuple[int, int], int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.kind)

    def arcs(self) -> list[tuple[int, int]]:
        return [(mu, nu) for mu in range(len(self.kind)) for nu in self.adj[mu]]

    def middle(self, mu: int, tau: int) -> int:
        """Vertex shared by the two children of S-node ``mu`` when ``tau`` is its parent."""
        verts = {x for nu in self.adj[mu] for x in self.poles[(mu, nu)]}
        (w,) = verts - set(self.poles[(mu, tau)])
        return w

    def series_children(self, mu: int, tau: int) -> tuple[int, int, int]:
        """``(child at u, child at v, w)`` of S-node ``mu`` with parent ``tau``."""
        u, _ = self.poles[(mu, tau)]
        w = self.middle(mu, tau)
        a, b = (nu for nu in self.adj[mu] if nu != tau)
        if u in self.poles[(mu, a)]:
            return a, b, w
        return b, a, w

    def pertinent_edges(self, mu: int, tau: Optional[int]) -> list[int]:
        """Edge ids of the pertinent graph of ``mu`` seen from neighbor ``tau``."""
        out = []
        stack = [(mu, tau)]
        while stack:
            x, parent = stack.pop()
            if self.kind[x] == Q:
                out.append(self.edge_of[x])
            for y in self.adj[x]:
                if y != parent:
                    stack.append((y, x))
        return sorted(set(out))

    def rooted_view(self, edge: int) -> "RootedView":
        if edge not in self.q_of_edge:
            raise UnknownEdge(f"edge {edge} is not in this block")
        return RootedView(self, self.q_of_edge[edge])

    def to_json(self) -> dict:
        return {
            "n_vertices": self.n_vertices,
            "edges": list(self.edge_ids),
            "nodes": [
                {
                    "id": mu,
                    "kind": self.kind[mu],
                    "edge": self.edge_of.get(mu),
                    "neighbors": [
                        {"node": nu, "poles": list(self.poles[(mu, nu)]),
                         "size_toward": self.arc_sizes.get((mu, nu))}
                        for nu in self.adj[mu]
                    ],
                }
                for mu in range(len(self.kind))
            ],
        }


class RootedView:
    """Orientation of an SPQ-tree away from a Q-node; parents are resolved lazily."""

    def __init__(self, tree: SPQTree, root: int) -> None:
        self.tree = tree
        self.root = root
        self._parent: Optional[list[Optional[int]]] = None
        self._order: list[int] = []

    def _resolve(self) -> list[Optional[int]]:
        if self._parent is None:
            parent: list[Optional[int]] = [None] * len(self.tree)
            seen = [False] * len(self.tree)
            seen[self.root] = True
            order = [self.root]
            queue = deque([self.root])
            while queue:
                x = queue.popleft()
                for y in self.tree.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        parent[y] = x
                        order.append(y)
                        queue.append(y)
            self._parent = parent
            self._order = order
        return self._parent

    def parent(self, mu: int) -> Optional[int]:
        return self._resolve()[mu]

    def children(self, mu: int) -> list[int]:
        p = self.parent(mu)
        return [nu for nu in self.tree.adj[mu] if nu != p]

    def top_down(self) -> list[int]:
        self._resolve()
        return list(self._order)

    def bottom_up(self) -> list[int]:
        return self.top_down()[::-1]

    def poles(self, mu: int) -> tuple[int, int]:
        p = self.parent(mu)
        if p is None:
            return _pair(*self.tree.graph.edges[self.tree.edge_of[mu]])
        return self.tree.poles[(mu, p)]

    def render(self) -> str:
        lines = []
        stack = [(self.root, 0)]
        t = self.tree
        while stack:
            mu, depth = stack.pop()
            label = t.kind[mu]
            if t.kind[mu] == Q:
                a, b = t.graph.edges[t.edge_of[mu]]
                label += f" e{t.edge_of[mu]} {a}->{b}"
            u, v = self.poles(mu)
            size = t.arc_sizes.get((mu, self.parent(mu))) if self.parent(mu) is not None else t.n_vertices
            lines.append(f"{'  ' * depth}{label} poles=({u},{v}) n={size}")
            for nu in reversed(self.children(mu)):
                stack.append((nu, depth + 1))
        return "\n".join(lines)


def build_spq(g: Digraph, edge_ids: Optional[Iterable[int]] = None) -> SPQTree:
    """SPQ-tree of the block of ``g`` formed by ``edge_ids`` (default: all edges).

    Series/parallel reduction in linear time; raises ``NotPartialTwoTree``
    when the block does not collapse to a single edge.
    """
    eids = tuple(range(g.m)) if edge_ids is None else tuple(edge_ids)
    if not eids:
        raise ValueError("a block needs at least one edge")
    kind: list[str] = []
    comp_poles: list[tuple[int, int]] = []
    children: list[list[int]] = []
    edge_of: dict[int, int] = {}

    def new(k: str, poles: tuple[int, int], kids: list[int]) -> int:
        kind.append(k)
        comp_poles.append(poles)
        children.append(kids)
        return len(kind) - 1

    def parallel(a: int, b: int) -> int:
        if kind[a] == P:
            children[a].extend(children[b] if kind[b] == P else [b])
            return a
        if kind[b] == P:
            children[b].insert(0, a)
            return b
        return new(P, comp_poles[a], [a, b])

    adj: dict[int, dict[int, int]] = {}

    def link(x: int, y: int, c: int) -> None:
        row_x = adj.setdefault(x, {})
        adj.setdefault(y, {})
        if y in row_x:
            c = parallel(row_x[y], c)
        row_x[y] = c
        adj[y][x] = c

    for e in eids:
        a, b = g.edges[e]
        q = new(Q, _pair(a, b), [])
        edge_of[q] = e
        link(a, b, q)

    queue = deque(v for v in adj if len(adj[v]) == 2)
    alive = len(adj)
    while queue and alive > 2:
        w = queue.popleft()
        if w not in adj or len(adj[w]) != 2:
            continue
        (x, cx), (y, cy) = adj.pop(w).items()
        alive -= 1
        del adj[x][w], adj[y][w]
        link(x, y, new(S, _pair(x, y), [cx, cy]))
        for z in (x, y):
            if len(adj[z]) == 2:
                queue.append(z)
    if alive > 2:
        raise NotPartialTwoTree("series/parallel reduction got stuck: the block has a K4 minor")
    (x, row), = list(adj.items())[:1]
    (top,) = row.values()

    # collapse the reduction forest into an unrooted tree with dense ids
    links: list[tuple[int, int]] = []
    if kind[top] == P and len(children[top]) == 2:
        a, b = children[top]
        links.append((a, b))
        starts = [a, b]
    else:
        starts = [top]
    reach = []
    stack = list(reversed(starts))
    while stack:
        c = stack.pop()
        reach.append(c)
        for k in reversed(children[c]):
            links.append((c, k))
            stack.append(k)
    new_id = {c: i for i, c in enumerate(reach)}
    tkind = [kind[c] for c in reach]
    tadj: list[list[int]] = [[] for _ in reach]
    poles: dict[tuple[int, int], tuple[int, int]] = {}
    for parent, child in links:
        i, j = new_id[parent], new_id[child]
        tadj[i].append(j)
        tadj[j].append(i)
        poles[(i, j)] = poles[(j, i)] = comp_poles[child]
    t_edge_of = {new_id[c]: e for c, e in edge_of.items()}
    verts = {x for e in eids for x in g.edges[e]}
    tree = SPQTree(
        graph=g,
        edge_ids=eids,
        n_vertices=len(verts),
        kind=tkind,
        adj=tadj,
        poles=poles,
        edge_of=t_edge_of,
        q_of_edge={e: mu for mu, e in t_edge_of.items()},
    )
    tree.arc_sizes = pertinent_sizes(tree)
    return tree


def pertinent_sizes(tree: SPQTree) -> dict[tuple[int, int], int]:
    """Vertex count of the pertinent graph behind every directed arc (two passes)."""
    sizes: dict[tuple[int, int], int] = {}
    if len(tree) <= 1:
        return sizes
    view = RootedView(tree, 0)
    for mu in view.bottom_up():
        p = view.parent(mu)
        if p is None:
            continue
        kids = [sizes[(nu, mu)] for nu in view.children(mu)]
        if tree.kind[mu] == Q:
            sizes[(mu, p)] = 2
        elif tree.kind[mu] == S:
            sizes[(mu, p)] = sum(kids) - 1
        else:
            sizes[(mu, p)] = sum(kids) - 2 * (len(kids) - 1)
    total = tree.n_vertices + 2
    for (mu, p), k in list(sizes.items()):
        sizes[(p, mu)] = total - k
    return sizes

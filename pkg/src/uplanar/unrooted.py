"""Feasible sets for every root edge of a block with one shared arc store.

The first traversal is rooted at the Q-node of the smallest edge id and
computes every arc toward that root.  Each later root only climbs toward
the first root until it meets an arc that is already known, so every
directed arc is materialized at most once over the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import MissingLabels
from .shapes import EMPTY, FeasibleSet, Shape, generating_set
from .rooted import ParallelNode, arc_feasible, edge_forward, q_feasible, realizable, root_feasible
from .spq import P, Q, SPQTree


class Reject(Exception):
    """Two neighbors of ``node`` have empty feasible sets toward it: no embedding exists."""

    def __init__(self, node: int, bad: tuple[int, int]) -> None:
        super().__init__(f"node {node} has two neighbors with empty feasible sets: {bad}")
        self.node = node
        self.bad = bad


@dataclass
class BlockResult:
    upward: bool
    root_sets: dict[int, FeasibleSet]
    rejected_at: Optional[int] = None
    arcs_computed: int = 0
    arcs_stored: int = 0
    arcs: dict[tuple[int, int], FeasibleSet] = field(default_factory=dict)

    def nonempty_roots(self) -> list[int]:
        return [e for e, fs in self.root_sets.items() if fs]


@dataclass
class Engine:
    tree: SPQTree
    arcs: dict[tuple[int, int], FeasibleSet] = field(default_factory=dict)
    parent: dict[int, Optional[int]] = field(default_factory=dict)
    uncomputed: dict[int, Optional[int]] = field(default_factory=dict)
    bad: dict[int, Optional[int]] = field(default_factory=dict)
    pnodes: dict[int, ParallelNode] = field(default_factory=dict)
    computations: int = 0
    first_root: Optional[int] = None

    # -- bookkeeping -------------------------------------------------------

    def _store(self, mu: int, tau: int, fs: FeasibleSet) -> FeasibleSet:
        key = (mu, tau)
        if key in self.arcs:
            raise AssertionError(f"arc {key} computed twice")
        self.arcs[key] = fs
        if self.tree.kind[mu] != Q:
            self.computations += 1
        if not fs and self.tree.kind[tau] != Q:
            self._mark_bad(tau, mu)
        return fs

    def _mark_bad(self, node: int, neighbor: int) -> None:
        current = self.bad.get(node)
        if current is None:
            self.bad[node] = neighbor
        elif current != neighbor:
            raise Reject(node, (current, neighbor))

    def arc(self, mu: int, tau: int) -> FeasibleSet:
        """``F_{mu -> tau}``, computing missing arcs on the way."""
        key = (mu, tau)
        if key in self.arcs:
            return self.arcs[key]
        if self.tree.kind[mu] == Q:
            return self._store(mu, tau, q_feasible(edge_forward(self.tree, mu, self.tree.poles[key])))
        # tau is a child of mu in the first traversal: climb until a known arc
        path = []
        b = self.bad.get(mu)
        if b is None or b == tau:
            x = mu
            while (self.parent[x], x) not in self.arcs:
                path.append(x)
                p = self.parent[x]
                if self.tree.kind[p] == Q or self.bad.get(p) not in (None, x):
                    break
                x = p
        for x in reversed(path):
            self._compute(self.parent[x], x)
            self.uncomputed[x] = None
        return self._compute(mu, tau)

    def _compute(self, mu: int, tau: int) -> FeasibleSet:
        key = (mu, tau)
        if key in self.arcs:
            return self.arcs[key]
        tree = self.tree
        if tree.kind[mu] == Q:
            return self.arc(mu, tau)
        b = self.bad.get(mu)
        if b is not None and b != tau:
            return self._store(mu, tau, EMPTY)
        if tree.kind[mu] == P and mu in self.pnodes:
            node = self.pnodes[mu]
            p = self.parent[mu]
            if tau == p:
                fs = node.feasible()
            else:
                fs = node.feasible(exclude=tau, extra=(p, self.arcs[(p, mu)]))
            return self._store(mu, tau, fs)
        return self._store(mu, tau, arc_feasible(tree, mu, tau, lambda nu: self.arcs[(nu, mu)]))

    # -- traversals --------------------------------------------------------

    def bottom_up_first(self) -> FeasibleSet:
        tree = self.tree
        root = tree.q_of_edge[min(tree.edge_ids)]
        self.first_root = root
        view = tree.rooted_view(tree.edge_of[root])
        for mu in view.bottom_up():
            p = view.parent(mu)
            self.parent[mu] = p
            if p is None:
                continue
            if tree.kind[mu] == Q:
                self.arc(mu, p)
                continue
            self.uncomputed[mu] = p
            children = view.children(mu)
            if tree.kind[mu] == P:
                self.pnodes[mu] = ParallelNode([(nu, self.arcs[(nu, mu)]) for nu in children])
            self._compute(mu, p)
        return self.root_set(root)

    def root_set(self, rho: int) -> FeasibleSet:
        tree = self.tree
        forward = edge_forward(tree, rho, _edge_poles(tree, rho))
        if not tree.adj[rho]:
            return q_feasible(forward)
        (sigma,) = tree.adj[rho]
        incoming = self.arc(sigma, rho)
        if not incoming:
            return EMPTY
        return root_feasible(incoming, forward)

    def p_fast_check(self, mu: int, tau: int, s: Shape) -> bool:
        """Is ``s`` in ``F_{mu -> tau}``?  Uses the labels of the first traversal."""
        if mu not in self.pnodes:
            raise MissingLabels(f"no labels stored for P-node {mu}; run the first traversal")
        node = self.pnodes[mu]
        p = self.parent[mu]
        extra = None if tau == p else (p, self.arc(p, mu))
        exclude = None if tau == p else tau
        k = len(node.children) - (exclude is not None) + (extra is not None)
        for seq in generating_set(s):
            if len(seq) > k:
                continue
            if realizable(node.labels(seq), exclude, extra):
                return True
        return False


def _edge_poles(tree: SPQTree, q: int) -> tuple[int, int]:
    a, b = tree.graph.edges[tree.edge_of[q]]
    return (a, b) if a < b else (b, a)


def test_biconnected(tree: SPQTree, first_hit: bool = False) -> BlockResult:
    """Root feasible sets of every edge of the block (or until the first nonempty one)."""
    engine = Engine(tree)
    edges = sorted(tree.edge_ids)
    roots: dict[int, FeasibleSet] = {}
    try:
        roots[edges[0]] = engine.bottom_up_first()
        for e in edges[1:]:
            if first_hit and any(roots.values()):
                break
            roots[e] = engine.root_set(tree.q_of_edge[e])
    except Reject as rej:
        return BlockResult(False, {e: EMPTY for e in edges}, rej.node,
                           engine.computations, len(engine.arcs), engine.arcs)
    return BlockResult(any(roots.values()), roots, None, engine.computations, len(engine.arcs), engine.arcs)


test_biconnected.__test__ = False  # not a pytest test despite the name

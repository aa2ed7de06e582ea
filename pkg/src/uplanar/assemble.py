"""Upward planarity of arbitrary directed partial 2-trees from per-block root sets."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .graph import (
    BlockCutTree,
    Digraph,
    block_cut_tree,
    connected_components,
    has_directed_cycle,
)
from .shapes import FeasibleSet
from .spq import SPQTree, build_spq
from .unrooted import BlockResult, test_biconnected


@dataclass
class PoleLabelTable:
    """Outer-angle labels a vertex can get in upward embeddings of a block with it on the outer face."""

    labels: dict[tuple[int, int], frozenset[int]]
    switch: dict[tuple[int, int], bool]

    def get(self, block: int, v: int) -> frozenset[int]:
        return self.labels.get((block, v), frozenset())


def build_pole_label_table(g: Digraph, bct: BlockCutTree, root_sets: list[dict[int, FeasibleSet]]) -> PoleLabelTable:
    """Union over the edges at ``v`` of the pole labels at ``v`` in the root sets.

    A vertex on the outer face of a biconnected embedding has both of its
    boundary edges there, so one of its edges can serve as the root edge.
    """
    labels: dict[tuple[int, int], frozenset[int]] = {}
    switch: dict[tuple[int, int], bool] = {}
    for b, block in enumerate(bct.blocks):
        found: dict[int, set[int]] = {v: set() for v in bct.block_vertices[b]}
        has_in: set[int] = set()
        has_out: set[int] = set()
        for e in block:
            a, c = g.edges[e]
            has_out.add(a)
            has_in.add(c)
            u, w = min(a, c), max(a, c)
            for s in root_sets[b].get(e, ()):
                found[u].add(s.lu)
                found[w].add(s.lv)
        for v, labs in found.items():
            labels[(b, v)] = frozenset(labs)
            switch[(b, v)] = not (v in has_in and v in has_out)
    return PoleLabelTable(labels, switch)


def leaf_condition_failure(v: int, leaves: list[int], parent: int, table: PoleLabelTable) -> Optional[int]:
    """Number (1-3) of the first leaf-block condition violated at cut vertex ``v``, or ``None``.

    1: some leaf cannot have ``v`` on its outer face at all.
    2: ``v`` is not a switch in the parent block, so every leaf needs a
       non-small outer angle at ``v``.
    3: a leaf where ``v`` is not a switch and its outer angle at ``v`` is
       always small forces every other such leaf to offer a flat angle.
    """
    tabs = [table.get(b, v) for b in leaves]
    if any(not t for t in tabs):
        return 1
    if not table.switch[(parent, v)] and any(not (t & {0, 1}) for t in tabs):
        return 2
    non_switch = [i for i, b in enumerate(leaves) if not table.switch[(b, v)]]
    forcing = [i for i in non_switch if tabs[i] == {-1}]
    if len(forcing) > 1:
        return 3
    if forcing:
        j = forcing[0]
        if any(0 not in tabs[i] for i in non_switch if i != j):
            return 3
    return None


def check_leaf_conditions(v: int, leaves: list[int], parent: int, table: PoleLabelTable) -> bool:
    """Can the leaf blocks at cut vertex ``v`` be attached to any embedding of the rest?"""
    return leaf_condition_failure(v, leaves, parent, table) is None


def root_failures(bct: BlockCutTree, table: PoleLabelTable) -> dict[int, Optional[tuple[int, int]]]:
    """Per candidate root block: ``(cut vertex, condition)`` of the first violation, or ``None``."""
    out: dict[int, Optional[tuple[int, int]]] = {}
    for root in range(len(bct.blocks)):
        parent_block, _, order = bct.rooted(root)
        out[root] = None
        for v in order:
            leaves = [b for b in bct.blocks_of_vertex[v] if b != parent_block[v]]
            cond = leaf_condition_failure(v, leaves, parent_block[v], table)
            if cond is not None:
                out[root] = (v, cond)
                break
    return out


def decide_with_table(bct: BlockCutTree, table: PoleLabelTable, upward_blocks: list[bool],
                      rng: Optional[random.Random] = None) -> Optional[int]:
    """Id of a block that works as root of the block-cut tree, or ``None``.

    ``rng`` shuffles the pruning order among cut vertices (the verdict must
    not depend on it).
    """
    if not all(upward_blocks):
        return None
    for root in range(len(bct.blocks)):
        parent_block, _, order = bct.rooted(root)
        if rng is not None:
            order = _shuffled_postorder(bct, root, rng)
        if all(check_leaf_conditions(v, [b for b in bct.blocks_of_vertex[v] if b != parent_block[v]],
                                     parent_block[v], table) for v in order):
            return root
    return None


def _shuffled_postorder(bct: BlockCutTree, root: int, rng: random.Random) -> list[int]:
    parent_block, parent_cut, _ = bct.rooted(root)
    pending = {v: sum(1 for b in bct.blocks_of_vertex[v] if b != parent_block[v]
                      for w in bct.neighbors_of_block(b) if w != v) for v in parent_block}
    ready = [v for v, k in pending.items() if k == 0]
    order = []
    while ready:
        v = ready.pop(rng.randrange(len(ready)))
        order.append(v)
        up = parent_cut.get(parent_block[v])
        if up is not None:
            pending[up] -= 1
            if pending[up] == 0:
                ready.append(up)
    return order


@dataclass
class BlockSummary:
    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    spq_nodes: int
    upward: bool
    nonempty_roots: int
    rejected_at: Optional[int]
    arcs_computed: int


@dataclass
class Verdict:
    upward: bool
    root_block: Optional[int] = None
    blocks: list[BlockSummary] = field(default_factory=list)
    components: int = 1
    cyclic_shortcut: bool = False
    timings_ms: dict[str, float] = field(default_factory=dict)
    root_sets: dict[int, FeasibleSet] = field(default_factory=dict)
    trees: list[SPQTree] = field(default_factory=list)


def decide_upward_planar(g: Digraph, acyclic_fast_path: bool = False, first_hit: bool = True,
                         keep_sets: bool = False) -> Verdict:
    """Full pipeline: components, blocks, per-block engine, leaf-block conditions.

    ``first_hit`` lets a graph that is a single block stop at its first
    nonempty root set; multi-block graphs always need every root set.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if acyclic_fast_path and has_directed_cycle(g):
        timings["total"] = (time.perf_counter() - t0) * 1000
        return Verdict(False, cyclic_shortcut=True, timings_ms=timings)
    comps = [c for c in connected_components(g) if len(c) > 1]
    verdict = Verdict(True, components=max(1, len(connected_components(g))))
    spent = {"blocks": 0.0, "spq": 0.0, "dp": 0.0, "assemble": 0.0}
    for comp in comps:
        eids = sorted(e for v in comp for e in g.incidence[v] if g.edges[e][0] == v)
        ok, root = _decide_component(g, eids, first_hit, keep_sets, verdict, spent)
        if not ok:
            verdict.upward = False
            verdict.root_block = None
            break
        if len(comps) == 1:
            verdict.root_block = root
    spent["total"] = (time.perf_counter() - t0) * 1000
    verdict.timings_ms = {k: round(v, 3) for k, v in spent.items()}
    return verdict


def _decide_component(g: Digraph, eids: list[int], first_hit: bool, keep_sets: bool,
                      verdict: Verdict, spent: dict[str, float]) -> tuple[bool, Optional[int]]:
    t = time.perf_counter()
    sub, old = g.subgraph(eids)
    bct = block_cut_tree(sub)
    spent["blocks"] += (time.perf_counter() - t) * 1000
    single = len(bct.blocks) == 1
    results: list[BlockResult] = []
    for block in bct.blocks:
        t = time.perf_counter()
        tree = build_spq(sub, block)
        spent["spq"] += (time.perf_counter() - t) * 1000
        t = time.perf_counter()
        res = test_biconnected(tree, first_hit=first_hit and single)
        spent["dp"] += (time.perf_counter() - t) * 1000
        results.append(res)
        verdict.blocks.append(BlockSummary(
            edges=tuple(eids[e] for e in block),
            vertices=tuple(old[v] for v in bct.block_vertices[len(results) - 1]),
            spq_nodes=len(tree),
            upward=res.upward,
            nonempty_roots=len(res.nonempty_roots()),
            rejected_at=res.rejected_at,
            arcs_computed=res.arcs_computed,
        ))
        if keep_sets:
            verdict.root_sets.update({eids[e]: fs for e, fs in res.root_sets.items()})
            verdict.trees.append(tree)
        if not res.upward:
            return False, None
    t = time.perf_counter()
    table = build_pole_label_table(sub, bct, [r.root_sets for r in results])
    root = decide_with_table(bct, table, [r.upward for r in results])
    spent["assemble"] += (time.perf_counter() - t) * 1000
    return root is not None, root

"""Seeded random instances: 2-trees, partial 2-trees and glued block trees."""

from __future__ import annotations

import random
from typing import Optional

from .graph import Digraph

MODES = ("two-tree", "partial", "dag-oriented", "random-oriented")


def random_two_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """Undirected 2-tree on ``n`` vertices built by attaching vertices onto edges."""
    if n < 2:
        raise ValueError("n must be at least 2")
    edges = [(0, 1)]
    for v in range(2, n):
        a, b = rng.choice(edges)
        edges.append((a, v))
        edges.append((b, v))
    return edges


def thin_out(n: int, edges: list[tuple[int, int]], rng: random.Random, keep: float = 0.7) -> list[tuple[int, int]]:
    """Drop a random subset of edges while keeping the graph connected.

    A random spanning tree is always kept; every other edge survives with
    probability ``keep``.
    """
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = list(range(len(edges)))
    rng.shuffle(order)
    tree = set()
    for i in order:
        ra, rb = find(edges[i][0]), find(edges[i][1])
        if ra != rb:
            parent[ra] = rb
            tree.add(i)
    return [e for i, e in enumerate(edges) if i in tree or rng.random() < keep]


def orient(edges: list[tuple[int, int]], rank: list[int]) -> list[tuple[int, int]]:
    return [(a, b) if rank[a] < rank[b] else (b, a) for a, b in edges]


def generate(n: int, seed: int, mode: str = "partial") -> Digraph:
    """Deterministic instance for ``(n, seed, mode)``.

    ``two-tree`` is a full 2-tree oriented along a random vertex order;
    ``partial`` thins it out and orients by construction order;
    ``dag-oriented`` thins it out and orients along a random vertex order;
    ``random-oriented`` thins it out and orients every edge by a coin flip.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    rng = random.Random(f"{n}:{seed}:{mode}")
    edges = random_two_tree(n, rng)
    if mode == "two-tree":
        perm = list(range(n))
        rng.shuffle(perm)
        directed = orient(edges, perm)
    else:
        edges = thin_out(n, edges, rng)
        if mode == "partial":
            directed = orient(edges, list(range(n)))
        elif mode == "dag-oriented":
            perm = list(range(n))
            rng.shuffle(perm)
            directed = orient(edges, perm)
        else:
            directed = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in edges]
    rng.shuffle(directed)
    return Digraph.from_edges(n, directed)


def random_block_tree(n: int, seed: int, blocks: int = 3, acyclic: Optional[bool] = None) -> Digraph:
    """Several small random blocks glued at cut vertices into a connected graph on ``n`` vertices."""
    rng = random.Random(f"blocks:{n}:{seed}:{blocks}")
    if n < blocks + 1:
        raise ValueError("not enough vertices for the requested number of blocks")
    sizes = [2] * blocks
    for _ in range(n - 1 - blocks):
        sizes[rng.randrange(blocks)] += 1
    edges: list[tuple[int, int]] = []
    used = 1
    for size in sizes:
        local = random_two_tree(size, rng)
        local = thin_out(size, local, rng, keep=0.8)
        anchor = rng.randrange(used)
        mapping = [anchor] + list(range(used, used + size - 1))
        used += size - 1
        edges.extend((mapping[a], mapping[b]) for a, b in local)
    if acyclic is None:
        acyclic = rng.random() < 0.5
    if acyclic:
        perm = list(range(n))
        rng.shuffle(perm)
        directed = orient(edges, perm)
    else:
        directed = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in edges]
    return Digraph.from_edges(n, directed)

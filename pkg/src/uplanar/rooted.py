"""Feasible sets of pertinent graphs for a fixed root edge.

Sets are stored relative to the canonical pole order of the arc they belong
to (smaller vertex id first) and reoriented with ``swap_poles`` on demand.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import PoleOrderMismatch
from .shapes import (
    EMPTY,
    MAX_LEN,
    FeasibleSet,
    Shape,
    from_free,
    is_generic,
    iter_patterns,
    q_shape,
    series_shapes,
    swap_poles,
    universal_set,
)
from .spq import P, Q, S, SPQTree

MODE_PRODUCT = "A"
MODE_SOLVE_LEFT = "B"
MODE_SOLVE_RIGHT = "C"


def q_feasible(forward: bool) -> FeasibleSet:
    return FeasibleSet([q_shape(forward)])


def reorient(fs: FeasibleSet, have: tuple[int, int], want: tuple[int, int]) -> FeasibleSet:
    """Express a set stored for pole order ``have`` in pole order ``want``."""
    if have == want:
        return fs
    if have != (want[1], want[0]):
        raise PoleOrderMismatch(f"poles {have} cannot be read as {want}")
    return FeasibleSet(swap_poles(s) for s in fs)


# ---------------------------------------------------------------------------
# S-nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesContext:
    w: int
    n1: int
    n2: int
    n3: int

    @property
    def bound(self) -> int:
        return self.n3 + 4


def series_mode(n1: int, n2: int, n3: int) -> str:
    if n3 >= n1 and n3 >= n2:
        return MODE_PRODUCT
    return MODE_SOLVE_LEFT if n1 >= n2 else MODE_SOLVE_RIGHT


def cheapest_mode(size1: int, size2: int, bound: int) -> str:
    """Mode with the fewest membership queries for the actual set sizes."""
    targets_per_partner = 3 * (2 * bound + 1) * 9
    costs = {
        MODE_PRODUCT: size1 * size2,
        MODE_SOLVE_LEFT: targets_per_partner * size2,
        MODE_SOLVE_RIGHT: targets_per_partner * size1,
    }
    return min(costs, key=costs.__getitem__)


def s_feasible(f1: FeasibleSet, f2: FeasibleSet, ctx: SeriesContext, mode: Optional[str] = None) -> FeasibleSet:
    """Series composition of ``f1`` (poles u,w) and ``f2`` (poles w,v).

    Shapes with a left turn number outside ``±(n3 + 4)`` are dropped in every
    mode, so the three modes return the same set.  ``mode`` defaults to the
    size rule of ``series_mode``; ``"auto"`` picks ``cheapest_mode``.
    """
    if not f1 or not f2:
        return EMPTY
    if mode == "auto":
        mode = cheapest_mode(len(f1), len(f2), ctx.bound)
    mode = mode or series_mode(ctx.n1, ctx.n2, ctx.n3)
    bound = ctx.bound
    if mode == MODE_PRODUCT:
        out = set()
        for s1 in f1:
            for s2 in f2:
                for s in series_shapes(s1, s2):
                    if abs(s.tl) <= bound:
                        out.add(s)
        return FeasibleSet(out)
    if mode == MODE_SOLVE_LEFT:
        return FeasibleSet(_solve_left(f1, f2, universal_set(bound)))
    if mode == MODE_SOLVE_RIGHT:
        # mirror the pole order, so the targets' bound moves to the right turn number
        targets = [t for t in universal_set(bound + 4) if abs(t.tr) <= bound]
        swapped = _solve_left(FeasibleSet(swap_poles(x) for x in f2), FeasibleSet(swap_poles(x) for x in f1), targets)
        return FeasibleSet(swap_poles(x) for x in swapped)
    raise ValueError(f"unknown series mode {mode!r}")


def _solve_left(f1: FeasibleSet, f2: FeasibleSet, targets: Iterable[Shape]) -> set[Shape]:
    """Targets reachable by some ``s2`` in ``f2`` and a partner looked up in ``f1``."""
    by_v_side: dict[tuple[int, int, int], list[Shape]] = defaultdict(list)
    for s2 in f2:
        by_v_side[(s2.lv, s2.rlv, s2.rrv)].append(s2)
    out = set()
    for s in targets:
        for s2 in by_v_side.get((s.lv, s.rlv, s.rrv), ()):
            if _has_left_partner(s, s2, f1):
                out.add(s)
                break
    return out


def _has_left_partner(s: Shape, s2: Shape, f1: FeasibleSet) -> bool:
    for al in (-1, 0, 1):
        tl1 = s.tl - s2.tl - al
        for lv1 in (-1, 0, 1):
            s1 = from_free(tl1, s.lu, lv1, s.rlu)
            if s1.rru != s.rru or s1 not in f1:
                continue
            if s in series_shapes(s1, s2):
                return True
    return False


# ---------------------------------------------------------------------------
# P-nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelevantLabels:
    """Bounded witnesses for realizing the pattern ``sequence`` with the children of a P-node.

    ``holders[i]`` lists up to ``len(sequence) + 1`` children holding the
    i-th element, in first-encounter order.  ``only_non_generic`` lists
    children whose shapes in the pattern are all non-generic, with the
    positions they hold (capped at the number of non-generic positions plus
    two).  ``unfit`` lists up to two children holding no element at all.
    """

    sequence: tuple[Shape, ...]
    holders: tuple[tuple[int, ...], ...]
    only_non_generic: tuple[tuple[int, tuple[int, ...]], ...]
    unfit: tuple[int, ...]

    @property
    def non_generic_positions(self) -> int:
        return sum(not is_generic(x) for x in self.sequence)


def compute_labels(sequence: tuple[Shape, ...], children: Sequence[tuple[int, FeasibleSet]]) -> RelevantLabels:
    x = len(sequence)
    generic = [is_generic(e) for e in sequence]
    ng_cap = (x - sum(generic)) + 2
    holders: list[list[int]] = [[] for _ in sequence]
    ng: list[tuple[int, tuple[int, ...]]] = []
    unfit: list[int] = []
    for ref, fs in children:
        held = tuple(i for i, e in enumerate(sequence) if e in fs)
        for i in held:
            if len(holders[i]) <= x:
                holders[i].append(ref)
        if not held:
            if len(unfit) < 2:
                unfit.append(ref)
        elif not any(generic[i] for i in held) and len(ng) < ng_cap:
            ng.append((ref, held))
    return RelevantLabels(sequence, tuple(map(tuple, holders)), tuple(ng), tuple(unfit))


def realizable(labels: RelevantLabels, exclude: Optional[int] = None,
               extra: Optional[tuple[int, FeasibleSet]] = None) -> bool:
    """Can the children described by ``labels`` carry every position of the pattern?

    ``exclude`` drops a child (the new parent after re-rooting), ``extra``
    adds one (the old parent).  Each position needs its own child,
    non-generic positions take exactly one, and children that hold only
    non-generic elements must all be placed.
    """
    seq = labels.sequence
    generic = [is_generic(e) for e in seq]
    if any(ref != exclude for ref in labels.unfit):
        return False
    adj: list[list[int]] = [[ref for ref in hs if ref != exclude] for hs in labels.holders]
    ng = [(ref, held) for ref, held in labels.only_non_generic if ref != exclude]
    if extra is not None:
        ref, fs = extra
        held = tuple(i for i, e in enumerate(seq) if e in fs)
        if not held:
            return False
        for i in held:
            if ref not in adj[i]:
                adj[i].append(ref)
        if not any(generic[i] for i in held):
            ng.append((ref, held))
    if len(ng) > labels.non_generic_positions:
        return False
    for ref, held in ng:
        for i in held:
            if ref not in adj[i]:
                adj[i].append(ref)
    if not _saturates_left(adj):
        return False
    if ng:
        by_child: dict[int, list[int]] = {ref: list(held) for ref, held in ng}
        if not _saturates_left(list(by_child.values())):
            return False
    return True


def _saturates_left(adj: list[list]) -> bool:
    """Kuhn's augmenting paths: is there a matching covering every left vertex?"""
    match: dict = {}

    def augment(i: int, seen: set) -> bool:
        for r in adj[i]:
            if r in seen:
                continue
            seen.add(r)
            if r not in match or augment(match[r], seen):
                match[r] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(adj)))


class ParallelNode:
    """Feasible-set computation for one P-node, with labels cached per pattern.

    ``children`` are the neighbors acting as children in the first rooted
    traversal.  Later re-rootings reuse their labels via ``exclude``/``extra``.
    """

    def __init__(self, children: Sequence[tuple[int, FeasibleSet]]) -> None:
        self.children = list(children)
        self._labels: dict[tuple[Shape, ...], RelevantLabels] = {}
        self.index: dict[Shape, list[int]] = defaultdict(list)
        for ref, fs in self.children:
            for s in fs:
                self.index[s].append(ref)

    def labels(self, sequence: tuple[Shape, ...]) -> RelevantLabels:
        lab = self._labels.get(sequence)
        if lab is None:
            lab = compute_labels(sequence, self.children)
            self._labels[sequence] = lab
        return lab

    def feasible(self, exclude: Optional[int] = None,
                 extra: Optional[tuple[int, FeasibleSet]] = None) -> FeasibleSet:
        k = len(self.children) - (exclude is not None) + (extra is not None)
        allowed = {s for s, refs in self.index.items() if any(r != exclude for r in refs)}
        if extra is not None:
            allowed.update(extra[1])
        if any(not fs for ref, fs in self.children if ref != exclude):
            return EMPTY
        if extra is not None and not extra[1]:
            return EMPTY
        out = set()
        for first in allowed:
            for s, seq in iter_patterns(first, allowed, min(MAX_LEN, k)):
                if s in out:
                    continue
                if realizable(self.labels(seq), exclude, extra):
                    out.add(s)
        return FeasibleSet(out)


def p_feasible(children: Sequence[FeasibleSet]) -> FeasibleSet:
    """Parallel composition of ``k >= 2`` children sharing the pole order."""
    if len(children) < 2:
        raise ValueError("a parallel composition needs at least two children")
    return ParallelNode(list(enumerate(children))).feasible()


def root_feasible(f_child: FeasibleSet, forward: bool) -> FeasibleSet:
    """Feasible set of the whole block with the root edge on the outer face."""
    return p_feasible([q_feasible(forward), f_child])


# ---------------------------------------------------------------------------
# Whole rooted tree from scratch
# ---------------------------------------------------------------------------


def edge_forward(tree: SPQTree, q: int, poles: tuple[int, int]) -> bool:
    return tree.graph.edges[tree.edge_of[q]][0] == poles[0]


def arc_feasible(tree: SPQTree, mu: int, tau: int, child_set, series_mode_override: Optional[str] = "auto") -> FeasibleSet:
    """``F_{mu -> tau}`` from the sets of the arcs entering ``mu`` (``child_set(nu)`` gives ``F_{nu -> mu}``)."""
    poles = tree.poles[(mu, tau)]
    kind = tree.kind[mu]
    if kind == Q:
        return q_feasible(edge_forward(tree, mu, poles))
    if kind == S:
        cu, cv, w = tree.series_children(mu, tau)
        u, v = poles
        f1 = reorient(child_set(cu), tree.poles[(cu, mu)], (u, w))
        f2 = reorient(child_set(cv), tree.poles[(cv, mu)], (w, v))
        n1, n2 = tree.arc_sizes[(cu, mu)], tree.arc_sizes[(cv, mu)]
        ctx = SeriesContext(w, n1, n2, tree.n_vertices - n1 - n2 + 3)
        return s_feasible(f1, f2, ctx, series_mode_override)
    return p_feasible([child_set(nu) for nu in tree.adj[mu] if nu != tau])


def rooted_feasible_sets(tree: SPQTree, edge: int) -> tuple[dict[int, FeasibleSet], FeasibleSet]:
    """All ``F_mu`` (toward the root) and ``F_root`` for the view rooted at ``edge``."""
    view = tree.rooted_view(edge)
    sets: dict[int, FeasibleSet] = {}
    for mu in view.bottom_up():
        p = view.parent(mu)
        if p is None:
            continue
        sets[mu] = arc_feasible(tree, mu, p, lambda nu, mu=mu: sets[nu])
    root = view.root
    poles = view.poles(root)
    forward = edge_forward(tree, root, poles)
    if not tree.adj[root]:
        return sets, q_feasible(forward)
    (sigma,) = tree.adj[root]
    return sets, root_feasible(sets[sigma], forward)

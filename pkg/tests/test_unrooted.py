import random

import pytest

from uplanar.errors import MissingLabels
from uplanar.generate import generate
from uplanar.graph import Digraph, block_cut_tree
from uplanar.rooted import rooted_feasible_sets
from uplanar.shapes import universal_set
from uplanar.spq import P, Q, build_spq
from uplanar.unrooted import Engine, Reject
from uplanar.unrooted import test_biconnected as run_engine


def largest_block(g):
    return max(block_cut_tree(g).blocks, key=len)


@pytest.mark.parametrize("seed", range(8))
def test_root_sets_match_single_rooted_runs(seed):
    g = generate(9, seed, "two-tree" if seed % 2 else "partial")
    block = largest_block(g)
    tree = build_spq(g, block)
    res = run_engine(tree)
    for e in block:
        assert res.root_sets[e] == rooted_feasible_sets(tree, e)[1]


def test_every_arc_computed_at_most_once():
    g = generate(30, 4, "two-tree")
    tree = build_spq(g)
    res = run_engine(tree)  # the arc store raises on a second computation
    assert res.upward
    inner = [key for key in res.arcs if tree.kind[key[0]] != Q]
    assert res.arcs_computed == len(inner) <= len(tree.arcs())


def test_first_hit_stops_early():
    g = generate(12, 1, "two-tree")
    tree = build_spq(g)
    full = run_engine(tree)
    quick = run_engine(tree, first_hit=True)
    assert quick.upward == full.upward
    assert quick.arcs_computed <= full.arcs_computed
    assert set(quick.root_sets) <= set(full.root_sets)


def test_two_empty_neighbors_reject():
    # two antiparallel digons hanging off one triangle-shaped cycle
    g = Digraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2)])
    res = run_engine(build_spq(g))
    assert not res.upward and res.rejected_at is not None
    assert all(not fs for fs in res.root_sets.values())


def test_reject_carries_node():
    err = Reject(3, (1, 2))
    assert err.node == 3 and err.bad == (1, 2)


def test_fast_check_needs_labels():
    tree = build_spq(Digraph.from_edges(2, [(0, 1), (0, 1), (0, 1)]))
    with pytest.raises(MissingLabels):
        Engine(tree).p_fast_check(0, 1, universal_set(0)[0])


def test_fast_check_agrees_with_stored_sets():
    rng = random.Random(5)
    checked = 0
    seed = 0
    while checked < 500:
        seed += 1
        g = generate(10, seed, "two-tree")
        tree = build_spq(g)
        engine = Engine(tree)
        engine.bottom_up_first()
        for e in sorted(tree.edge_ids)[1:]:
            engine.root_set(tree.q_of_edge[e])
        for (mu, tau), fs in list(engine.arcs.items()):
            if tree.kind[mu] != P or checked >= 500:
                continue
            for s in rng.sample(universal_set(3), 6) + list(fs)[:2]:
                assert engine.p_fast_check(mu, tau, s) == (s in fs)
                checked += 1

import random

import pytest

from uplanar.errors import PoleOrderMismatch
from uplanar.generate import generate
from uplanar.graph import Digraph, block_cut_tree
from uplanar.oracle import oracle_feasible_set
from uplanar.rooted import (
    ParallelNode,
    SeriesContext,
    cheapest_mode,
    p_feasible,
    q_feasible,
    reorient,
    rooted_feasible_sets,
    s_feasible,
    series_mode,
)
from uplanar.shapes import EMPTY, IN, OUT, FeasibleSet, Shape, swap_poles, universal_set
from uplanar.spq import build_spq

FORWARD = Shape(0, 0, 1, 1, OUT, OUT, IN, IN)
BACKWARD = Shape(0, 0, 1, 1, IN, IN, OUT, OUT)


def test_q_node_sets():
    assert q_feasible(True) == {FORWARD}
    assert q_feasible(False) == {BACKWARD}


def test_two_parallel_forward_edges():
    assert p_feasible([q_feasible(True), q_feasible(True)]) == {FORWARD}


def test_antiparallel_edges_have_no_embedding():
    assert p_feasible([q_feasible(True), q_feasible(False)]) == EMPTY
    tree = build_spq(Digraph.from_edges(2, [(0, 1), (1, 0)]))
    assert rooted_feasible_sets(tree, 0)[1] == EMPTY


def test_path_through_a_sink():
    ctx = SeriesContext(w=2, n1=2, n2=2, n3=3)
    got = s_feasible(q_feasible(True), q_feasible(False), ctx)
    assert got == {Shape(-1, 1, 1, 1, OUT, OUT, OUT, OUT), Shape(1, -1, 1, 1, OUT, OUT, OUT, OUT)}


def test_reorient():
    fs = FeasibleSet([FORWARD, Shape(-1, 1, 1, 1, OUT, OUT, OUT, OUT)])
    assert reorient(fs, (1, 4), (1, 4)) is fs
    assert reorient(fs, (1, 4), (4, 1)) == {swap_poles(s) for s in fs}
    with pytest.raises(PoleOrderMismatch):
        reorient(fs, (1, 4), (1, 5))


def test_series_mode_rule():
    assert series_mode(3, 3, 5) == "A"
    assert series_mode(6, 3, 2) == "B"
    assert series_mode(3, 6, 2) == "C"
    assert cheapest_mode(2, 3, 6) == "A"
    assert cheapest_mode(1000, 1, 6) == "B"


@pytest.mark.parametrize("seed", range(40))
def test_series_modes_agree(seed):
    rng = random.Random(seed)
    shapes = universal_set(4)
    f1 = FeasibleSet(rng.sample(shapes, rng.randint(1, 8)))
    f2 = FeasibleSet(rng.sample(shapes, rng.randint(1, 8)))
    ctx = SeriesContext(0, rng.randint(2, 9), rng.randint(2, 9), rng.randint(3, 6))
    results = [s_feasible(f1, f2, ctx, mode) for mode in ("A", "B", "C", "auto")]
    assert all(r == results[0] for r in results)


def test_p_node_needs_two_children():
    with pytest.raises(ValueError):
        p_feasible([q_feasible(True)])


@pytest.mark.parametrize("seed", range(25))
def test_rerooted_labels_match_direct_computation(seed):
    rng = random.Random(seed)
    pool = universal_set(1)
    kids = [(i, FeasibleSet(rng.sample(pool, rng.randint(1, 4)))) for i in range(rng.randint(2, 4))]
    node = ParallelNode(kids)
    extra = FeasibleSet(rng.sample(pool, rng.randint(1, 4)))
    drop = rng.randrange(len(kids))
    direct = p_feasible([fs for i, fs in kids if i != drop] + [extra])
    assert node.feasible(exclude=drop, extra=(99, extra)) == direct
    assert node.feasible() == p_feasible([fs for _, fs in kids])


@pytest.mark.parametrize("seed", range(6))
def test_node_sets_match_oracle(seed):
    g = generate(6, seed, "random-oriented")
    for block in block_cut_tree(g).blocks:
        tree = build_spq(g, block)
        e = block[0]
        view = tree.rooted_view(e)
        sets, _ = rooted_feasible_sets(tree, e)
        for mu, fs in sets.items():
            sub, old = g.subgraph(tree.pertinent_edges(mu, view.parent(mu)))
            u, v = tree.poles[(mu, view.parent(mu))]
            assert fs == oracle_feasible_set(sub, (old.index(u), old.index(v)))

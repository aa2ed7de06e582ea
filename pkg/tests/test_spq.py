import pytest

from uplanar.errors import NotPartialTwoTree, UnknownEdge
from uplanar.generate import generate
from uplanar.graph import Digraph, block_cut_tree
from uplanar.spq import P, Q, S, build_spq


def kinds(tree):
    return sorted(tree.kind)


def test_triangle():
    tree = build_spq(Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert kinds(tree) == [Q, Q, Q, S]
    # one Q hangs off the S-node, the other two are its children
    (s,) = [mu for mu in range(len(tree)) if tree.kind[mu] == S]
    assert len(tree.adj[s]) == 3


def test_digon_is_two_adjacent_q_nodes():
    tree = build_spq(Digraph.from_edges(2, [(0, 1), (1, 0)]))
    assert kinds(tree) == [Q, Q]
    assert tree.adj[0] == [1]


def test_three_parallel_edges_make_a_p_node():
    tree = build_spq(Digraph.from_edges(2, [(0, 1), (0, 1), (1, 0)]))
    assert kinds(tree) == [P, Q, Q, Q]


def test_k4_rejected():
    with pytest.raises(NotPartialTwoTree):
        build_spq(Digraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]))


@pytest.mark.parametrize("seed", range(10))
def test_structure_invariants(seed):
    g = generate(12, seed, "two-tree")
    tree = build_spq(g)
    assert sorted(tree.edge_of.values()) == list(range(g.m))
    for mu in range(len(tree)):
        if tree.kind[mu] == Q:
            assert len(tree.adj[mu]) == 1
        elif tree.kind[mu] == S:
            assert len(tree.adj[mu]) == 3
        else:
            assert len(tree.adj[mu]) >= 3
        for nu in tree.adj[mu]:
            # the two sides of a tree edge partition the block's edges
            assert sorted(tree.pertinent_edges(mu, nu) + tree.pertinent_edges(nu, mu)) == list(range(g.m))
            assert tree.poles[(mu, nu)] == tree.poles[(nu, mu)]


def test_rooted_views_reach_every_node():
    g = generate(9, 3, "partial")
    for block in block_cut_tree(g).blocks:
        tree = build_spq(g, block)
        for e in block:
            view = tree.rooted_view(e)
            order = view.bottom_up()
            assert sorted(order) == list(range(len(tree)))
            assert order[-1] == tree.q_of_edge[e]
        with pytest.raises(UnknownEdge):
            tree.rooted_view(-1)


def test_render_mentions_every_node():
    tree = build_spq(generate(6, 0, "two-tree"))
    text = tree.rooted_view(0).render()
    assert len(text.strip().splitlines()) == len(tree)

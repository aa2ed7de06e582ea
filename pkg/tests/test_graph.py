import pytest

from uplanar.errors import IsolatedVertex, ParseError
from uplanar.graph import (
    Digraph,
    SwitchStatus,
    block_cut_tree,
    connected_components,
    format_graph,
    has_directed_cycle,
    parse_graph,
    switch_status,
    validate_partial_two_tree,
)

K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_parse_roundtrip_with_comments():
    g = parse_graph("# triangle\n3 3\n0 1\n1 2  # last\n0 2\n")
    assert g.n == 3 and g.edges == ((0, 1), (1, 2), (0, 2))
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize("text", ["", "3\n", "2 2\n0 1\n", "2 1\n0 x\n", "2 1\n0 0\n", "2 1\n0 5\n"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_strict_simple_rejects_antiparallel():
    text = "2 2\n0 1\n1 0\n"
    assert parse_graph(text).m == 2
    with pytest.raises(ParseError):
        parse_graph(text, strict_simple=True)


def test_switch_status():
    g = Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert switch_status(g, 0) is SwitchStatus.SOURCE
    assert switch_status(g, 2) is SwitchStatus.SINK
    assert switch_status(g, 1) is SwitchStatus.NON_SWITCH
    assert switch_status(g, 1, restriction=[0]) is SwitchStatus.SINK
    with pytest.raises(IsolatedVertex):
        switch_status(g, 2, restriction=[0])


def test_block_cut_tree_of_bowtie():
    g = Digraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    bct = block_cut_tree(g)
    assert sorted(sorted(b) for b in bct.blocks) == [[0, 1, 2], [3, 4, 5]]
    assert bct.cut_vertices == (2,)
    parent_block, _, order = bct.rooted(0)
    assert order == [2] and parent_block[2] == 0


def test_bridges_are_blocks():
    g = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    bct = block_cut_tree(g)
    assert len(bct.blocks) == 3 and sorted(bct.cut_vertices) == [1, 2]


def test_partial_two_tree_recognition():
    assert validate_partial_two_tree(Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]))
    assert not validate_partial_two_tree(Digraph.from_edges(4, K4))
    # K4 subdivided and glued to a triangle is still not a partial 2-tree
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (4, 3), (2, 3), (3, 5), (5, 6), (6, 3)]
    assert not validate_partial_two_tree(Digraph.from_edges(7, edges))


def test_components_and_cycles():
    g = Digraph.from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4)])
    assert sorted(map(sorted, connected_components(g))) == [[0, 1, 2], [3, 4]]
    assert has_directed_cycle(g)
    assert not has_directed_cycle(Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))


def test_subgraph_relabels_densely():
    g = Digraph.from_edges(5, [(0, 4), (4, 2), (2, 0)])
    sub, old = g.subgraph([1])
    assert sub.edges == ((1, 0),) and old == [2, 4]

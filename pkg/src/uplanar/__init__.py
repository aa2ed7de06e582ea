"""Upward planarity testing for directed partial 2-trees in quadratic time."""

from .assemble import decide_upward_planar
from .graph import Digraph, parse_graph
from .oracle import oracle_upward_planar

__all__ = ["Digraph", "decide_upward_planar", "oracle_upward_planar", "parse_graph"]
__version__ = "0.1.0"

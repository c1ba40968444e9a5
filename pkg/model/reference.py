"""
Literal recursive construction, kept as an independent reference.

Each growth step unions m relabelled copies of the previous graph, adds a
new active vertex and joins it to every bottom-level vertex of every copy.
Only meant for small t: memory grows with every full copy.
"""

from collections import Counter
from typing import Dict, Tuple

import networkx as nx

from core.exceptions import InvalidParametersError


def _seed(m: int, wheel: bool) -> nx.Graph:
    g = nx.Graph()
    g.add_node(0, level=0)
    for i in range(1, m + 1):
        g.add_node(i, level=1)
        g.add_edge(0, i)
    if wheel:
        if m == 2:
            g.add_edge(1, 2)
        else:
            g.add_edges_from((1 + i, 1 + (i + 1) % m) for i in range(m))
    return g


def build_literal(m: int, t: int, wheel: bool = False) -> nx.Graph:
    """
    Build G(t;m) (or G1(t;m) with ``wheel=True``) by literal duplication.

    Nodes carry a ``level`` attribute: the newest active vertex is level 0
    and the level of every copied vertex grows by one per step.
    """
    if m < 2 or t < 0:
        raise InvalidParametersError("build_literal needs m >= 2, t >= 0", details={"m": m, "t": t})

    g = _seed(m, wheel)
    for step in range(1, t + 1):
        grown = nx.disjoint_union_all([g] * m)
        for _, data in grown.nodes(data=True):
            data["level"] += 1
        bottom = step + 1
        active = grown.number_of_nodes()
        grown.add_node(active, level=0)
        bottoms = [v for v, lv in grown.nodes(data="level") if lv == bottom]
        grown.add_edges_from((active, v) for v in bottoms)
        g = grown
    return g


def degree_level_profile(g: nx.Graph) -> Dict[Tuple[int, int], int]:
    """Count of vertices per (level, degree) pair."""
    return dict(Counter((int(lv), int(g.degree(v))) for v, lv in g.nodes(data="level")))

"""
Level-major builders for the three graph families.

Rather than copying m whole sub-instances per growth step, every edge is
enumerated directly from the level structure: each bottom vertex j
(0 <= j < m^{t+1}) is joined to exactly one ancestor per level L in
[0, t], namely ancestor j // m^{t+1-L}. Bottom vertices sharing a
level-t parent form one seed rim in the wheel variants.
"""

import time
from typing import List, Optional

import numpy as np

from config.settings import get_settings
from core.exceptions import SizeCapExceededError
from core.logger import get_logger
from model.graph import GraphInstance
from model.params import ModelParams, Variant

logger = get_logger(__name__)


def level_offsets(m: int, t: int) -> List[int]:
    """First vertex id of each level 0..t+1, plus the total vertex count."""
    return [(m**L - 1) // (m - 1) for L in range(t + 3)]


def vertex_count(m: int, t: int) -> int:
    return (m ** (t + 2) - 1) // (m - 1)


def _check_size(m: int, t: int, max_vertices: Optional[int]) -> int:
    cap = max_vertices if max_vertices is not None else get_settings().MAX_VERTICES
    # Compare digits first so huge t never materialises m^(t+2)
    if (t + 2) * np.log10(m) > np.log10(cap) + 2:
        raise SizeCapExceededError(
            "Instance exceeds the vertex cap",
            details={"m": m, "t": t, "cap": cap},
        )
    n = vertex_count(m, t)
    if n > cap:
        raise SizeCapExceededError(
            "Instance exceeds the vertex cap",
            details={"m": m, "t": t, "vertices": n, "cap": cap},
        )
    return n


def _levels(m: int, t: int) -> np.ndarray:
    sizes = [m**L for L in range(t + 2)]
    return np.repeat(np.arange(t + 2, dtype=np.int32), sizes)


def hierarchy_edges(m: int, t: int) -> np.ndarray:
    """All ancestor-bottom edges, (t+1) * m^{t+1} rows of (ancestor, bottom)."""
    offsets = level_offsets(m, t)
    bottoms = m ** (t + 1)
    j = np.arange(bottoms, dtype=np.int64)
    bottom_ids = offsets[t + 1] + j
    blocks = []
    for L in range(t + 1):
        ancestors = offsets[L] + j // m ** (t + 1 - L)
        blocks.append(np.column_stack([ancestors, bottom_ids]))
    return np.concatenate(blocks)


def rim_edges(m: int, t: int) -> np.ndarray:
    """
    Seed-rim edges between bottom siblings, sorted ascending by (u, v).

    For m >= 3 each sibling group of m bottoms carries a cycle; for m = 2
    the degenerate rim is a single edge per sibling pair.
    """
    base = level_offsets(m, t)[t + 1]
    groups = np.arange(m**t, dtype=np.int64)[:, None] * m
    if m == 2:
        u = base + groups[:, 0]
        pairs = np.column_stack([u, u + 1])
    else:
        i = np.arange(m, dtype=np.int64)
        u = (base + groups + i).ravel()
        v = (base + groups + (i + 1) % m).ravel()
        pairs = np.column_stack([np.minimum(u, v), np.maximum(u, v)])
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def rim_edge_count(m: int, t: int) -> int:
    """m^{t+1} rim edges for m >= 3; one per sibling pair (2^t) for m = 2."""
    return m ** (t + 1) if m >= 3 else m**t


def build_base(m: int, t: int, max_vertices: Optional[int] = None) -> GraphInstance:
    """
    Build G(t;m), the star-seeded family.

    Args:
        m: Branching count (m >= 2)
        t: Generation index (t >= 0)
        max_vertices: Size cap override (defaults to settings)

    Returns:
        Immutable graph instance
    """
    params = ModelParams.create(variant=Variant.BASE, m=m, t=t)
    n = _check_size(m, t, max_vertices)
    start = time.perf_counter()
    g = GraphInstance.from_edges(params, n, hierarchy_edges(m, t), _levels(m, t))
    logger.info(
        f"Built {params.label}: {g.n} vertices, {g.num_edges} edges "
        f"in {time.perf_counter() - start:.3f}s"
    )
    return g


def build_wheel(m: int, t: int, max_vertices: Optional[int] = None) -> GraphInstance:
    """Build G1(t;m), grown from a wheel seed."""
    params = ModelParams.create(variant=Variant.WHEEL_SEED, m=m, t=t)
    n = _check_size(m, t, max_vertices)
    rim = rim_edges(m, t)
    edges = np.concatenate([hierarchy_edges(m, t), rim])
    g = GraphInstance.from_edges(
        params, n, edges, _levels(m, t),
        metadata={"rim_edges": int(rim.shape[0]), "single_edge_rim": m == 2},
    )
    logger.info(f"Built {params.label}: {g.n} vertices, {g.num_edges} edges")
    return g


def build_deleted(
    m: int,
    t: int,
    p: float,
    seed: int,
    max_vertices: Optional[int] = None,
) -> GraphInstance:
    """
    Build G2(t;m,p): the wheel variant with every rim edge deleted
    independently with probability p.

    A PCG64 stream seeded with ``seed`` supplies one uniform draw per rim
    edge in ascending (u, v) order; the edge is dropped iff draw < p.
    Hub-bottom edges are never touched, so the result stays connected.
    """
    params = ModelParams.create(variant=Variant.WHEEL_DELETED, m=m, t=t, p=p, seed=seed)
    n = _check_size(m, t, max_vertices)
    rim = rim_edges(m, t)
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random(rim.shape[0])
    kept = rim[draws >= p]
    edges = np.concatenate([hierarchy_edges(m, t), kept])
    g = GraphInstance.from_edges(
        params, n, edges, _levels(m, t),
        metadata={
            "rim_edges": int(rim.shape[0]),
            "rim_edges_kept": int(kept.shape[0]),
            "single_edge_rim": m == 2,
        },
    )
    logger.info(
        f"Built {params.label}: {g.n} vertices, {g.num_edges} edges "
        f"({kept.shape[0]}/{rim.shape[0]} rim edges kept)"
    )
    return g


def build(params: ModelParams, max_vertices: Optional[int] = None) -> GraphInstance:
    """Dispatch on the variant tag."""
    if params.variant is Variant.BASE:
        return build_base(params.m, params.t, max_vertices)
    if params.variant is Variant.WHEEL_SEED:
        return build_wheel(params.m, params.t, max_vertices)
    return build_deleted(params.m, params.t, params.p, params.seed, max_vertices)

"""
Structural measurements taken directly from a GraphInstance.

These are the independent oracle for the closed forms: nothing here
assumes the hierarchy, apart from the level map used for per-level
breakdowns and for separating the bottom layer in the power-law fit.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from analytic.closed_forms import EdgeDegreeSums
from config.settings import get_settings
from core.exceptions import (
    DisconnectedGraphError,
    InsufficientDegreeClassesError,
    UndefinedMeasureError,
)
from core.logger import get_logger
from model.graph import GraphInstance

logger = get_logger(__name__)

# Dense distance rows held at once by one BFS batch
_BFS_CELL_BUDGET = 10_000_000


class DiameterMode(str, Enum):
    """Diameter computation mode."""
    EXACT = "exact"
    BOUNDED = "bounded"
    SAMPLED = "sampled"


def _exact_int_sum(values: np.ndarray) -> int:
    """Sum int64 values without wrap-around."""
    return int(np.sum(values.astype(object))) if values.size else 0


def is_connected(g: GraphInstance) -> bool:
    n_components, _ = csgraph.connected_components(g.to_csr(), directed=False)
    return n_components == 1


# =============================================================================
# DEGREES
# =============================================================================

@dataclass
class DegreeHistogram:
    """Exact degree census."""
    counts: Dict[int, int]
    n: int

    def cumulative_points(self) -> List[Tuple[int, Fraction]]:
        """(k, fraction of vertices with degree >= k), k ascending."""
        points = []
        remaining = self.n
        for k in sorted(self.counts):
            points.append((k, Fraction(remaining, self.n)))
            remaining -= self.counts[k]
        return points

    def cumulative(self, k: int) -> Fraction:
        return Fraction(sum(c for d, c in self.counts.items() if d >= k), self.n)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "histogram": {str(k): c for k, c in sorted(self.counts.items())},
            "cumulative": [
                {"k": k, "exact": f"{p.numerator}/{p.denominator}", "float": float(p)}
                for k, p in self.cumulative_points()
            ],
        }


def degree_histogram(g: GraphInstance) -> DegreeHistogram:
    """Count vertices per degree."""
    values, freq = np.unique(g.degrees, return_counts=True)
    return DegreeHistogram(
        counts={int(k): int(c) for k, c in zip(values, freq)},
        n=g.n,
    )


def powerlaw_slope(g: GraphInstance, min_classes: int = 4) -> float:
    """
    Least-squares slope of log P_cum(k) against log k over the hub
    degree classes.

    The bottom layer (highest level) is left out of both the classes and
    the counts, so P_cum is taken over the hub hierarchy only. The
    negated slope estimates the cumulative exponent.

    Raises:
        InsufficientDegreeClassesError: fewer than ``min_classes`` classes
    """
    bottom = int(g.level.max())
    hub_degrees = g.degrees[g.level < bottom]
    classes, freq = np.unique(hub_degrees, return_counts=True)
    if classes.size < min_classes:
        raise InsufficientDegreeClassesError(
            f"Power-law fit needs {min_classes} degree classes, found {classes.size}",
            details={"classes": classes.tolist()},
        )
    # cumulative counts from the top class down
    at_least = np.cumsum(freq[::-1])[::-1]
    slope, _ = np.polyfit(np.log(classes), np.log(at_least / hub_degrees.size), 1)
    return float(slope)


# =============================================================================
# DISTANCES
# =============================================================================

@dataclass
class DiameterResult:
    """BFS diameter; ``lower_bound`` is set when only some sources were used."""
    value: int
    mode: DiameterMode
    sources: int
    lower_bound: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "mode": self.mode.value,
            "sources": self.sources,
            "lower_bound": self.lower_bound,
        }


def _batch_eccentricity(adj: sparse.csr_matrix, chunk: np.ndarray) -> int:
    dist = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True, indices=chunk)
    if not np.all(np.isfinite(dist)):
        raise DisconnectedGraphError("Graph is disconnected; diameter undefined")
    return int(dist.max())


def _bounded_diameter(adj: sparse.csr_matrix, degrees: np.ndarray) -> Tuple[int, int]:
    """
    Exact diameter from eccentricity bounds.

    A search from v with eccentricity e gives, for every w at distance d,
    max(d, e - d) <= ecc(w) <= e + d, and diameter <= 2e. Searches stop
    once no unsearched vertex can have an eccentricity above the best
    lower bound. Returns (diameter, number of searches).
    """
    n = adj.shape[0]
    ecc_lower = np.zeros(n, dtype=np.int64)
    ecc_upper = np.full(n, np.iinfo(np.int64).max // 2, dtype=np.int64)
    candidates = np.ones(n, dtype=bool)
    lower, upper = 0, int(ecc_upper[0])
    searches = 0

    while lower < upper and candidates.any():
        idx = np.flatnonzero(candidates)
        if searches == 0:
            v = int(idx[np.argmax(degrees[idx])])
        elif searches % 2:
            v = int(idx[np.argmax(ecc_upper[idx])])
        else:
            v = int(idx[np.argmin(ecc_lower[idx])])

        dist = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True, indices=v)
        if not np.all(np.isfinite(dist)):
            raise DisconnectedGraphError("Graph is disconnected; diameter undefined")
        d = dist.astype(np.int64)
        ecc = int(d.max())
        searches += 1

        np.maximum(ecc_lower, np.maximum(d, ecc - d), out=ecc_lower)
        np.minimum(ecc_upper, ecc + d, out=ecc_upper)
        lower = max(lower, int(ecc_lower.max()))
        upper = min(upper, 2 * ecc)
        candidates &= ecc_upper > lower
        candidates[v] = False

    return lower, searches


def diameter_bfs(
    g: GraphInstance,
    mode: DiameterMode = DiameterMode.EXACT,
    sources: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
) -> DiameterResult:
    """
    Diameter by breadth-first search.

    Exact mode searches from every vertex; Bounded mode returns the same
    exact value from the few searches that eccentricity bounds require;
    Sampled mode searches from ``sources`` random vertices and reports a
    lower bound. Exact mode is downgraded to Sampled above
    EXACT_DIAMETER_MAX_VERTICES.

    Raises:
        DisconnectedGraphError: graph has more than one component
    """
    settings = get_settings()
    mode = DiameterMode(mode)
    workers = workers or settings.MEASURE_WORKERS

    if not is_connected(g):
        raise DisconnectedGraphError("Graph is disconnected; diameter undefined", details={"n": g.n})

    if mode is DiameterMode.BOUNDED:
        start = time.perf_counter()
        value, searches = _bounded_diameter(g.to_csr(), g.degrees)
        logger.debug(
            f"Bounded diameter {value} after {searches} searches ({time.perf_counter() - start:.3f}s)"
        )
        return DiameterResult(value=value, mode=mode, sources=searches, lower_bound=False)

    if mode is DiameterMode.EXACT and g.n > settings.EXACT_DIAMETER_MAX_VERTICES:
        logger.warning(
            f"{g.n} vertices exceed EXACT_DIAMETER_MAX_VERTICES="
            f"{settings.EXACT_DIAMETER_MAX_VERTICES}; using sampled sources"
        )
        mode = DiameterMode.SAMPLED

    if mode is DiameterMode.EXACT:
        source_ids = np.arange(g.n)
    else:
        k = min(sources or settings.DIAMETER_SAMPLE_SOURCES, g.n)
        source_ids = np.sort(np.random.default_rng(seed).choice(g.n, size=k, replace=False))

    chunk_size = max(1, min(settings.BFS_CHUNK_SIZE, _BFS_CELL_BUDGET // max(g.n, 1)))
    chunks = [source_ids[i:i + chunk_size] for i in range(0, source_ids.size, chunk_size)]
    adj = g.to_csr()

    start = time.perf_counter()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            eccentricities = list(pool.map(lambda c: _batch_eccentricity(adj, c), chunks))
    else:
        eccentricities = [_batch_eccentricity(adj, c) for c in chunks]
    value = max(eccentricities)
    logger.debug(
        f"BFS diameter {value} from {source_ids.size} sources in {len(chunks)} batches "
        f"({time.perf_counter() - start:.3f}s)"
    )
    return DiameterResult(
        value=value,
        mode=mode,
        sources=int(source_ids.size),
        lower_bound=source_ids.size < g.n,
    )


# =============================================================================
# TRIANGLES AND CLUSTERING
# =============================================================================

@dataclass
class TriangleCount:
    total: int
    per_vertex: np.ndarray


def triangle_count(g: GraphInstance) -> TriangleCount:
    """
    Count triangles with the degree-ordered forward scheme.

    Each edge is oriented from the lower to the higher (degree, id) rank,
    so out-degrees stay small even next to the hub. With A+ the oriented
    adjacency, a triangle u < v < w is found once at A+[u, w] through
    (A+ A+), crediting u (row), w (column) and v (middle).
    """
    n = g.n
    if g.num_edges == 0:
        return TriangleCount(total=0, per_vertex=np.zeros(n, dtype=np.int64))
    order = np.lexsort((np.arange(n), g.degrees))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)

    edges = g.edges()
    lo = np.where(rank[edges[:, 0]] < rank[edges[:, 1]], edges[:, 0], edges[:, 1])
    hi = np.where(rank[edges[:, 0]] < rank[edges[:, 1]], edges[:, 1], edges[:, 0])
    forward = sparse.csr_matrix(
        (np.ones(lo.size, dtype=np.int64), (lo, hi)), shape=(n, n)
    )

    closing = (forward @ forward).multiply(forward).tocsr()
    middle = (forward.T @ forward).multiply(forward).tocsr()
    per_vertex = (
        np.asarray(closing.sum(axis=1)).ravel()
        + np.asarray(closing.sum(axis=0)).ravel()
        + np.asarray(middle.sum(axis=1)).ravel()
    ).astype(np.int64)
    total = int(closing.sum())
    return TriangleCount(total=total, per_vertex=per_vertex)


@dataclass
class ClusteringResult:
    """Average local clustering with a per-level breakdown."""
    average: float
    per_level: Dict[int, float]
    triangles: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "average": self.average,
            "per_level": {str(k): v for k, v in self.per_level.items()},
            "triangles": self.triangles,
        }


def average_local_clustering(g: GraphInstance) -> ClusteringResult:
    """
    Mean of c_v = t_v / (k_v (k_v - 1) / 2) over all vertices.

    Vertices of degree below 2 count as 0 and stay in the denominator.
    """
    tri = triangle_count(g)
    k = g.degrees.astype(np.float64)
    pairs = k * (k - 1) / 2
    local = np.divide(tri.per_vertex, pairs, out=np.zeros(g.n), where=pairs > 0)
    per_level = {
        int(L): float(local[g.level == L].mean()) for L in np.unique(g.level)
    }
    return ClusteringResult(
        average=float(local.mean()) if g.n else 0.0,
        per_level=per_level,
        triangles=tri.total,
    )


# =============================================================================
# DEGREE CORRELATIONS
# =============================================================================

def edge_degree_sums(g: GraphInstance) -> EdgeDegreeSums:
    """
    Exact sums over edges of k_i k_j, k_i + k_j and k_i^2 + k_j^2.

    Each vertex v appears in k_v edges, so the last two sums collapse to
    sum k_v^2 and sum k_v^3; the product sum is half of sum k_v s_v with
    s_v the total degree of v's neighbours.
    """
    deg = g.degrees.astype(np.int64)
    data = np.ones(g.indices.shape[0], dtype=np.int64)
    adj = sparse.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))
    neighbour_degree = adj @ deg

    values, freq = np.unique(deg, return_counts=True)
    degree_sum = sum(int(k) ** 2 * int(c) for k, c in zip(values, freq))
    square_sum = sum(int(k) ** 3 * int(c) for k, c in zip(values, freq))
    product_sum = _exact_int_sum(deg * neighbour_degree) // 2
    return EdgeDegreeSums(
        edges=Fraction(g.num_edges),
        product_sum=Fraction(product_sum),
        degree_sum=Fraction(degree_sum),
        square_sum=Fraction(square_sum),
    )


def assortativity_pearson(g: GraphInstance, exact: bool = False) -> Union[float, Fraction]:
    """
    Pearson correlation of endpoint degrees over the edge list.

    Args:
        g: Graph instance
        exact: Return the exact rational instead of a float

    Raises:
        UndefinedMeasureError: every edge endpoint has the same degree
    """
    if g.num_edges == 0:
        raise UndefinedMeasureError("Assortativity undefined for an empty edge set")
    r = edge_degree_sums(g).pearson()
    if r is None:
        raise UndefinedMeasureError("Assortativity undefined (degree-regular edge set)")
    return r if exact else float(r)


# =============================================================================
# REPORT
# =============================================================================

@dataclass
class MeasuredReport:
    """Everything measured on one instance."""
    params: Dict[str, Any]
    n: int
    edges: int
    histogram: DegreeHistogram
    diameter: Optional[DiameterResult]
    clustering: ClusteringResult
    assortativity: Optional[Fraction]
    connected: bool
    powerlaw_slope: Optional[float] = None
    errors: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        r = self.assortativity
        return {
            "params": self.params,
            "n": self.n,
            "edges": self.edges,
            "degrees": self.histogram.to_dict(),
            "diameter": self.diameter.to_dict() if self.diameter else None,
            "clustering": self.clustering.to_dict(),
            "assortativity": (
                {"exact": f"{r.numerator}/{r.denominator}", "float": float(r)} if r is not None else None
            ),
            "connected": self.connected,
            "powerlaw_slope": self.powerlaw_slope,
            "errors": self.errors,
        }

    CSV_COLUMNS = (
        "variant", "m", "t", "p", "seed", "n", "edges", "diameter", "diameter_lower_bound",
        "clustering", "triangles", "assortativity", "powerlaw_slope", "connected",
    )

    def to_csv_row(self) -> Dict[str, Any]:
        """Flat row keyed by CSV_COLUMNS."""
        return {
            **{k: self.params.get(k) for k in ("variant", "m", "t", "p", "seed")},
            "n": self.n,
            "edges": self.edges,
            "diameter": self.diameter.value if self.diameter else None,
            "diameter_lower_bound": self.diameter.lower_bound if self.diameter else None,
            "clustering": self.clustering.average,
            "triangles": self.clustering.triangles,
            "assortativity": float(self.assortativity) if self.assortativity is not None else None,
            "powerlaw_slope": self.powerlaw_slope,
            "connected": self.connected,
        }


def measure(
    g: GraphInstance,
    diameter_mode: DiameterMode = DiameterMode.EXACT,
    include_diameter: bool = True,
) -> MeasuredReport:
    """
    Run every measurement on one instance. Undefined quantities are
    recorded under ``errors`` instead of aborting the report.
    """
    start = time.perf_counter()
    errors: Dict[str, str] = {}
    connected = is_connected(g)

    diameter = None
    if include_diameter and connected:
        diameter = diameter_bfs(g, mode=diameter_mode)
    elif include_diameter:
        errors["diameter"] = "graph is disconnected"

    try:
        r: Optional[Fraction] = assortativity_pearson(g, exact=True)  # type: ignore[assignment]
    except UndefinedMeasureError as e:
        r = None
        errors["assortativity"] = e.message

    try:
        slope: Optional[float] = powerlaw_slope(g)
    except InsufficientDegreeClassesError as e:
        slope = None
        errors["powerlaw_slope"] = e.message

    report = MeasuredReport(
        params=g.params.to_dict(),
        n=g.n,
        edges=g.num_edges,
        histogram=degree_histogram(g),
        diameter=diameter,
        clustering=average_local_clustering(g),
        assortativity=r,
        connected=connected,
        powerlaw_slope=slope,
        errors=errors,
    )
    logger.info(f"Measured {g.params.label} in {time.perf_counter() - start:.3f}s")
    return report

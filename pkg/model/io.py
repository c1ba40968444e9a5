"""
Serialization of graph instances: edge list, DOT and JSON.

All exports are deterministic: edges are written once each, u < v,
in ascending order, with LF line endings.
"""

import io
import json
import re
from enum import Enum
from pathlib import Path
from typing import IO, Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.sparse import csgraph

from core.exceptions import ExportError, GraphFormatError, NonSimpleGraphError
from core.logger import get_logger
from model.graph import GraphInstance
from model.params import ModelParams, Variant

logger = get_logger(__name__)

Source = Union[bytes, str, IO[bytes], IO[str]]

_DOT_NODE = re.compile(r"^\s*(\d+)\s*\[\s*level\s*=\s*(\d+)\s*\]\s*;?\s*$")
_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;?\s*$")
_DOT_ATTR = re.compile(r'(\w+)\s*=\s*"?([\w.+-]+)"?')


class ExportFormat(str, Enum):
    """Supported instance formats."""
    EDGE_LIST = "edgelist"
    DOT = "dot"
    JSON = "json"


# =============================================================================
# EXPORT
# =============================================================================

def _edge_list_text(g: GraphInstance) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.iter_edges())


def _dot_text(g: GraphInstance) -> str:
    p = g.params
    attrs = [f'variant="{p.variant.value}"', f"m={p.m}", f"t={p.t}"]
    if p.variant is Variant.WHEEL_DELETED:
        attrs += [f"p={p.p!r}", f"seed={p.seed}"]
    lines = ["graph G {", f"  graph [{', '.join(attrs)}];"]
    lines += [f"  {v} [level={int(lv)}];" for v, lv in enumerate(g.level)]
    lines += [f"  {u} -- {v};" for u, v in g.iter_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _json_text(g: GraphInstance) -> str:
    doc = {
        **g.params.to_dict(),
        "n": g.n,
        "levels": g.level.tolist(),
        "edges": g.edges().tolist(),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def export_edges(g: GraphInstance, fmt: ExportFormat = ExportFormat.EDGE_LIST) -> bytes:
    """
    Serialize an instance.

    Args:
        g: Graph instance
        fmt: Output format

    Returns:
        ASCII bytes
    """
    fmt = ExportFormat(fmt)
    if fmt is ExportFormat.EDGE_LIST:
        text = _edge_list_text(g)
    elif fmt is ExportFormat.DOT:
        text = _dot_text(g)
    else:
        text = _json_text(g)
    return text.encode("ascii")


def write_instance(g: GraphInstance, path: Union[str, Path], fmt: ExportFormat) -> Path:
    """Write an export to disk, creating parent directories."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(export_edges(g, fmt))
    except OSError as e:
        raise ExportError(f"Cannot write {path}", details={"error": str(e)}) from e
    logger.info(f"Wrote {fmt.value} export of {g.params.label} to {path}")
    return path


# =============================================================================
# IMPORT
# =============================================================================

def _read_text(stream: Source) -> str:
    if isinstance(stream, bytes):
        data: Any = stream
    elif isinstance(stream, str):
        data = stream
    else:
        try:
            data = stream.read()
        except OSError as e:
            raise ExportError("Cannot read edge stream", details={"error": str(e)}) from e
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as e:
            raise GraphFormatError("Edge stream is not ASCII", details={"error": str(e)}) from e
    if not data.strip():
        raise GraphFormatError("Empty edge stream")
    return data


def _detect_format(text: str) -> ExportFormat:
    head = text.lstrip()
    if head.startswith("{"):
        return ExportFormat.JSON
    if head.startswith("graph") or head.startswith("strict graph"):
        return ExportFormat.DOT
    return ExportFormat.EDGE_LIST


def _parse_edge_list(text: str) -> np.ndarray:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"Line {lineno}: expected 'u v'", details={"line": raw})
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise GraphFormatError(f"Line {lineno}: non-integer vertex id", details={"line": raw}) from e
        if u < 0 or v < 0:
            raise GraphFormatError(f"Line {lineno}: negative vertex id", details={"line": raw})
        if u == v:
            raise NonSimpleGraphError(f"Line {lineno}: self-loop at vertex {u}")
        pairs.append((u, v))
    if not pairs:
        raise GraphFormatError("Edge stream holds no edges")
    return np.asarray(pairs, dtype=np.int64)


def _parse_dot(text: str) -> Tuple[np.ndarray, Dict[int, int], Dict[str, str]]:
    levels: Dict[int, int] = {}
    pairs = []
    attrs: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("graph ["):
            attrs = dict(_DOT_ATTR.findall(line))
        elif (node := _DOT_NODE.match(line)) is not None:
            levels[int(node.group(1))] = int(node.group(2))
        elif (edge := _DOT_EDGE.match(line)) is not None:
            u, v = int(edge.group(1)), int(edge.group(2))
            if u == v:
                raise NonSimpleGraphError(f"Self-loop at vertex {u}")
            pairs.append((u, v))
    if not pairs:
        raise GraphFormatError("DOT stream holds no edges")
    return np.asarray(pairs, dtype=np.int64), levels, attrs


def _params_from_mapping(doc: Dict[str, Any]) -> Optional[ModelParams]:
    if "variant" not in doc or "m" not in doc or "t" not in doc:
        return None
    variant = Variant(doc["variant"])
    stochastic = variant is Variant.WHEEL_DELETED
    return ModelParams.create(
        variant=variant,
        m=int(doc["m"]),
        t=int(doc["t"]),
        p=float(doc["p"]) if stochastic else None,
        seed=int(doc["seed"]) if stochastic else None,
    )


def _canonical_edges(pairs: np.ndarray) -> np.ndarray:
    """Orient u < v, sort, and reject repeated edges."""
    edges = np.column_stack([pairs.min(axis=1), pairs.max(axis=1)])
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    edges = edges[order]
    dup = np.flatnonzero(np.all(edges[1:] == edges[:-1], axis=1))
    if dup.size:
        u, v = edges[dup[0]]
        raise NonSimpleGraphError(f"Duplicate edge {int(u)}-{int(v)}", details={"duplicates": int(dup.size)})
    return edges


def _infer_levels(
    n: int, edges: np.ndarray, params: Optional[ModelParams]
) -> Tuple[np.ndarray, ModelParams, int]:
    """
    Recover the level map from degrees.

    The hub is the lowest-id vertex of maximum degree and its neighbours
    are exactly the bottom layer. Every other vertex sits at level
    t + 1 - log_m(degree). Without params the instance is taken as Base,
    with t read off the bottom degree and m off the hub degree.
    """
    deg = np.bincount(edges.ravel(), minlength=n)
    hub = int(np.argmax(deg))
    bottom_mask = np.zeros(n, dtype=bool)
    bottom_mask[edges[edges[:, 0] == hub, 1]] = True
    bottom_mask[edges[edges[:, 1] == hub, 0]] = True

    if params is None:
        bottom_degrees = np.unique(deg[bottom_mask])
        if bottom_degrees.size != 1:
            raise GraphFormatError(
                "Cannot recover levels: hub neighbours have mixed degrees; supply params or use JSON",
                details={"bottom_degrees": bottom_degrees.tolist()[:10]},
            )
        t = int(bottom_degrees[0]) - 1
        m = int(round(float(deg[hub]) ** (1.0 / (t + 1))))
        if m < 2 or m ** (t + 1) != int(deg[hub]):
            raise GraphFormatError(
                "Hub degree is not a power of a branching count",
                details={"hub_degree": int(deg[hub]), "t": t},
            )
        params = ModelParams.create(variant=Variant.BASE, m=m, t=t)

    m, t = params.m, params.t
    level = np.full(n, -1, dtype=np.int32)
    level[hub] = 0
    level[bottom_mask] = t + 1
    by_degree = {m ** (t + 1 - L): L for L in range(1, t + 1)}
    for v in np.flatnonzero(level < 0):
        L = by_degree.get(int(deg[v]))
        if L is None:
            raise GraphFormatError(
                f"Vertex {int(v)} has degree {int(deg[v])}, which matches no level",
                details={"m": m, "t": t},
            )
        level[v] = L
    return level, params, hub


def import_edges(
    stream: Source,
    params: Optional[ModelParams] = None,
    fmt: Optional[ExportFormat] = None,
) -> GraphInstance:
    """
    Rebuild a GraphInstance from an exported stream.

    The format is detected from the first token unless given. Levels come
    from the JSON or DOT payload when present, otherwise they are
    recovered from degrees. Disconnected input is accepted with a warning.

    Args:
        stream: Bytes, text, or a readable file object
        params: Parameters to attach (overrides any embedded ones)
        fmt: Force a format instead of detecting it

    Returns:
        Graph instance

    Raises:
        GraphFormatError: Empty or malformed stream, unrecoverable levels
        NonSimpleGraphError: Self-loops or duplicate edges
    """
    text = _read_text(stream)
    fmt = ExportFormat(fmt) if fmt is not None else _detect_format(text)

    level_map: Optional[np.ndarray] = None
    declared_n: Optional[int] = None

    if fmt is ExportFormat.JSON:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise GraphFormatError("Malformed JSON instance", details={"error": str(e)}) from e
        raw_edges = doc.get("edges") or []
        if not raw_edges:
            raise GraphFormatError("JSON instance holds no edges")
        pairs = np.asarray(raw_edges, dtype=np.int64).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise NonSimpleGraphError("Self-loop in JSON instance")
        declared_n = doc.get("n")
        if doc.get("levels") is not None:
            level_map = np.asarray(doc["levels"], dtype=np.int32)
        params = params or _params_from_mapping(doc)
    elif fmt is ExportFormat.DOT:
        pairs, levels, attrs = _parse_dot(text)
        if levels:
            level_map = np.full(max(levels) + 1, -1, dtype=np.int32)
            for v, lv in levels.items():
                level_map[v] = lv
        params = params or _params_from_mapping(attrs)
    else:
        pairs = _parse_edge_list(text)

    if np.any(pairs < 0):
        raise GraphFormatError("Negative vertex id")
    edges = _canonical_edges(pairs)
    n = int(edges.max()) + 1
    if declared_n is not None:
        n = max(n, int(declared_n))
    if level_map is not None:
        n = max(n, int(level_map.shape[0]))

    if level_map is None or level_map.shape[0] != n or np.any(level_map < 0):
        level_map, params, hub = _infer_levels(n, edges, params)
    else:
        if params is None:
            raise GraphFormatError("Levels given without m and t; supply params")
        hubs = np.flatnonzero(level_map == 0)
        if hubs.size != 1:
            raise GraphFormatError("Expected exactly one level-0 vertex", details={"found": int(hubs.size)})
        hub = int(hubs[0])

    g = GraphInstance.from_edges(params, n, edges, level_map, hub=hub)
    n_components, _ = csgraph.connected_components(g.to_csr(), directed=False)
    if n_components > 1:
        logger.warning(f"Imported graph is disconnected ({n_components} components)")
        g = GraphInstance.from_edges(
            params, n, edges, level_map, hub=hub,
            metadata={"connected": False, "components": int(n_components)},
        )
    logger.info(f"Imported {fmt.value} instance: {g.n} vertices, {g.num_edges} edges")
    return g


def read_instance(path: Union[str, Path], params: Optional[ModelParams] = None) -> GraphInstance:
    """Import an instance file."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ExportError(f"Cannot read {path}", details={"error": str(e)}) from e
    return import_edges(io.BytesIO(data), params=params)

"""
Sweep runner: one CSV row per (cell, seed, quantity).

Cells run on a bounded process pool; rows are collected in grid order
regardless of completion order. Cells larger than
SWEEP_MEASURE_MAX_VERTICES report closed forms only.
"""

import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO, Union

import numpy as np
from tqdm import tqdm

from analytic.closed_forms import (
    assortativity_r,
    clustering_c1,
    clustering_c2_expected,
    counts,
    diameter_closed_form,
    g2_expected_sums,
    hitting_closed_forms,
)
from config.settings import get_settings
from core.exceptions import ExportError, HierarchyToolkitError
from core.logger import get_logger
from empirical.measures import (
    DiameterMode,
    assortativity_pearson,
    average_local_clustering,
    diameter_bfs,
)
from model.builders import build, rim_edge_count, vertex_count
from model.graph import GraphInstance
from model.params import ModelParams, Variant
from sweep.spec import Quantity, SweepCell, SweepSpec
from walk.solvers import exact_hitting_solve
from walk.types import TrapSpec

logger = get_logger(__name__)

CSV_COLUMNS = ("variant", "m", "t", "p", "seed", "quantity", "closed_form", "measured", "stderr", "error")


def format_number(value: Any, digits: int = 12) -> str:
    """Floats with ``digits`` significant digits; blanks for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.{digits}g}"
    return str(value)


# =============================================================================
# PER-QUANTITY EVALUATORS
# =============================================================================

def _closed_edges(variant: Variant, m: int, t: int, p: Optional[float]) -> float:
    _, e = counts(m, t)
    if variant is Variant.BASE:
        return e.float
    if variant is Variant.WHEEL_SEED:
        return float(e.numerator + rim_edge_count(m, t))
    return float(g2_expected_sums(m, t, p).sums.edges)


def closed_value(quantity: Quantity, variant: Variant, m: int, t: int, p: Optional[float]) -> Optional[float]:
    """Closed-form value, or None where no formula exists."""
    if quantity is Quantity.VERTICES:
        return counts(m, t)[0].float
    if quantity is Quantity.EDGES:
        return _closed_edges(variant, m, t, p)
    if quantity is Quantity.AVERAGE_DEGREE:
        return 2 * _closed_edges(variant, m, t, p) / counts(m, t)[0].float
    if quantity is Quantity.DIAMETER:
        return float(diameter_closed_form(variant, m, t, p))
    if quantity is Quantity.CLUSTERING:
        if variant is Variant.BASE:
            return 0.0
        if variant is Variant.WHEEL_SEED:
            return clustering_c1(m, t).float
        return clustering_c2_expected(m, t, p).float
    if quantity is Quantity.ASSORTATIVITY:
        if variant is Variant.BASE:
            return assortativity_r(m, t).float
        if variant is Variant.WHEEL_DELETED:
            r2 = g2_expected_sums(m, t, p).r2
            return float(r2) if r2 is not None else None
        return None
    if variant is Variant.BASE:
        return hitting_closed_forms(m, t).mean.float
    return None


MEASURES: Dict[Quantity, Callable[[GraphInstance], float]] = {
    Quantity.VERTICES: lambda g: float(g.n),
    Quantity.EDGES: lambda g: float(g.num_edges),
    Quantity.AVERAGE_DEGREE: lambda g: 2.0 * g.num_edges / g.n,
    Quantity.DIAMETER: lambda g: float(diameter_bfs(g, mode=DiameterMode.BOUNDED).value),
    Quantity.CLUSTERING: lambda g: average_local_clustering(g).average,
    Quantity.ASSORTATIVITY: lambda g: float(assortativity_pearson(g)),
    Quantity.MEAN_HITTING: lambda g: exact_hitting_solve(TrapSpec.create(g)).mean,
}


def _row(cell: SweepCell, quantity: Quantity, seed: Any = "", **values: Any) -> Dict[str, Any]:
    return {
        "variant": cell.variant.value,
        "m": cell.m,
        "t": cell.t,
        "p": cell.p,
        "seed": seed,
        "quantity": quantity.value,
        "closed_form": values.get("closed_form"),
        "measured": values.get("measured"),
        "stderr": values.get("stderr"),
        "error": values.get("error", ""),
    }


def evaluate_cell(
    cell: SweepCell,
    quantities: List[Quantity],
    measure: bool = True,
    measure_max_vertices: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    All rows for one grid point.

    Errors are caught per quantity and land in the ``error`` column.
    For several seeds an extra ``seed=all`` row carries the seed mean
    and its standard error.
    """
    cap = measure_max_vertices or get_settings().SWEEP_MEASURE_MAX_VERTICES
    closed: Dict[Quantity, Dict[str, Any]] = {}
    for q in quantities:
        try:
            closed[q] = {"closed_form": closed_value(q, cell.variant, cell.m, cell.t, cell.p)}
        except HierarchyToolkitError as e:
            closed[q] = {"closed_form": None, "error": e.message}

    if not measure or vertex_count(cell.m, cell.t) > cap:
        if measure:
            logger.warning(f"Cell m={cell.m} t={cell.t} exceeds {cap} vertices; closed forms only")
        return [_row(cell, q, **closed[q]) for q in quantities]

    seeds: List[Any] = list(cell.seeds) if cell.variant is Variant.WHEEL_DELETED else [""]
    rows: List[Dict[str, Any]] = []
    samples: Dict[Quantity, List[float]] = {q: [] for q in quantities}
    for seed in seeds:
        try:
            params = ModelParams.create(
                variant=cell.variant, m=cell.m, t=cell.t, p=cell.p,
                seed=seed if seed != "" else None,
            )
            g = build(params)
        except HierarchyToolkitError as e:
            rows += [_row(cell, q, seed, closed_form=closed[q]["closed_form"], error=e.message) for q in quantities]
            continue
        for q in quantities:
            try:
                value = MEASURES[q](g)
                samples[q].append(value)
                rows.append(_row(cell, q, seed, measured=value, **closed[q]))
            except HierarchyToolkitError as e:
                rows.append(_row(cell, q, seed, closed_form=closed[q]["closed_form"], error=e.message))

    if len(seeds) > 1:
        for q in quantities:
            values = np.asarray(samples[q])
            if values.size == 0:
                continue
            stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else None
            rows.append(_row(cell, q, "all", measured=float(values.mean()), stderr=stderr, **closed[q]))
    return rows


# =============================================================================
# RUNNER
# =============================================================================

@dataclass
class SweepResult:
    """Rows in grid order plus failure bookkeeping."""
    rows: List[Dict[str, Any]] = field(default_factory=list)
    cells: int = 0
    failed_cells: int = 0

    @property
    def total_failure(self) -> bool:
        return self.cells > 0 and self.failed_cells == self.cells

    def write_csv(self, target: Union[str, Path, TextIO, None] = None, digits: Optional[int] = None) -> None:
        """Write rows as CSV to a path, a stream, or stdout."""
        digits = digits or get_settings().FLOAT_SIGNIFICANT_DIGITS
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: format_number(row.get(k), digits) for k in CSV_COLUMNS})
        text = buffer.getvalue()
        if target is None:
            sys.stdout.write(text)
        elif isinstance(target, (str, Path)):
            path = Path(target)
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, encoding="ascii")
            except OSError as e:
                raise ExportError(f"Cannot write {path}", details={"error": str(e)}) from e
            logger.info(f"Wrote {len(self.rows)} sweep rows to {path}")
        else:
            target.write(text)


def _cell_failed(rows: List[Dict[str, Any]]) -> bool:
    return bool(rows) and all(r["error"] for r in rows)


def run_sweep(
    spec: SweepSpec,
    workers: Optional[int] = None,
    show_progress: bool = True,
) -> SweepResult:
    """
    Evaluate every grid cell.

    Args:
        spec: Sweep grid
        workers: Worker processes (settings default)
        show_progress: Show a progress bar

    Returns:
        SweepResult with rows in grid order
    """
    settings = get_settings()
    workers = workers or settings.SWEEP_WORKERS
    cells = list(spec.cells())
    task = partial(
        evaluate_cell,
        quantities=list(spec.quantities),
        measure=spec.measure,
        measure_max_vertices=settings.SWEEP_MEASURE_MAX_VERTICES,
    )
    logger.info(f"Sweeping {len(cells)} cells of variant {spec.variant.value} with {workers} worker(s)")

    result = SweepResult(cells=len(cells))
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(tqdm(pool.map(task, cells), total=len(cells), desc="sweep", disable=not show_progress))
    else:
        per_cell = [task(cell) for cell in tqdm(cells, desc="sweep", disable=not show_progress)]

    for rows in per_cell:
        result.rows.extend(rows)
        if _cell_failed(rows):
            result.failed_cells += 1
    if result.failed_cells:
        logger.warning(f"{result.failed_cells}/{result.cells} cells failed completely")
    return result

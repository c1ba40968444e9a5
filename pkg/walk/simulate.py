"""
Monte-Carlo trapping walks.

Walkers advance together in batches over the CSR arrays: a walker at v
moves to indices[indptr[v] + floor(u * d_v)] for a uniform u. Every
batch draws from its own child of SeedSequence(seed), so results depend
on the seed and batch size only, never on the worker count.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from config.settings import get_settings
from core.exceptions import SimulationError
from core.logger import get_logger
from walk.types import HittingMethod, HittingSummary, TrapSpec

logger = get_logger(__name__)


@dataclass
class _BatchTally:
    total: float
    total_sq: float
    absorbed: int
    truncated: int
    level_total: np.ndarray
    level_total_sq: np.ndarray
    level_absorbed: np.ndarray


def default_max_steps(t: int) -> int:
    """100 (2t + 2): the hitting tail decays like (t/(t+1))^(steps/2)."""
    return 100 * (2 * t + 2)


def _run_batch(
    spec: TrapSpec,
    size: int,
    seed_seq: np.random.SeedSequence,
    max_steps: int,
    source: Optional[int],
    n_levels: int,
) -> _BatchTally:
    g = spec.graph
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    indptr, indices, deg = g.indptr, g.indices, g.degrees

    if source is None:
        # uniform over non-trap vertices
        starts = rng.integers(0, g.n - 1, size=size)
        starts[starts >= spec.trap] += 1
    else:
        starts = np.full(size, source, dtype=np.int64)

    position = starts.copy()
    steps = np.zeros(size, dtype=np.int64)
    alive = np.arange(size)
    for step in range(1, max_steps + 1):
        if alive.size == 0:
            break
        here = position[alive]
        offset = np.floor(rng.random(alive.size) * deg[here]).astype(np.int64)
        nxt = indices[indptr[here] + offset]
        position[alive] = nxt
        hit = nxt == spec.trap
        steps[alive[hit]] = step
        alive = alive[~hit]

    done = np.ones(size, dtype=bool)
    done[alive] = False
    h = steps[done].astype(np.float64)
    start_levels = g.level[starts[done]]
    return _BatchTally(
        total=float(h.sum()),
        total_sq=float(np.dot(h, h)),
        absorbed=int(done.sum()),
        truncated=int(alive.size),
        level_total=np.bincount(start_levels, weights=h, minlength=n_levels),
        level_total_sq=np.bincount(start_levels, weights=h * h, minlength=n_levels),
        level_absorbed=np.bincount(start_levels, minlength=n_levels),
    )


def _mean_and_stderr(total: float, total_sq: float, count: int) -> tuple:
    if count == 0:
        return math.nan, math.nan
    mean = total / count
    if count == 1:
        return mean, math.nan
    variance = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    return mean, math.sqrt(variance / count)


def simulate_walks(
    spec: TrapSpec,
    trials: int,
    seed: int = 0,
    max_steps: Optional[int] = None,
    source: Optional[int] = None,
    workers: Optional[int] = None,
    batch_size: Optional[int] = None,
) -> HittingSummary:
    """
    Simulate uniform-neighbour random walks until they hit the trap.

    Args:
        spec: Graph and trap
        trials: Number of walks
        seed: Master seed
        max_steps: Cut-off per walk (default 100 (2t + 2))
        source: Fixed start vertex; uniform non-trap start when None
        workers: Threads running batches
        batch_size: Walkers per batch

    Returns:
        HittingSummary with sample mean, standard error and per-level means.
        ``flagged`` is set when the truncated share exceeds
        MC_TRUNCATION_THRESHOLD.

    Raises:
        SimulationError: unusable trial count, step limit or source
    """
    settings = get_settings()
    g = spec.graph
    if trials < 1:
        raise SimulationError("trials must be >= 1", details={"trials": trials})
    max_steps = max_steps if max_steps is not None else default_max_steps(g.params.t)
    if max_steps < 1:
        raise SimulationError("max_steps must be >= 1", details={"max_steps": max_steps})
    if source is not None and (source == spec.trap or not 0 <= source < g.n):
        raise SimulationError("source must be a non-trap vertex", details={"source": source})
    if g.n < 2:
        raise SimulationError("Graph has no non-trap vertex")

    workers = workers or settings.MC_WORKERS
    batch_size = batch_size or settings.MC_BATCH_SIZE
    n_batches = math.ceil(trials / batch_size)
    sizes = [batch_size] * (n_batches - 1) + [trials - batch_size * (n_batches - 1)]
    children = np.random.SeedSequence(seed).spawn(n_batches)
    n_levels = int(g.level.max()) + 1

    start = time.perf_counter()
    jobs = list(zip(sizes, children))
    if workers > 1 and n_batches > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(
                lambda job: _run_batch(spec, job[0], job[1], max_steps, source, n_levels), jobs
            ))
    else:
        tallies = [_run_batch(spec, size, child, max_steps, source, n_levels) for size, child in jobs]

    total = sum(b.total for b in tallies)
    total_sq = sum(b.total_sq for b in tallies)
    absorbed = sum(b.absorbed for b in tallies)
    truncated = sum(b.truncated for b in tallies)
    level_total = np.sum([b.level_total for b in tallies], axis=0)
    level_total_sq = np.sum([b.level_total_sq for b in tallies], axis=0)
    level_absorbed = np.sum([b.level_absorbed for b in tallies], axis=0)

    mean, stderr = _mean_and_stderr(total, total_sq, absorbed)
    per_level: Dict[int, float] = {}
    per_level_stderr: Dict[int, float] = {}
    level_counts: Dict[int, int] = {}
    for L in np.flatnonzero(level_absorbed):
        lm, ls = _mean_and_stderr(level_total[L], level_total_sq[L], int(level_absorbed[L]))
        per_level[int(L)] = lm
        per_level_stderr[int(L)] = ls
        level_counts[int(L)] = int(level_absorbed[L])

    rate = truncated / trials
    flagged = rate > settings.MC_TRUNCATION_THRESHOLD
    if flagged:
        logger.warning(
            f"{truncated}/{trials} walks hit max_steps={max_steps} "
            f"(rate {rate:.3g} > {settings.MC_TRUNCATION_THRESHOLD:g})"
        )
    logger.info(
        f"Simulated {trials} walks on {g.params.label} in {n_batches} batches "
        f"({time.perf_counter() - start:.3f}s): mean {mean:.6g} +/- {stderr:.3g}"
    )
    return HittingSummary(
        method=HittingMethod.MONTE_CARLO,
        mean=mean,
        per_level=per_level,
        level_counts=level_counts,
        trials=trials,
        stderr=stderr,
        per_level_stderr=per_level_stderr,
        truncated=truncated,
        flagged=flagged,
    )

"""
Exact expected hitting times.

The first-step equations h_v = 1 + (1/d_v) sum_{u in N(v)} h_u with
h_trap = 0 are solved by dense LU for small graphs, sparse LU for large ones and
fixed-point sweeps beyond that. For the star-seeded family with the trap at the hub
the system collapses to one unknown per level, solved in rationals.
"""

import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from config.settings import get_settings
from core.exceptions import SolverError
from core.logger import get_logger
from model.params import Variant
from walk.types import HittingMethod, HittingSummary, TrapSpec

logger = get_logger(__name__)


def transition_matrix(spec: TrapSpec) -> sparse.csr_matrix:
    """Row-stochastic uniform-neighbour transition matrix."""
    g = spec.graph
    deg = g.degrees.astype(np.float64)
    rows = np.repeat(np.arange(g.n), g.degrees)
    weights = 1.0 / deg[rows]
    return sparse.csr_matrix((weights, g.indices.copy(), g.indptr.copy()), shape=(g.n, g.n))


def _summarize(spec: TrapSpec, h: np.ndarray) -> Dict[str, Dict[int, float]]:
    g = spec.graph
    keep = np.arange(g.n) != spec.trap
    per_level: Dict[int, float] = {}
    counts: Dict[int, int] = {}
    for L in np.unique(g.level[keep]):
        mask = keep & (g.level == L)
        per_level[int(L)] = float(h[mask].mean())
        counts[int(L)] = int(mask.sum())
    return {"per_level": per_level, "counts": counts}


def _sparse_direct(A: sparse.csc_matrix, ones: np.ndarray) -> np.ndarray:
    """Sparse LU with one step of iterative refinement."""
    try:
        lu = sparse_linalg.splu(A)
    except RuntimeError as e:
        raise SolverError("Sparse hitting-time factorization failed", details={"error": str(e)}) from e
    h = lu.solve(ones)
    return h + lu.solve(ones - A @ h)


def _fixed_point(
    Q: sparse.csr_matrix, ones: np.ndarray, tol: float, sweeps: int
) -> Tuple[np.ndarray, int]:
    """
    Jacobi sweeps h <- 1 + Q h.

    Since (I - Q)^{-1} 1 = h, the error is at most max(h) times the
    residual, and the sweeps stop once that bound is below ``tol``.
    """
    h = np.ones(ones.size)
    bound = float("inf")
    for iteration in range(1, sweeps + 1):
        updated = ones + Q @ h
        residual = float(np.max(np.abs(updated - h)))
        h = updated
        bound = residual * float(h.max())
        if bound < tol:
            return h, iteration
    raise SolverError(
        "Fixed-point hitting-time solve did not converge",
        details={"sweeps": sweeps, "error_bound": bound},
    )


def exact_hitting_solve(
    spec: TrapSpec,
    dense_max_vertices: Optional[int] = None,
    tolerance: Optional[float] = None,
    max_sweeps: Optional[int] = None,
    sparse_max_vertices: Optional[int] = None,
) -> HittingSummary:
    """
    Solve for every vertex's expected hitting time.

    Small systems use a dense LU, larger ones a sparse LU; above
    SPARSE_SOLVE_MAX_VERTICES the solver falls back to Jacobi sweeps.

    Args:
        spec: Graph and trap
        dense_max_vertices: Dense LU up to this size (settings default 2000)
        tolerance: Fixed-point error bound
        max_sweeps: Fixed-point sweep limit
        sparse_max_vertices: Sparse LU up to this size

    Returns:
        HittingSummary with per-vertex values

    Raises:
        SolverError: a factorization failed or the fixed-point iteration did not converge
    """
    settings = get_settings()
    dense_max = dense_max_vertices or settings.DENSE_SOLVE_MAX_VERTICES
    sparse_max = sparse_max_vertices or settings.SPARSE_SOLVE_MAX_VERTICES
    tol = tolerance or settings.ITERATIVE_TOLERANCE
    sweeps = max_sweeps or settings.ITERATIVE_MAX_SWEEPS

    g = spec.graph
    others = spec.non_trap()
    P = transition_matrix(spec)
    Q = P[others][:, others].tocsr()
    ones = np.ones(others.size)
    iterations = None

    start = time.perf_counter()
    if g.n <= dense_max:
        A = np.eye(others.size) - Q.toarray()
        try:
            h_sub = scipy.linalg.solve(A, ones)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise SolverError("Dense hitting-time solve failed", details={"error": str(e)}) from e
    elif g.n <= sparse_max:
        h_sub = _sparse_direct((sparse.identity(others.size, format="csc") - Q).tocsc(), ones)
    else:
        h_sub, iterations = _fixed_point(Q, ones, tol, sweeps)
        logger.info(f"Fixed-point solve converged after {iterations} sweeps")

    h = np.zeros(g.n)
    h[others] = h_sub
    agg = _summarize(spec, h)
    logger.debug(f"Hitting times solved for {g.n} vertices in {time.perf_counter() - start:.3f}s")
    return HittingSummary(
        method=HittingMethod.LINEAR_SOLVE,
        mean=float(h_sub.mean()),
        per_level=agg["per_level"],
        level_counts=agg["counts"],
        per_vertex=h,
        iterations=iterations,
    )


def solve_rational(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """Gaussian elimination over the rationals with row pivoting."""
    size = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise SolverError("Singular rational system", details={"column": col})
        a[col], a[pivot] = a[pivot], a[col]
        for r in range(size):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][size] / a[i][i] for i in range(size)]


def level_collapsed_solve(spec: TrapSpec) -> HittingSummary:
    """
    Rational solve with one unknown per level.

    Level L in [1, t] touches only bottom vertices, so h_L = 1 + h_b;
    a bottom vertex has one ancestor per level 0..t, so
    h_b = 1 + (h_1 + ... + h_t) / (t + 1).

    Raises:
        SolverError: graph is not star-seeded or the trap is not the hub
    """
    g = spec.graph
    if g.params.variant is not Variant.BASE or not spec.at_hub:
        raise SolverError(
            "Level-collapsed solve needs the star-seeded family with the trap at the hub",
            details={"variant": g.params.variant.value, "trap": spec.trap},
        )
    m, t = g.params.m, g.params.t
    size = t + 1                     # unknowns h_1..h_t, h_{t+1}
    bottom = size - 1
    matrix = [[Fraction(0)] * size for _ in range(size)]
    rhs = [Fraction(1)] * size
    for i in range(t):
        matrix[i][i] = Fraction(1)
        matrix[i][bottom] = Fraction(-1)
    matrix[bottom][bottom] = Fraction(1)
    for i in range(t):
        matrix[bottom][i] = Fraction(-1, t + 1)
    values = solve_rational(matrix, rhs)

    per_level = {L + 1: values[L] for L in range(size)}
    level_counts = {L: m**L for L in range(1, t + 2)}
    total = sum(level_counts.values())
    mean = sum(per_level[L] * level_counts[L] for L in per_level) / total
    return HittingSummary(
        method=HittingMethod.LEVEL_COLLAPSED,
        mean=float(mean),
        per_level={L: float(v) for L, v in per_level.items()},
        level_counts=level_counts,
        mean_exact=mean,
        per_level_exact=per_level,
    )

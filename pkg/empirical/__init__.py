# Empirical module - measurements on built instances
from empirical.measures import (
    ClusteringResult,
    DegreeHistogram,
    DiameterMode,
    DiameterResult,
    MeasuredReport,
    TriangleCount,
    assortativity_pearson,
    average_local_clustering,
    degree_histogram,
    diameter_bfs,
    edge_degree_sums,
    is_connected,
    measure,
    powerlaw_slope,
    triangle_count,
)

__all__ = [
    "ClusteringResult",
    "DegreeHistogram",
    "DiameterMode",
    "DiameterResult",
    "MeasuredReport",
    "TriangleCount",
    "assortativity_pearson",
    "average_local_clustering",
    "degree_histogram",
    "diameter_bfs",
    "edge_degree_sums",
    "is_connected",
    "measure",
    "powerlaw_slope",
    "triangle_count",
]

# Model module - graph construction and serialization
from model.params import ModelParams, Variant
from model.graph import DegreeClass, GraphInstance
from model.builders import build, build_base, build_deleted, build_wheel, rim_edge_count, vertex_count
from model.reference import build_literal, degree_level_profile
from model.io import ExportFormat, export_edges, import_edges, read_instance, write_instance

__all__ = [
    "ModelParams",
    "Variant",
    "DegreeClass",
    "GraphInstance",
    "build",
    "build_base",
    "build_wheel",
    "build_deleted",
    "rim_edge_count",
    "vertex_count",
    "build_literal",
    "degree_level_profile",
    "ExportFormat",
    "export_edges",
    "import_edges",
    "read_instance",
    "write_instance",
]

"""Winding-aware surface-code decoding."""

from .decode import RiskReport, drg_pm, drg_toy, masd_decode
from .graph import (
    NORMALIZED,
    RAW,
    DefectEdge,
    DefectGraph,
    DefectVertex,
    edge_weight,
    edge_weights,
    winding_difference,
)
from .matching import DP_VERTEX_CAP, Matching, kernel_name, min_weight_perfect_matching
from .surface import (
    RotatedSurfaceCode,
    SurfaceSample,
    WindingModel,
    build_code,
    correction_from_matching,
    defect_graph_for,
    lambda_sweep,
    logical_failure,
    sample_surface_code,
)

__all__ = [
    "DP_VERTEX_CAP",
    "NORMALIZED",
    "RAW",
    "DefectEdge",
    "DefectGraph",
    "DefectVertex",
    "Matching",
    "RiskReport",
    "RotatedSurfaceCode",
    "SurfaceSample",
    "WindingModel",
    "build_code",
    "correction_from_matching",
    "defect_graph_for",
    "drg_pm",
    "drg_toy",
    "edge_weight",
    "edge_weights",
    "kernel_name",
    "lambda_sweep",
    "logical_failure",
    "masd_decode",
    "min_weight_perfect_matching",
    "sample_surface_code",
    "winding_difference",
]

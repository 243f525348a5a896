"""Planar soap bubble clusters: realization from cubic bridgeless planar
graphs, validation, Mobius transforms and pressures."""

from .circlepack import CirclePacking, pack, residuals
from .cluster import (SoapBubbleCluster, ValidationReport, assign_pressures, extract_graph,
                      normalize_cluster, transform_cluster, validate)
from .config import DEFAULT, Tolerances
from .diagram import bisector, radial_power_distance, triple_points
from .formats import dump_cluster, dump_graph, parse_cluster, parse_graph, write_svg
from .geom import INF, Circle, CircularArc, Disk, Line, MobiusTransform
from .graph import PlanarMultigraph, check_cubic_bridgeless, decompose, dual
from .realize import realize_3connected, realize_theta

# ``realize`` itself stays in its submodule so that the module name is not shadowed

__all__ = [
    "DEFAULT", "INF", "Circle", "CircularArc", "CirclePacking", "Disk", "Line", "MobiusTransform",
    "PlanarMultigraph", "SoapBubbleCluster", "Tolerances", "ValidationReport", "assign_pressures",
    "bisector", "check_cubic_bridgeless", "decompose", "dual", "dump_cluster", "dump_graph",
    "extract_graph", "normalize_cluster", "pack", "parse_cluster", "parse_graph",
    "radial_power_distance", "realize_3connected", "realize_theta", "residuals",
    "transform_cluster", "triple_points", "validate", "write_svg",
]

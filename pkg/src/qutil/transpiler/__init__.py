"""Layout, routing, translation and optimization passes."""

from .layout import Layout, dense_layout, dense_subset, is_perfect, trivial_layout, vf2_layout
from .optimize import cancel_cx_pairs, cancel_inverse_pairs, fuse_1q_runs, optimize
from .pipeline import LAYOUT_METHODS, TranspileConfig, TranspileResult, connectivity_ok, transpile
from .sabre import DEFAULT_SABRE, SabreOptions, count_swaps, sabre_layout, sabre_route
from .translate import initialize, translate

__all__ = [
    "Layout", "dense_layout", "dense_subset", "is_perfect", "trivial_layout", "vf2_layout",
    "cancel_cx_pairs", "cancel_inverse_pairs", "fuse_1q_runs", "optimize",
    "LAYOUT_METHODS", "TranspileConfig", "TranspileResult", "connectivity_ok", "transpile",
    "DEFAULT_SABRE", "SabreOptions", "count_swaps", "sabre_layout", "sabre_route",
    "initialize", "translate",
]

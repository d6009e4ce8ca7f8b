"""Kruskal-Katona type shadow minimization on the grid ``[k]^n``."""

from .compression import compress_fixpoint, compress_once, is_compressed, is_down_set, potential, structure_report
from .grid import GridShape, PointSet, RankedFamily, format_point, parse_point
from .order import chain, cmp_shadow, initial_segment, initial_segment_ranked, rank, successor, unrank
from .shadow import ShadowKind, d_plus_shadow, d_shadow, gamma_shadow, shadow
from .verify import VerifyReport, brute_min_shadow, min_d_shadow, min_d_shadow_ranked

__version__ = "0.1.0"

__all__ = [
    "GridShape",
    "PointSet",
    "RankedFamily",
    "ShadowKind",
    "VerifyReport",
    "brute_min_shadow",
    "chain",
    "cmp_shadow",
    "compress_fixpoint",
    "compress_once",
    "d_plus_shadow",
    "d_shadow",
    "format_point",
    "gamma_shadow",
    "initial_segment",
    "initial_segment_ranked",
    "is_compressed",
    "is_down_set",
    "min_d_shadow",
    "min_d_shadow_ranked",
    "parse_point",
    "potential",
    "rank",
    "shadow",
    "structure_report",
    "successor",
    "unrank",
]

"""Primary entrypoints for cantorlab."""

__version__ = "0.1.0"

from .bisection import bisection_locate
from .cantortrie import CylinderComplex, PointedSet, cover_check, isolated_points, cb_kernel
from .cardinality import bct_witness, classify_cardinality, naturals_demo, verify_P_definition
from .config_loader import RunConfig, load_run_config
from .construction import (
    BranchDeletion,
    CylinderDeletion,
    DeletionSchedule,
    cntr_step,
    dense_schedule,
    preserve_run,
    run_construction,
    run_transfinite,
)
from .seqcore import OrdinalIndex, Point, TransfinitePoint
from .suites import run_verify_suites
from .umetric import FormalDistance, distance, distance_transfinite, triangle_case

__all__ = [
    "__version__",
    "Point",
    "TransfinitePoint",
    "OrdinalIndex",
    "FormalDistance",
    "distance",
    "distance_transfinite",
    "triangle_case",
    "CylinderComplex",
    "PointedSet",
    "cover_check",
    "isolated_points",
    "cb_kernel",
    "BranchDeletion",
    "CylinderDeletion",
    "DeletionSchedule",
    "cntr_step",
    "dense_schedule",
    "run_construction",
    "preserve_run",
    "run_transfinite",
    "bisection_locate",
    "bct_witness",
    "verify_P_definition",
    "classify_cardinality",
    "naturals_demo",
    "RunConfig",
    "load_run_config",
    "run_verify_suites",
]

"""Three-objective (risk, return, carbon) portfolio fronts with ev-MOGA."""

from ._core import (
    DataError,
    Front,
    Instance,
    estimate_moments,
    evaluate,
    filter,
    hypervolume,
    ingest,
    load_front,
    load_instance,
    optimize,
    percentile,
    repair,
    report,
    representatives,
    resolve_profile,
)

__all__ = [
    "DataError",
    "Front",
    "Instance",
    "estimate_moments",
    "evaluate",
    "filter",
    "hypervolume",
    "ingest",
    "load_front",
    "load_instance",
    "optimize",
    "percentile",
    "repair",
    "report",
    "representatives",
    "resolve_profile",
]

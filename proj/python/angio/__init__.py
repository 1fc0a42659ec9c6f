"""Lesion severity estimation, segmentation/detection scoring, and agreement statistics."""

from ._angio import (
    InputError,
    UndefinedMetric,
    bland_altman,
    cl_dice,
    detect_peaks,
    distance_transform,
    estimate_severity,
    fitness,
    mann_whitney_u,
    mhd,
    mld_metrics,
    pixel_metrics,
    radius_profile,
    reclassify_ctp,
    run_cli,
    skeletonize,
)

__all__ = [
    "InputError",
    "UndefinedMetric",
    "bland_altman",
    "cl_dice",
    "detect_peaks",
    "distance_transform",
    "estimate_severity",
    "fitness",
    "mann_whitney_u",
    "mhd",
    "mld_metrics",
    "pixel_metrics",
    "radius_profile",
    "reclassify_ctp",
    "run_cli",
    "skeletonize",
]

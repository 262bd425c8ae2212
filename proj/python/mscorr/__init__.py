"""Multispectral image correlation: spectral distance metrics, colour
projections, fixed-point kernels and the adaptive authentication pipeline.

The heavy lifting lives in the C++ core; this package re-exports the
bound operations.
"""

from ._mscorr import (
    MscError,
    adaptability_rank,
    add_reference,
    authenticate,
    cost_profile,
    distance,
    fx_de_rgb,
    fx_isqrt,
    fx_rms,
    gfc,
    list_references,
    load_cube,
    project,
    rms,
    save_cube,
    wrms,
)

__all__ = [
    "MscError",
    "adaptability_rank",
    "add_reference",
    "authenticate",
    "cost_profile",
    "distance",
    "fx_de_rgb",
    "fx_isqrt",
    "fx_rms",
    "gfc",
    "list_references",
    "load_cube",
    "project",
    "rms",
    "save_cube",
    "wrms",
]

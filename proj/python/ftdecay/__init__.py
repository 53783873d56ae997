"""Fourier decay of convex-body indicators.

Thin wrapper over the compiled core: convex bodies, indicator and surface
transforms, spherical L2 average decay with power-law fits, and lattice-point
discrepancy over rotation ensembles.
"""

from ._core import (
    Body,
    BoundaryPatch,
    FitResult,
    FtValue,
    FtdecayError,
    LatticeSample,
    LatticeSeries,
    Rotation,
    ScanPoint,
    ScanSeries,
    check_c32,
    check_secant_property,
    count_points,
    decompose_boundary,
    fit_exponent,
    fit_points,
    ft,
    ft_surface_measure,
    l2_average,
    lattice_fit,
    log_grid,
    make_axis_box,
    make_ball,
    make_ellipsoid,
    make_pball,
    make_polytope_h,
    make_rotation,
    parse_body,
    rotate,
    rotation_2d,
    rotation_from_quaternion,
    rotational_l2,
    run_checks,
    scan,
)

__version__ = "0.1.0"

__all__ = [
    "Body",
    "BoundaryPatch",
    "FitResult",
    "FtValue",
    "FtdecayError",
    "LatticeSample",
    "LatticeSeries",
    "Rotation",
    "ScanPoint",
    "ScanSeries",
    "check_c32",
    "check_secant_property",
    "count_points",
    "decompose_boundary",
    "fit_exponent",
    "fit_points",
    "ft",
    "ft_surface_measure",
    "l2_average",
    "lattice_fit",
    "log_grid",
    "make_axis_box",
    "make_ball",
    "make_ellipsoid",
    "make_pball",
    "make_polytope_h",
    "make_rotation",
    "parse_body",
    "rotate",
    "rotation_2d",
    "rotation_from_quaternion",
    "rotational_l2",
    "run_checks",
    "scan",
]

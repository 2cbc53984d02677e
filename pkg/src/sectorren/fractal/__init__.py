"""Escape-time rendering and numerical experiments for z^2 + c."""
from ._kernels import BACKEND
from .analysis import (
    AreaEstimate,
    PrecisionError,
    SiegelOrbit,
    area_estimate,
    boundary_fraction,
    closest_returns,
    convergent_denominators,
    self_similarity_estimate,
    siegel_orbit,
    siegel_parameter,
    zoom_sequence,
)
from .grid import (
    MAX_PIXELS,
    BudgetError,
    FractalError,
    ImageGrid,
    Window,
    escape_time,
    pixel_coordinates,
    render,
)

__all__ = [
    "BACKEND",
    "MAX_PIXELS",
    "AreaEstimate",
    "BudgetError",
    "FractalError",
    "ImageGrid",
    "PrecisionError",
    "SiegelOrbit",
    "Window",
    "area_estimate",
    "boundary_fraction",
    "closest_returns",
    "convergent_denominators",
    "escape_time",
    "pixel_coordinates",
    "render",
    "self_similarity_estimate",
    "siegel_orbit",
    "siegel_parameter",
    "zoom_sequence",
]

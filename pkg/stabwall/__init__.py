"""stabwall：Picard 秩一曲面与 P³ 上 tilt 稳定性墙的精确计算"""
__version__ = "0.1.0"

from stabwall.core_lattice import ChernSurface, SurfaceData, resolve_surface
from stabwall.errors import ComputationError, InputError, StabWallError
from stabwall.tilt_plane import Wall

__all__ = [
    "ChernSurface",
    "SurfaceData",
    "resolve_surface",
    "Wall",
    "StabWallError",
    "InputError",
    "ComputationError",
]

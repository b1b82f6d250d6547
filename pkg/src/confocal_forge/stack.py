"""Volumetric image container and elementary statistics.

A :class:`VoxelStack` stores a 3D scalar grid together with the physical
size of one voxel along each axis.  Data is kept as float64 regardless of
the bit depth of any file it came from; quantization to detector counts
happens only on output.

Array layout: ``data[z, y, x]`` with x fastest in memory (C order).  This
matches multi-page TIFF files (one page per z slice) and fixes the raster
order used when noise values are drawn one per voxel.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPopulationError


@dataclass(frozen=True)
class Moments3:
    """First three population moments: mean, variance, third central moment."""

    mean: float
    variance: float
    third_central: float

    def __post_init__(self):
        for name in ("mean", "variance", "third_central"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


@dataclass(frozen=True)
class VoxelStack:
    """Immutable 3D intensity grid with per-axis voxel size.

    Parameters
    ----------
    data : array_like
        Intensities, shape ``(nz, ny, nx)``.  Converted to float64 and
        frozen (the array is marked read-only).
    voxel_size : tuple of float
        Physical length of one voxel along (x, y, z), in any consistent
        unit. All components must be strictly positive.
    """

    data: np.ndarray
    voxel_size: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"stack data must be 3D (nz, ny, nx), got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("stack must contain at least one voxel")
        if not np.all(np.isfinite(arr)):
            raise ValueError("stack intensities must all be finite")
        vs = tuple(float(v) for v in self.voxel_size)
        if len(vs) != 3:
            raise ValueError(f"voxel_size needs 3 components, got {len(vs)}")
        if any(not np.isfinite(v) or v <= 0 for v in vs):
            raise ValueError(f"voxel_size components must be positive, got {vs}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "voxel_size", vs)

    @property
    def dims(self) -> tuple[int, int, int]:
        """Voxel counts as (nx, ny, nz)."""
        nz, ny, nx = self.data.shape
        return (nx, ny, nz)

    def with_data(self, data: np.ndarray) -> "VoxelStack":
        """New stack with the same voxel size and different intensities."""
        return VoxelStack(data, self.voxel_size)


def central_moments(values) -> Moments3:
    """Population mean, variance, and third central moment of ``values``.

    Moments are population moments (divide by n, no bias correction);
    this makes scale covariance exact: moments of ``s * v`` are
    ``(s*m1, s**2*m2, s**3*m3)``.

    Raises
    ------
    EmptyPopulationError
        If ``values`` is empty.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise EmptyPopulationError("cannot compute moments of an empty population")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must all be finite")
    m1 = float(v.mean())
    d = v - m1
    d2 = d * d
    m2 = float(d2.mean())
    m3 = float((d2 * d).mean())
    return Moments3(m1, max(m2, 0.0), m3)


def min_max(stack: VoxelStack) -> tuple[float, float]:
    """Exact minimum and maximum intensity of the stack."""
    return float(stack.data.min()), float(stack.data.max())

"""Synthetic ground truths: a torus ring and point sources.

Membership tests use voxel centers with no antialiasing; ground truth is
meant to be high resolution, where the staircase error is well below the
PSF width, and the hard test keeps the generators exactly checkable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfBoundsError
from .stack import VoxelStack

_PLANES = ("xy", "xz", "yz")


@dataclass(frozen=True)
class RingSpec:
    """Torus of major radius R and tube radius r in an axis-aligned plane.

    ``center`` is in voxel coordinates; None centers the ring on the
    grid. Radii are in voxels.  The torus must fit inside the volume
    with at least one empty voxel of margin on every side.
    """

    dims: tuple[int, int, int]
    major_radius: float
    tube_radius: float
    center: tuple[float, float, float] | None = None
    plane: str = "xy"
    intensity: float = 1.0
    voxel_size: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.plane not in _PLANES:
            raise ValueError(f"plane must be one of {_PLANES}, got {self.plane!r}")
        if not (self.major_radius > self.tube_radius > 0):
            raise ValueError(
                f"need major_radius > tube_radius > 0, got R={self.major_radius}, "
                f"r={self.tube_radius}"
            )
        if self.intensity <= 0:
            raise ValueError(f"intensity must be positive, got {self.intensity}")
        if self.center is None:
            object.__setattr__(
                self, "center", tuple((n - 1) / 2.0 for n in self.dims)
            )


def _centered_offsets(dims, center):
    nx, ny, nz = dims
    cx, cy, cz = center
    dx = np.arange(nx, dtype=np.float64) - cx
    dy = np.arange(ny, dtype=np.float64) - cy
    dz = np.arange(nz, dtype=np.float64) - cz
    return dx, dy, dz


def make_ring(spec: RingSpec) -> VoxelStack:
    """Rasterize the torus: intensity inside, zero outside.

    A voxel center p belongs to the torus when
    ``(hypot(p_u, p_v) - R)**2 + p_w**2 <= r**2`` with (u, v) the ring
    plane axes and w the remaining axis, all relative to the center.
    """
    R, r = spec.major_radius, spec.tube_radius
    extent = {"xy": (R + r, R + r, r), "xz": (R + r, r, R + r), "yz": (r, R + r, R + r)}
    for c, n, e in zip(spec.center, spec.dims, extent[spec.plane]):
        if c - e < 1 or c + e > n - 2:
            raise OutOfBoundsError(
                f"ring (center {spec.center}, extent {extent[spec.plane]}) does not "
                f"fit in dims {spec.dims} with 1-voxel margin"
            )
    dx, dy, dz = _centered_offsets(spec.dims, spec.center)
    # broadcast to (nz, ny, nx)
    x = dx[None, None, :]
    y = dy[None, :, None]
    z = dz[:, None, None]
    if spec.plane == "xy":
        in_plane, off_plane = np.hypot(x, y), z
    elif spec.plane == "xz":
        in_plane, off_plane = np.hypot(x, z), y
    else:
        in_plane, off_plane = np.hypot(y, z), x
    inside = (in_plane - R) ** 2 + off_plane**2 <= r * r
    return VoxelStack(np.where(inside, spec.intensity, 0.0), spec.voxel_size)


def make_points(dims, voxel_size, positions, intensity: float = 1.0) -> VoxelStack:
    """Stack with ``intensity`` at each (x, y, z) voxel position, 0 elsewhere."""
    nx, ny, nz = (int(n) for n in dims)
    data = np.zeros((nz, ny, nx))
    for pos in positions:
        x, y, z = (int(p) for p in pos)
        if not (0 <= x < nx and 0 <= y < ny and 0 <= z < nz):
            raise OutOfBoundsError(f"point {tuple(pos)} outside dims {(nx, ny, nz)}")
        data[z, y, x] = intensity
    return VoxelStack(data, voxel_size)

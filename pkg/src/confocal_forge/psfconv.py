"""Anisotropic Gaussian PSF as separable 3D convolution, plus block binning.

The PSF is a 3-component vector of Gaussian standard deviations in
physical units (same unit as the stack's voxel size).  Convolution runs
as three sequential 1D passes (x, then y, then z) with zero padding
outside the volume, so structures should be placed at least one kernel
radius away from every boundary if total intensity matters.

Binning averages each block of ``bx*by*bz`` voxels into one output voxel
(block mean, not sum), so intensity scale is independent of the binning
factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .errors import BinMismatchError, InvalidSigmaError, KernelTooLargeError
from .stack import VoxelStack

DEFAULT_TRUNCATION = 4.0


@dataclass(frozen=True)
class Kernel1D:
    """Normalized symmetric 1D kernel of ``2*radius + 1`` weights."""

    radius: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if self.radius < 0 or w.shape != (2 * self.radius + 1,):
            raise ValueError(f"weights must have length 2*radius+1, got {w.shape}")
        if np.any(w < 0):
            raise ValueError("kernel weights must be non-negative")
        if not np.array_equal(w, w[::-1]):
            raise ValueError("kernel weights must be symmetric about the center")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"kernel weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def gaussian_kernel_1d(sigma_px: float, truncation: float = DEFAULT_TRUNCATION) -> Kernel1D:
    """Sampled Gaussian kernel, truncated at ``truncation * sigma_px``.

    ``radius = ceil(truncation * sigma_px)``; weights are renormalized to
    sum to 1 after truncation so convolution conserves intensity.
    ``sigma_px = 0`` gives the delta kernel ``{1}``.
    """
    if not np.isfinite(sigma_px) or sigma_px < 0:
        raise InvalidSigmaError(f"sigma must be finite and >= 0, got {sigma_px}")
    if not np.isfinite(truncation) or truncation <= 0:
        raise ValueError(f"truncation must be > 0, got {truncation}")
    if sigma_px == 0:
        return Kernel1D(0, np.ones(1))
    radius = int(math.ceil(truncation * sigma_px))
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(offsets**2) / (2.0 * sigma_px**2))
    return Kernel1D(radius, w / w.sum())


def _blur_data(data: np.ndarray, sigmas_px, truncation: float) -> np.ndarray:
    """Sequential 1D Gaussian passes over ``data[z, y, x]``, zero-padded.

    ``sigmas_px`` are per-axis pixel sigmas in (x, y, z) order; axis x is
    the last array axis.  Radius-0 axes are skipped (exact identity).
    """
    out = data
    # (sigma, array axis) pairs in x, y, z pass order
    for sigma, axis in zip(sigmas_px, (2, 1, 0)):
        kernel = gaussian_kernel_1d(float(sigma), truncation)
        if kernel.radius == 0:
            continue
        if kernel.radius >= data.shape[axis]:
            raise KernelTooLargeError(
                f"kernel radius {kernel.radius} >= stack extent {data.shape[axis]} "
                f"along axis {'xyz'[2 - axis]}; ground truth too small for this PSF"
            )
        out = convolve1d(out, kernel.weights, axis=axis, mode="constant", cval=0.0)
    return out


def gaussian_blur(
    stack: VoxelStack, sigma_voxels, truncation: float = DEFAULT_TRUNCATION
) -> VoxelStack:
    """Gaussian blur with sigmas given directly in voxels (sx, sy, sz)."""
    return stack.with_data(_blur_data(stack.data, sigma_voxels, truncation))


def convolve_separable(
    stack: VoxelStack, sigmas, truncation: float = DEFAULT_TRUNCATION
) -> VoxelStack:
    """Convolve the stack with an anisotropic Gaussian PSF.

    ``sigmas`` are (sx, sy, sz) standard deviations in physical units;
    each is divided by the corresponding voxel size to get the pixel
    sigma, so one PSF applies to ground truths of any sampling.
    Output has the same dims and voxel size as the input.
    """
    sigmas = tuple(float(s) for s in sigmas)
    if len(sigmas) != 3:
        raise ValueError(f"sigmas needs 3 components, got {len(sigmas)}")
    sigmas_px = tuple(s / v for s, v in zip(sigmas, stack.voxel_size))
    return stack.with_data(_blur_data(stack.data, sigmas_px, truncation))


def bin_stack(stack: VoxelStack, factors) -> VoxelStack:
    """Downsample by integer block averaging.

    ``factors`` is (bx, by, bz); each must divide the corresponding
    dimension.  Every output voxel is the mean of its source block and
    the output voxel size is the input voxel size times the factor.
    """
    bx, by, bz = (int(b) for b in factors)
    if min(bx, by, bz) < 1:
        raise BinMismatchError(f"bin factors must be >= 1, got {(bx, by, bz)}")
    nx, ny, nz = stack.dims
    for n, b, axis in ((nx, bx, "x"), (ny, by, "y"), (nz, bz, "z")):
        if n % b != 0:
            raise BinMismatchError(f"bin factor {b} does not divide dimension {n} along {axis}")
    data = stack.data.reshape(nz // bz, bz, ny // by, by, nx // bx, bx)
    binned = data.mean(axis=(1, 3, 5))
    vx, vy, vz = stack.voxel_size
    return VoxelStack(binned, (vx * bx, vy * by, vz * bz))

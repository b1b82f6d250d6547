"""Full simulation: convolve, bin, rescale to the target signal mean,
add moment-matched noise, quantize.

Noise is added after convolution and binning, to every voxel alike: the
matched moments describe noise as measured at the detector, which sits
after the optics.  The target signal mean is interpreted as the mean of
raw signal voxels in a real image (noise included), so the scale
subtracts the noise mean:

    scale = (signal_mean - noise.mean) / mean(noiseless over signal mask)

which makes the simulated raw signal voxels match the measured value in
expectation.  The scaling mask comes from segmenting the noiseless
binned stack with the same Otsu machinery the analyzer uses, so
analyze -> simulate is a self-consistent loop.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidTargetError, NoSignalError, ScaleUndefinedError
from .noisemodel import NoiseMoments, fit_noise, sample
from .psfconv import DEFAULT_TRUNCATION, bin_stack, convolve_separable
from .segmentstats import DEFAULT_BLUR_SIGMA, segment
from .stack import VoxelStack

# Fixed default so runs without an explicit seed are still reproducible.
DEFAULT_SEED = 20230
DEFAULT_BIT_DEPTH = 16


@dataclass(frozen=True)
class SimConfig:
    """Complete simulation recipe.

    ``psf`` holds Gaussian sigmas in physical units (same unit as the
    truth's voxel size); ``bin_factors`` are voxels per output voxel
    along (x, y, z); ``signal_mean`` is the target mean of raw signal
    voxels in detector counts and must exceed the noise mean.
    """

    psf: tuple[float, float, float]
    bin_factors: tuple[int, int, int]
    noise: NoiseMoments
    signal_mean: float
    seed: int = DEFAULT_SEED
    bit_depth: int = DEFAULT_BIT_DEPTH
    blur_sigma_voxels: tuple[float, float, float] = DEFAULT_BLUR_SIGMA
    truncation: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "psf", tuple(float(s) for s in self.psf))
        object.__setattr__(self, "bin_factors", tuple(int(b) for b in self.bin_factors))
        object.__setattr__(
            self, "blur_sigma_voxels", tuple(float(s) for s in self.blur_sigma_voxels)
        )
        if self.bit_depth not in (8, 16):
            raise ValueError(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        if not self.signal_mean > self.noise.mean:
            raise ValueError(
                f"signal_mean {self.signal_mean} must exceed noise mean {self.noise.mean}"
            )


@dataclass(frozen=True)
class SimOutput:
    """Simulation result plus diagnostics.

    ``image`` is the quantized stack at confocal resolution; ``noiseless``
    the scaled pre-noise stack; ``scale`` the factor applied to the
    binned truth; ``mask``/``threshold`` the segmentation used for
    scaling.
    """

    image: VoxelStack
    noiseless: VoxelStack
    scale: float
    mask: np.ndarray = field(repr=False)
    threshold: float


def compute_scale(
    noiseless: VoxelStack, mask: np.ndarray, target_signal_mean: float, noise_mean: float
) -> float:
    """Scale factor making masked voxels hit the target mean after noise.

    Multiplying the noiseless stack by the returned value and adding
    noise with mean ``noise_mean`` gives expected mean
    ``target_signal_mean`` over the mask.

    Raises
    ------
    ScaleUndefinedError
        If the noiseless mean over the mask is zero.
    InvalidTargetError
        If the target does not exceed the noise mean (scale <= 0).
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ScaleUndefinedError("scaling mask selects no voxel")
    signal_mean = float(noiseless.data[mask].mean())
    if signal_mean <= 0:
        raise ScaleUndefinedError(f"noiseless signal mean is {signal_mean:g}")
    scale = (target_signal_mean - noise_mean) / signal_mean
    if scale <= 0:
        raise InvalidTargetError(
            f"target {target_signal_mean} not above noise floor {noise_mean}"
        )
    return scale


def quantize(stack: VoxelStack, bit_depth: int) -> VoxelStack:
    """Round half away from zero, then clamp to [0, 2**bit_depth - 1]."""
    if bit_depth not in (8, 16):
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    data = stack.data
    rounded = np.trunc(data + np.copysign(0.5, data))
    return stack.with_data(np.clip(rounded, 0.0, float(2**bit_depth - 1)))


def simulate(truth: VoxelStack, config: SimConfig, segmentation=None) -> SimOutput:
    """Run the whole pipeline on a ground-truth stack.

    Steps: PSF convolution at truth resolution, block binning, Otsu
    segmentation of the noiseless result (or the externally supplied
    ``segmentation=(mask, threshold)`` pair), rescaling, one noise draw
    per voxel in raster order (x fastest) from a single stream seeded by
    ``config.seed``, then quantization.

    Equal (truth, config) give bitwise-equal output.
    """
    if truth.data.min() < 0:
        raise ValueError("ground truth must be non-negative")
    if truth.data.max() == 0:
        raise NoSignalError("ground truth has no positive voxel")

    convolved = convolve_separable(truth, config.psf, config.truncation)
    binned = bin_stack(convolved, config.bin_factors)

    if segmentation is None:
        mask, threshold = segment(binned, config.blur_sigma_voxels)
    else:
        mask, threshold = segmentation
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != binned.data.shape:
            raise ValueError(
                f"segmentation mask shape {mask.shape} does not match "
                f"binned dims {binned.data.shape}"
            )
        threshold = float(threshold)

    scale = compute_scale(binned, mask, config.signal_mean, config.noise.mean)
    noiseless = binned.with_data(scale * binned.data)

    model = fit_noise(config.noise)
    # C-order flat draw = raster order with x fastest
    noise = sample(model, config.seed, noiseless.data.size)
    noisy = noiseless.data + noise.reshape(noiseless.data.shape)
    image = quantize(noiseless.with_data(noisy), config.bit_depth)

    return SimOutput(
        image=image, noiseless=noiseless, scale=scale, mask=mask, threshold=threshold
    )

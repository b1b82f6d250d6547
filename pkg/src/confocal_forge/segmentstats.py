"""Noise/signal discrimination on a sample stack and per-population stats.

The minimal segmentation is Gaussian blurring followed by Otsu
thresholding of the blurred values.  Statistics, however, are always
computed on the raw (unblurred) intensities: blurring suppresses salt
noise so the threshold is stable, but would bias the noise moments if
the moments were taken from the blurred image.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHistogramError, SegmentationError
from .psfconv import DEFAULT_TRUNCATION, gaussian_blur
from .stack import Moments3, VoxelStack, central_moments

DEFAULT_BINS = 256
DEFAULT_BLUR_SIGMA = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class SampleStats:
    """Analyzer output: noise moments, signal mean, and how they were split.

    ``n_noise + n_signal`` equals the total voxel count of the analyzed
    stack; ``blur_sigma`` is the per-axis blur (in voxels) that produced
    the mask, (0, 0, 0) for an externally supplied mask.
    """

    noise: Moments3
    signal_mean: float
    threshold: float
    n_noise: int
    n_signal: int
    blur_sigma: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not np.isfinite(self.signal_mean) or not np.isfinite(self.threshold):
            raise ValueError("signal_mean and threshold must be finite")
        if self.n_noise < 1 or self.n_signal < 1:
            raise ValueError("both populations must be non-empty")
        object.__setattr__(self, "blur_sigma", tuple(float(s) for s in self.blur_sigma))


def otsu_threshold(values, n_bins: int = DEFAULT_BINS) -> float:
    """Histogram-based Otsu threshold over equal-width bins.

    Values are histogrammed into ``n_bins`` bins spanning [min, max];
    class weights and means are taken from the histogram (bin centers),
    which reproduces the classical algorithm on 8-bit data and
    generalizes to float stacks.  The returned threshold is the interior
    bin edge maximizing the between-class variance w0*w1*(mu0 - mu1)**2,
    with ties broken toward the smallest edge.

    Raises
    ------
    DegenerateHistogramError
        If all values are identical (constant image).
    """
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size < 2:
        raise ValueError("need at least 2 values to threshold")
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        raise DegenerateHistogramError(f"all values equal {lo}; nothing to segment")
    counts, edges = np.histogram(v, bins=n_bins, range=(lo, hi))
    frac = counts / counts.sum()
    centers = 0.5 * (edges[:-1] + edges[1:])

    # Split after bin j-1 corresponds to threshold edges[j], j = 1..n_bins-1.
    w0 = np.cumsum(frac)[:-1]
    w1 = 1.0 - w0
    s0 = np.cumsum(frac * centers)[:-1]
    s1 = float(np.sum(frac * centers)) - s0
    valid = (w0 > 0) & (w1 > 0)
    bcv = np.zeros(n_bins - 1)
    np.divide(s0, w0, out=s0, where=valid)
    np.divide(s1, w1, out=s1, where=valid)
    bcv[valid] = (w0 * w1 * (s0 - s1) ** 2)[valid]
    return float(edges[int(np.argmax(bcv)) + 1])


def segment(
    stack: VoxelStack,
    blur_sigma_voxels=DEFAULT_BLUR_SIGMA,
    n_bins: int = DEFAULT_BINS,
    truncation: float = DEFAULT_TRUNCATION,
) -> tuple[np.ndarray, float]:
    """Blur, threshold, and return (boolean mask, threshold).

    The mask is True where the *blurred* value exceeds the Otsu
    threshold of the blurred image; blur sigmas are in voxels.
    """
    blurred = gaussian_blur(stack, blur_sigma_voxels, truncation)
    threshold = otsu_threshold(blurred.data, n_bins)
    mask = blurred.data > threshold
    if mask.all() or not mask.any():
        raise SegmentationError("threshold produced a single-class mask")
    mask.setflags(write=False)
    return mask, threshold


def extract_stats(
    stack: VoxelStack,
    mask: np.ndarray,
    threshold: float = 0.0,
    blur_sigma=(0.0, 0.0, 0.0),
) -> SampleStats:
    """Per-population statistics of the raw intensities under a mask.

    Noise moments come from voxels where ``mask`` is False, the signal
    mean from voxels where it is True; both on the original (unblurred)
    values.  ``threshold`` and ``blur_sigma`` are recorded as metadata
    for provenance when the mask came from :func:`segment`.

    Raises
    ------
    EmptyPopulationError
        If either population is empty.
    SegmentationError
        If the signal mean does not exceed the noise mean, which flags a
        thresholding failure that must not feed a simulation.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != stack.data.shape:
        raise ValueError(f"mask shape {mask.shape} != stack shape {stack.data.shape}")
    noise = central_moments(stack.data[~mask])
    signal = central_moments(stack.data[mask])
    if signal.mean <= noise.mean:
        raise SegmentationError(
            f"signal mean {signal.mean:g} <= noise mean {noise.mean:g}; "
            "segmentation rejected"
        )
    n_signal = int(mask.sum())
    return SampleStats(
        noise=noise,
        signal_mean=signal.mean,
        threshold=float(threshold),
        n_noise=mask.size - n_signal,
        n_signal=n_signal,
        blur_sigma=tuple(float(s) for s in blur_sigma),
    )


def analyze_stack(
    stack: VoxelStack,
    blur_sigma_voxels=DEFAULT_BLUR_SIGMA,
    n_bins: int = DEFAULT_BINS,
    truncation: float = DEFAULT_TRUNCATION,
) -> SampleStats:
    """Segment a sample stack and extract its noise/signal statistics."""
    mask, threshold = segment(stack, blur_sigma_voxels, n_bins, truncation)
    return extract_stats(stack, mask, threshold, blur_sigma_voxels)

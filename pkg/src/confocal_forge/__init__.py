"""confocal-forge: synthetic confocal stacks from a known ground truth.

Simulation is Gaussian-PSF convolution of a high-resolution truth,
block binning to the confocal voxel grid, rescaling to a target signal
mean, and injection of noise matched to the first three moments of a
measured background (offset gamma, Gaussian when skew is zero).  The
companion analyzer extracts those moments from a real sample image by
Gaussian blurring plus Otsu thresholding.
"""

from .errors import (
    BinMismatchError,
    ConfocalForgeError,
    CorruptStackError,
    DegenerateHistogramError,
    DegenerateNoiseError,
    EmptyPopulationError,
    InvalidSigmaError,
    InvalidTargetError,
    KernelTooLargeError,
    NegativeSkewError,
    NoSignalError,
    OutOfBoundsError,
    ScaleUndefinedError,
    SegmentationError,
    UnsupportedFormatError,
)
from .io import read_stack, read_stats, write_stack, write_stats
from .noisemodel import (
    GammaNoise,
    GaussianNoise,
    NoiseModel,
    NoiseMoments,
    fit_noise,
    model_moments,
    sample,
)
from .pipeline import (
    DEFAULT_SEED,
    SimConfig,
    SimOutput,
    compute_scale,
    quantize,
    simulate,
)
from .psfconv import (
    Kernel1D,
    bin_stack,
    convolve_separable,
    gaussian_blur,
    gaussian_kernel_1d,
)
from .segmentstats import (
    SampleStats,
    analyze_stack,
    extract_stats,
    otsu_threshold,
    segment,
)
from .stack import Moments3, VoxelStack, central_moments, min_max
from .synth import RingSpec, make_points, make_ring

__version__ = "0.1.0"

__all__ = [
    "BinMismatchError",
    "ConfocalForgeError",
    "CorruptStackError",
    "DegenerateHistogramError",
    "DegenerateNoiseError",
    "EmptyPopulationError",
    "GammaNoise",
    "GaussianNoise",
    "InvalidSigmaError",
    "InvalidTargetError",
    "Kernel1D",
    "KernelTooLargeError",
    "Moments3",
    "NegativeSkewError",
    "NoSignalError",
    "NoiseModel",
    "NoiseMoments",
    "OutOfBoundsError",
    "RingSpec",
    "SampleStats",
    "ScaleUndefinedError",
    "SegmentationError",
    "SimConfig",
    "SimOutput",
    "UnsupportedFormatError",
    "VoxelStack",
    "analyze_stack",
    "bin_stack",
    "central_moments",
    "compute_scale",
    "convolve_separable",
    "extract_stats",
    "fit_noise",
    "gaussian_blur",
    "gaussian_kernel_1d",
    "make_points",
    "make_ring",
    "min_max",
    "model_moments",
    "otsu_threshold",
    "quantize",
    "read_stack",
    "read_stats",
    "sample",
    "segment",
    "simulate",
    "write_stack",
    "write_stats",
    "DEFAULT_SEED",
]

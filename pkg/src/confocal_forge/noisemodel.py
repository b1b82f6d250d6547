"""Noise sampler fitted to the first three moments of measured background.

Right-skewed noise (positive third central moment) is matched by an
offset gamma distribution: three free parameters (shape k, scale theta,
location offset c) for three moments,

    k*theta + c = mean,   k*theta**2 = variance,   2*k*theta**3 = third_central.

Zero skew falls back to a Gaussian; negative skew is rejected rather
than mirrored, since detector noise is right-skewed and a mirrored fit
would silently misrepresent it.

Reproducibility contract: sampling uses numpy's PCG64 bit generator via
``numpy.random.default_rng(seed)`` with a single stream per call.  Gamma
variates come from ``Generator.standard_gamma`` (exact rejection
sampling, valid for any shape k > 0).  Identical (model, seed, n) yields
bitwise-identical output for a fixed numpy version on any platform.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateNoiseError, NegativeSkewError
from .stack import Moments3

# NoiseMoments are plain Moments3 interpreted as background statistics.
NoiseMoments = Moments3


@dataclass(frozen=True)
class GammaNoise:
    """Offset gamma sampler: ``offset + Gamma(shape, scale)``."""

    shape: float
    scale: float
    offset: float

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError(f"gamma needs shape > 0 and scale > 0, got {self}")


@dataclass(frozen=True)
class GaussianNoise:
    """Gaussian sampler; variance 0 degenerates to a constant."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


NoiseModel = Union[GammaNoise, GaussianNoise]


def fit_noise(moments: NoiseMoments) -> NoiseModel:
    """Fit a sampler realizing the given noise moments exactly.

    Zero third central moment selects the Gaussian branch (exact-zero
    test, no epsilon band).  Otherwise the offset gamma is solved in
    closed form: theta = m3/(2*var), k = var/theta**2, c = mean - k*theta.

    Raises
    ------
    NegativeSkewError
        If ``third_central < 0``.
    DegenerateNoiseError
        If ``variance < 0``, or ``variance == 0`` with nonzero skew
        (no gamma distribution has zero variance).
    """
    if moments.third_central < 0:
        raise NegativeSkewError(
            f"third central moment must be >= 0, got {moments.third_central}"
        )
    if moments.third_central == 0:
        # Includes the fully degenerate (variance 0) constant-noise case.
        return GaussianNoise(moments.mean, moments.variance)
    if moments.variance <= 0:
        raise DegenerateNoiseError(
            f"variance must be > 0 to match skewed noise, got {moments.variance}"
        )
    theta = moments.third_central / (2.0 * moments.variance)
    k = moments.variance / theta**2
    c = moments.mean - k * theta
    return GammaNoise(shape=k, scale=theta, offset=c)


def model_moments(model: NoiseModel) -> NoiseMoments:
    """Analytic first three moments of a fitted model."""
    if isinstance(model, GammaNoise):
        k, th, c = model.shape, model.scale, model.offset
        return Moments3(k * th + c, k * th**2, 2.0 * k * th**3)
    return Moments3(model.mean, model.variance, 0.0)


def sample(model: NoiseModel, seed: int, n: int) -> np.ndarray:
    """Draw ``n`` independent values from a deterministic seeded stream.

    Parallel sampling of disjoint sub-ranges is NOT supported by
    splitting one seed; use distinct seeds per range instead.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not (0 <= int(seed) < 2**64):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    rng = np.random.default_rng(int(seed))
    if isinstance(model, GammaNoise):
        return model.offset + model.scale * rng.standard_gamma(model.shape, size=n)
    if model.variance == 0:
        return np.full(n, model.mean, dtype=np.float64)
    return rng.normal(model.mean, np.sqrt(model.variance), size=n)

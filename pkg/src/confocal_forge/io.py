"""Stack file I/O (multi-page grayscale TIFF) and stats serialization.

TIFF contract: 8- or 16-bit unsigned grayscale, one page per z slice in
ascending z, written uncompressed with a fixed tag layout so that equal
stacks produce byte-identical files (required for reproducible runs).
Voxel size is stored both as X/YResolution tags (pixels per unit, unit
left dimensionless) and as a JSON ImageDescription carrying the exact
(vx, vy, vz), which round-trips at full precision.

Stats files are UTF-8 JSON documents (conventionally ``*.stats.json``)
with an explicit ``format_version``; unknown keys are rejected by name
so that a file from a newer release fails loudly instead of being
silently misread.
"""
from __future__ import annotations

import json
import warnings
from fractions import Fraction
from os import PathLike

import numpy as np
import tifffile

from .errors import CorruptStackError, UnsupportedFormatError
from .pipeline import quantize
from .segmentstats import SampleStats
from .stack import Moments3, VoxelStack

STATS_FORMAT_VERSION = 1

_TOP_KEYS = ("format_version", "noise", "signal_mean", "threshold",
             "n_noise", "n_signal", "blur_sigma")
_NOISE_KEYS = ("mean", "variance", "third_central")


def _voxel_size_from_tags(page) -> tuple[float, float, float] | None:
    """Best-effort voxel size from TIFF metadata; None if absent."""
    desc = page.description or ""
    try:
        meta = json.loads(desc)
        vs = meta.get("voxel_size")
        if isinstance(vs, (list, tuple)) and len(vs) == 3:
            return tuple(float(v) for v in vs)
    except (json.JSONDecodeError, TypeError, ValueError):
        pass
    vx = vy = None
    if "XResolution" in page.tags and "YResolution" in page.tags:
        xnum, xden = page.tags["XResolution"].value
        ynum, yden = page.tags["YResolution"].value
        if xnum > 0 and ynum > 0:
            vx, vy = xden / xnum, yden / ynum
    if vx is None:
        return None
    # ImageJ-style description carries the z step as "spacing=..."
    vz = 1.0
    for line in desc.splitlines():
        if line.startswith("spacing="):
            try:
                vz = abs(float(line.split("=", 1)[1]))
            except ValueError:
                pass
    return (vx, vy, vz)


def read_stack(path: str | PathLike) -> VoxelStack:
    """Read a multi-page grayscale TIFF into a stack (no rescaling).

    Raises
    ------
    UnsupportedFormatError
        For RGB/multi-sample, float, or non-8/16-bit files, and for
        files tifffile cannot parse.
    CorruptStackError
        If pages disagree in shape or dtype.
    """
    try:
        tf = tifffile.TiffFile(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise UnsupportedFormatError(f"{path}: not a readable TIFF ({exc})") from exc
    with tf:
        pages = []
        first = None
        for page in tf.pages:
            if page.samplesperpixel != 1:
                raise UnsupportedFormatError(
                    f"{path}: {page.samplesperpixel} samples per pixel; "
                    "only single-channel grayscale is supported"
                )
            if int(page.sampleformat) != 1 or page.bitspersample not in (8, 16):
                raise UnsupportedFormatError(
                    f"{path}: sample format {page.sampleformat!r} at "
                    f"{page.bitspersample} bits; need 8- or 16-bit unsigned"
                )
            if first is None:
                first = page
            elif page.shape != first.shape or page.dtype != first.dtype:
                raise CorruptStackError(
                    f"{path}: page shape {page.shape} ({page.dtype}) differs "
                    f"from first page {first.shape} ({first.dtype})"
                )
            try:
                pages.append(page.asarray())
            except Exception as exc:
                raise UnsupportedFormatError(f"{path}: cannot decode page ({exc})") from exc
        if not pages:
            raise CorruptStackError(f"{path}: contains no image pages")
        voxel_size = _voxel_size_from_tags(first)
        if voxel_size is None:
            warnings.warn(
                f"{path}: no resolution metadata; assuming voxel size (1, 1, 1)",
                stacklevel=2,
            )
            voxel_size = (1.0, 1.0, 1.0)
        return VoxelStack(np.stack(pages), voxel_size)


def _resolution_rational(voxel: float) -> tuple[int, int]:
    """Pixels-per-unit (1/voxel) as a TIFF rational."""
    frac = Fraction(1, 1) / Fraction(voxel).limit_denominator(2**31 - 1)
    frac = frac.limit_denominator(2**31 - 1)
    return (frac.numerator, frac.denominator)


def write_stack(stack: VoxelStack, path: str | PathLike, bit_depth: int = 16) -> None:
    """Write a stack as uncompressed multi-page grayscale TIFF.

    Values are put through the pipeline's quantization rule (round half
    away from zero, clamp to the bit depth range), which is the identity
    for already-quantized stacks.  Equal inputs produce byte-identical
    files.
    """
    if bit_depth not in (8, 16):
        raise ValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    data = quantize(stack, bit_depth).data
    arr = data.astype(np.uint8 if bit_depth == 8 else np.uint16)
    vx, vy, vz = stack.voxel_size
    tifffile.imwrite(
        path,
        arr,
        photometric="minisblack",
        compression=None,
        resolution=(_resolution_rational(vx), _resolution_rational(vy)),
        resolutionunit="NONE",
        description=json.dumps({"voxel_size": [vx, vy, vz]}),
        software="confocal-forge",
        metadata=None,
    )


def write_stats(stats: SampleStats, path: str | PathLike) -> None:
    """Serialize analyzer output as JSON at full decimal precision."""
    doc = {
        "format_version": STATS_FORMAT_VERSION,
        "noise": {
            "mean": stats.noise.mean,
            "variance": stats.noise.variance,
            "third_central": stats.noise.third_central,
        },
        "signal_mean": stats.signal_mean,
        "threshold": stats.threshold,
        "n_noise": stats.n_noise,
        "n_signal": stats.n_signal,
        "blur_sigma": list(stats.blur_sigma),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_stats(path: str | PathLike) -> SampleStats:
    """Parse a stats file, rejecting unknown keys and foreign versions."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UnsupportedFormatError(f"{path}: stats document must be a JSON object")
    version = doc.get("format_version")
    if version != STATS_FORMAT_VERSION:
        raise UnsupportedFormatError(
            f"{path}: format_version {version!r} not supported "
            f"(this release reads version {STATS_FORMAT_VERSION})"
        )
    for key in doc:
        if key not in _TOP_KEYS:
            raise UnsupportedFormatError(f"{path}: unknown key {key!r}")
    for key in _TOP_KEYS:
        if key not in doc:
            raise UnsupportedFormatError(f"{path}: missing key {key!r}")
    noise = doc["noise"]
    if not isinstance(noise, dict):
        raise UnsupportedFormatError(f"{path}: 'noise' must be an object")
    for key in noise:
        if key not in _NOISE_KEYS:
            raise UnsupportedFormatError(f"{path}: unknown key 'noise.{key}'")
    for key in _NOISE_KEYS:
        if key not in noise:
            raise UnsupportedFormatError(f"{path}: missing key 'noise.{key}'")
    blur = doc["blur_sigma"]
    if not isinstance(blur, list) or len(blur) != 3:
        raise UnsupportedFormatError(f"{path}: 'blur_sigma' must be a list of 3 numbers")
    return SampleStats(
        noise=Moments3(noise["mean"], noise["variance"], noise["third_central"]),
        signal_mean=float(doc["signal_mean"]),
        threshold=float(doc["threshold"]),
        n_noise=int(doc["n_noise"]),
        n_signal=int(doc["n_signal"]),
        blur_sigma=tuple(float(b) for b in blur),
    )

"""Independent brute-force oracles and small test utilities.

These deliberately avoid the library's fast paths: the convolution
oracle loops over output voxels against the full tensor-product kernel,
and the Otsu oracle re-evaluates every candidate edge from scratch.
"""
import numpy as np

from confocal_forge import VoxelStack, gaussian_kernel_1d


def brute_force_convolve(data, sigmas_px, truncation=4.0):
    """Direct 3D convolution with the tensor-product Gaussian kernel.

    Zero padding outside the volume; no separability shortcut.
    ``sigmas_px`` in (x, y, z) order for data indexed [z, y, x].
    """
    kx = gaussian_kernel_1d(sigmas_px[0], truncation)
    ky = gaussian_kernel_1d(sigmas_px[1], truncation)
    kz = gaussian_kernel_1d(sigmas_px[2], truncation)
    kernel = (
        kz.weights[:, None, None] * ky.weights[None, :, None] * kx.weights[None, None, :]
    )
    rz, ry, rx = kz.radius, ky.radius, kx.radius
    padded = np.pad(data, ((rz, rz), (ry, ry), (rx, rx)))
    out = np.empty_like(data, dtype=np.float64)
    nz, ny, nx = data.shape
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                block = padded[z : z + 2 * rz + 1, y : y + 2 * ry + 1, x : x + 2 * rx + 1]
                out[z, y, x] = np.sum(block * kernel)
    return out


def otsu_oracle(values, n_bins=256):
    """Exhaustive maximization of between-class variance over bin edges.

    Shares only the histogram definition (equal-width bins over
    [min, max], class stats from bin centers); every candidate edge is
    evaluated independently with from-scratch partial sums, ties broken
    toward the smallest edge.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    counts, edges = np.histogram(v, bins=n_bins, range=(v.min(), v.max()))
    frac = counts / counts.sum()
    centers = 0.5 * (edges[:-1] + edges[1:])
    best_bcv = -1.0
    best_edge = None
    for j in range(1, n_bins):
        w0 = 0.0
        s0 = 0.0
        for i in range(j):
            w0 += frac[i]
            s0 += frac[i] * centers[i]
        w1 = 0.0
        s1 = 0.0
        for i in range(j, n_bins):
            w1 += frac[i]
            s1 += frac[i] * centers[i]
        if w0 <= 0 or w1 <= 0:
            continue
        bcv = w0 * w1 * (s0 / w0 - s1 / w1) ** 2
        if bcv > best_bcv:
            best_bcv = bcv
            best_edge = edges[j]
    return float(best_edge)


def random_stack(rng, shape=(6, 5, 4), voxel_size=(1.0, 1.0, 1.0), low=0.0, high=100.0):
    """Random float stack for property tests; shape is (nz, ny, nx)."""
    return VoxelStack(rng.uniform(low, high, size=shape), voxel_size)


def random_quantized_stack(rng, bit_depth):
    """Random integer-valued stack spanning the full bit-depth range."""
    shape = tuple(int(n) for n in rng.integers(1, 9, size=3))
    data = rng.integers(0, 2**bit_depth, size=shape).astype(np.float64)
    voxel_size = tuple(float(v) for v in rng.uniform(0.05, 10.0, size=3))
    return VoxelStack(data, voxel_size)

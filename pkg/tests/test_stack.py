import numpy as np
import pytest

from confocal_forge import (
    EmptyPopulationError,
    Moments3,
    VoxelStack,
    central_moments,
    make_ring,
    min_max,
    RingSpec,
)
from helpers import random_stack


class TestCentralMoments:
    def test_hand_example(self):
        m = central_moments([1.0, 2.0, 3.0])
        assert m.mean == pytest.approx(2.0, abs=1e-15)
        assert m.variance == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert m.third_central == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("c", [0.0, -3.5, 42.0])
    def test_constant_population(self, c):
        m = central_moments(np.full(17, c))
        assert (m.mean, m.variance, m.third_central) == (c, 0.0, 0.0)

    def test_gamma_monte_carlo(self):
        # gamma(k=4, theta=1): moments (k*theta, k*theta**2, 2*k*theta**3)
        rng = np.random.default_rng(101)
        draws = rng.standard_gamma(4.0, size=10**6)
        m = central_moments(draws)
        assert m.mean == pytest.approx(4.0, rel=0.02)
        assert m.variance == pytest.approx(4.0, rel=0.02)
        assert m.third_central == pytest.approx(8.0, rel=0.02)

    def test_empty_raises(self):
        with pytest.raises(EmptyPopulationError):
            central_moments([])

    def test_non_finite_raises(self):
        with pytest.raises(ValueError):
            central_moments([1.0, np.nan])

    def test_translation_covariance(self):
        rng = np.random.default_rng(7)
        v = rng.uniform(-5, 5, size=500)
        base = central_moments(v)
        for a in (1.0, -12.5, 1e4):
            shifted = central_moments(v + a)
            assert shifted.mean == pytest.approx(base.mean + a, rel=1e-9)
            assert shifted.variance == pytest.approx(base.variance, rel=1e-6)
            assert shifted.third_central == pytest.approx(base.third_central, abs=1e-6)

    def test_scale_covariance(self):
        rng = np.random.default_rng(8)
        v = rng.uniform(0, 10, size=500)
        base = central_moments(v)
        for s in (2.0, 0.25, 7.0):
            scaled = central_moments(s * v)
            assert scaled.mean == pytest.approx(s * base.mean, rel=1e-12)
            assert scaled.variance == pytest.approx(s**2 * base.variance, rel=1e-12)
            assert scaled.third_central == pytest.approx(s**3 * base.third_central, rel=1e-9)


class TestMinMax:
    def test_constant_stack(self):
        stack = VoxelStack(np.full((2, 3, 4), 5.5))
        assert min_max(stack) == (5.5, 5.5)

    def test_enumerated(self):
        stack = VoxelStack(np.arange(8.0).reshape(2, 2, 2))
        assert min_max(stack) == (0.0, 7.0)

    def test_ring_truth(self):
        ring = make_ring(RingSpec(dims=(32, 32, 32), major_radius=9, tube_radius=2))
        assert min_max(ring) == (0.0, 1.0)

    def test_min_mean_max_ordering(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            stack = random_stack(rng)
            lo, hi = min_max(stack)
            assert lo <= stack.data.mean() <= hi


class TestVoxelStack:
    def test_requires_3d(self):
        with pytest.raises(ValueError):
            VoxelStack(np.zeros((4, 4)))

    def test_rejects_non_finite(self):
        data = np.zeros((2, 2, 2))
        data[0, 0, 0] = np.inf
        with pytest.raises(ValueError):
            VoxelStack(data)

    @pytest.mark.parametrize("vs", [(0, 1, 1), (1, -2, 1), (1, 1, np.nan)])
    def test_rejects_bad_voxel_size(self, vs):
        with pytest.raises(ValueError):
            VoxelStack(np.zeros((2, 2, 2)), vs)

    def test_data_is_read_only(self):
        stack = VoxelStack(np.zeros((2, 2, 2)))
        with pytest.raises(ValueError):
            stack.data[0, 0, 0] = 1.0

    def test_dims_order(self):
        stack = VoxelStack(np.zeros((2, 3, 4)))  # nz=2, ny=3, nx=4
        assert stack.dims == (4, 3, 2)

    def test_converts_to_float(self):
        stack = VoxelStack(np.arange(8, dtype=np.uint8).reshape(2, 2, 2))
        assert stack.data.dtype == np.float64

    def test_with_data_keeps_voxel_size(self):
        stack = VoxelStack(np.zeros((2, 2, 2)), (0.5, 0.5, 2.0))
        other = stack.with_data(np.ones((2, 2, 2)))
        assert other.voxel_size == (0.5, 0.5, 2.0)


class TestMoments3:
    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            Moments3(0.0, -1.0, 0.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Moments3(np.inf, 1.0, 0.0)

import json

import numpy as np
import pytest
import tifffile

from confocal_forge import (
    CorruptStackError,
    Moments3,
    SampleStats,
    UnsupportedFormatError,
    VoxelStack,
    read_stack,
    read_stats,
    write_stack,
    write_stats,
)
from helpers import random_quantized_stack


class TestStackRoundTrip:
    @pytest.mark.parametrize("bit_depth", [8, 16])
    def test_exact_round_trip(self, tmp_path, bit_depth):
        rng = np.random.default_rng(bit_depth)
        stack = random_quantized_stack(rng, bit_depth)
        path = tmp_path / "stack.tif"
        write_stack(stack, path, bit_depth)
        back = read_stack(path)
        assert back.dims == stack.dims
        np.testing.assert_array_equal(back.data, stack.data)
        assert back.voxel_size == stack.voxel_size

    def test_byte_determinism(self, tmp_path):
        stack = VoxelStack(np.arange(24.0).reshape(2, 3, 4), (0.2, 0.2, 1.5))
        p1, p2 = tmp_path / "a.tif", tmp_path / "b.tif"
        write_stack(stack, p1)
        write_stack(stack, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_three_pages_of_1x1(self, tmp_path):
        stack = VoxelStack(np.array([1.0, 2.0, 3.0]).reshape(3, 1, 1))
        path = tmp_path / "thin.tif"
        write_stack(stack, path)
        with tifffile.TiffFile(path) as tf:
            assert len(tf.pages) == 3
            assert tf.pages[0].shape == (1, 1)
        back = read_stack(path)
        np.testing.assert_array_equal(back.data, stack.data)

    def test_values_preserved_without_rescaling(self, tmp_path):
        stack = VoxelStack(np.array([[[0.0, 255.0]]]))
        path = tmp_path / "binary.tif"
        write_stack(stack, path, bit_depth=8)
        back = read_stack(path)
        assert sorted(np.unique(back.data)) == [0.0, 255.0]

    def test_quantize_on_write(self, tmp_path):
        stack = VoxelStack(np.array([[[-4.2, 2.5, 300.0]]]))
        path = tmp_path / "q.tif"
        write_stack(stack, path, bit_depth=8)
        back = read_stack(path)
        np.testing.assert_array_equal(back.data[0, 0], [0.0, 3.0, 255.0])

    def test_bad_bit_depth(self, tmp_path):
        with pytest.raises(ValueError):
            write_stack(VoxelStack(np.zeros((1, 1, 1))), tmp_path / "x.tif", 12)


class TestReadStackValidation:
    def test_rgb_rejected(self, tmp_path):
        path = tmp_path / "rgb.tif"
        tifffile.imwrite(path, np.zeros((4, 4, 3), dtype=np.uint8), photometric="rgb")
        with pytest.raises(UnsupportedFormatError):
            read_stack(path)

    def test_float_rejected(self, tmp_path):
        path = tmp_path / "float.tif"
        tifffile.imwrite(path, np.zeros((4, 4), dtype=np.float32))
        with pytest.raises(UnsupportedFormatError):
            read_stack(path)

    def test_32bit_rejected(self, tmp_path):
        path = tmp_path / "deep.tif"
        tifffile.imwrite(path, np.zeros((4, 4), dtype=np.uint32))
        with pytest.raises(UnsupportedFormatError):
            read_stack(path)

    def test_inconsistent_pages_rejected(self, tmp_path):
        path = tmp_path / "mixed.tif"
        with tifffile.TiffWriter(path) as tw:
            tw.write(np.zeros((4, 5), dtype=np.uint8))
            tw.write(np.zeros((6, 7), dtype=np.uint8))
        with pytest.raises(CorruptStackError):
            read_stack(path)

    def test_not_a_tiff_rejected(self, tmp_path):
        path = tmp_path / "junk.tif"
        path.write_bytes(b"this is not an image")
        with pytest.raises(UnsupportedFormatError):
            read_stack(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_stack(tmp_path / "nope.tif")

    def test_missing_metadata_warns_and_defaults(self, tmp_path):
        path = tmp_path / "bare.tif"
        tifffile.imwrite(path, np.zeros((3, 4), dtype=np.uint8))
        with pytest.warns(UserWarning, match="voxel size"):
            stack = read_stack(path)
        assert stack.voxel_size == (1.0, 1.0, 1.0)

    def test_foreign_resolution_tags(self, tmp_path):
        # ImageJ-style file: resolution tags plus "spacing=" z step
        path = tmp_path / "imagej.tif"
        tifffile.imwrite(
            path,
            np.zeros((2, 4, 4), dtype=np.uint16),
            resolution=((4, 1), (2, 1)),
            description="ImageJ=1.53\nspacing=3.5\nunit=micron\n",
            metadata=None,
        )
        stack = read_stack(path)
        assert stack.voxel_size == (0.25, 0.5, 3.5)


class TestStatsRoundTrip:
    def stats(self):
        return SampleStats(
            noise=Moments3(1 / 3, 2 / 7, 1e-8),
            signal_mean=40.123456789012345,
            threshold=18.25,
            n_noise=23000,
            n_signal=1000,
            blur_sigma=(1.0, 1.0, 2.5),
        )

    def test_lossless(self, tmp_path):
        path = tmp_path / "s.stats.json"
        stats = self.stats()
        write_stats(stats, path)
        assert read_stats(path) == stats

    def test_byte_determinism(self, tmp_path):
        p1, p2 = tmp_path / "a.stats.json", tmp_path / "b.stats.json"
        write_stats(self.stats(), p1)
        write_stats(self.stats(), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_top_key_rejected(self, tmp_path):
        path = tmp_path / "s.stats.json"
        write_stats(self.stats(), path)
        doc = json.loads(path.read_text())
        doc["surprise"] = 1
        path.write_text(json.dumps(doc))
        with pytest.raises(UnsupportedFormatError, match="surprise"):
            read_stats(path)

    def test_unknown_noise_key_rejected(self, tmp_path):
        path = tmp_path / "s.stats.json"
        write_stats(self.stats(), path)
        doc = json.loads(path.read_text())
        doc["noise"]["kurtosis"] = 0
        path.write_text(json.dumps(doc))
        with pytest.raises(UnsupportedFormatError, match="kurtosis"):
            read_stats(path)

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "s.stats.json"
        write_stats(self.stats(), path)
        doc = json.loads(path.read_text())
        del doc["threshold"]
        path.write_text(json.dumps(doc))
        with pytest.raises(UnsupportedFormatError, match="threshold"):
            read_stats(path)

    def test_foreign_version_rejected(self, tmp_path):
        path = tmp_path / "s.stats.json"
        write_stats(self.stats(), path)
        doc = json.loads(path.read_text())
        doc["format_version"] = 2
        path.write_text(json.dumps(doc))
        with pytest.raises(UnsupportedFormatError, match="format_version"):
            read_stats(path)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from palmid import imgcore
from palmid.errors import ParameterError

small_images = arrays(
    np.float64, st.tuples(st.integers(3, 12), st.integers(3, 12)),
    elements=st.floats(0.0, 1.0, allow_nan=False, width=64),
)
small_masks = arrays(np.bool_, st.tuples(st.integers(1, 12), st.integers(1, 12)))


class TestGaussianKernel:
    def test_paper_configuration(self):
        k = imgcore.gaussian_kernel(sigma=1.0, size=7)
        assert k.shape == (7, 7)
        assert k.sum() == pytest.approx(1.0, abs=1e-12)
        assert k[3, 3] == k.max()

    def test_size_one_is_identity(self):
        assert np.array_equal(imgcore.gaussian_kernel(sigma=5.0, size=1), [[1.0]])

    def test_center_weight_sigma1_size3(self):
        # direct evaluation: exp(-(m^2+n^2)/2) over {-1,0,1}^2, then normalized
        k = imgcore.gaussian_kernel(sigma=1.0, size=3)
        expected_center = 1.0 / (1.0 + 4.0 * np.exp(-0.5) + 4.0 * np.exp(-1.0))
        assert k[1, 1] == pytest.approx(expected_center, abs=1e-15)

    def test_symmetry_exact(self):
        k = imgcore.gaussian_kernel(sigma=1.7, size=9)
        assert np.array_equal(k, k[::-1, ::-1])
        assert np.array_equal(k, k.T)

    @pytest.mark.parametrize("sigma,size", [(0.0, 3), (-1.0, 3), (1.0, 4), (1.0, 0)])
    def test_rejects_bad_parameters(self, sigma, size):
        with pytest.raises(ParameterError):
            imgcore.gaussian_kernel(sigma=sigma, size=size)

    @given(sigma=st.floats(0.05, 10.0), half=st.integers(0, 5))
    def test_sums_to_one(self, sigma, half):
        k = imgcore.gaussian_kernel(sigma=sigma, size=2 * half + 1)
        assert abs(k.sum() - 1.0) < 1e-12


class TestConvolve:
    def test_identity_kernel_exact(self, rng):
        image = rng.random((9, 7))
        assert np.array_equal(imgcore.convolve(image, [[1.0]]), image)

    def test_constant_propagation(self):
        image = np.full((8, 8), 0.37)
        k = imgcore.gaussian_kernel(1.0, 5)
        assert np.allclose(imgcore.convolve(image, k), 0.37, atol=1e-15)

    def test_matches_loop_oracle(self, rng):
        image = rng.random((5, 5))
        kernel = rng.standard_normal((3, 3))
        result = imgcore.convolve(image, kernel)
        assert np.max(np.abs(result - oracles.conv_replicate(image, kernel))) < 1e-12

    def test_kernel_larger_than_image(self):
        with pytest.raises(ParameterError):
            imgcore.convolve(np.zeros((3, 3)), np.ones((5, 5)) / 25.0)

    def test_rejects_even_or_rectangular_kernel(self):
        with pytest.raises(ParameterError):
            imgcore.convolve(np.zeros((6, 6)), np.ones((2, 2)))
        with pytest.raises(ParameterError):
            imgcore.convolve(np.zeros((6, 6)), np.ones((3, 5)))

    def test_rejects_non_finite_image(self):
        image = np.ones((4, 4))
        image[1, 2] = np.nan
        with pytest.raises(ParameterError):
            imgcore.convolve(image, [[1.0]])


class TestSobelEdges:
    def test_constant_image_all_false(self):
        assert not imgcore.sobel_edges(np.full((10, 10), 0.5), 0.9).any()

    def test_vertical_step_gives_vertical_band(self):
        image = np.zeros((16, 16))
        image[:, 8:] = 1.0
        edges = imgcore.sobel_edges(image, 0.9)
        cols = np.where(edges.any(axis=0))[0]
        assert len(cols) > 0
        assert set(cols) <= {7, 8}
        # edge rows span the full height at those columns
        assert edges[:, cols].all()

    def test_matches_gradient_oracle(self, rng):
        # synthetic ridges: smooth sinusoidal bumps
        yy, xx = np.meshgrid(np.arange(16), np.arange(16), indexing="ij")
        image = 0.5 + 0.4 * np.sin(yy / 2.5) * np.cos(xx / 3.0) + 0.05 * rng.random((16, 16))
        assert np.array_equal(imgcore.sobel_edges(image, 0.85),
                              oracles.sobel_edges(image, 0.85))

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.7])
    def test_rejects_bad_quantile(self, q):
        with pytest.raises(ParameterError):
            imgcore.sobel_edges(np.zeros((4, 4)), q)


class TestRemoveIsolated:
    def test_single_isolated_pixel_removed(self):
        mask = np.zeros((7, 7), dtype=bool)
        mask[3, 3] = True
        assert not imgcore.remove_isolated(mask, 3).any()

    def test_all_true_unchanged(self):
        mask = np.ones((6, 8), dtype=bool)
        assert np.array_equal(imgcore.remove_isolated(mask, 3), mask)

    def test_matches_neighbor_count_oracle(self, rng):
        mask = rng.random((10, 10)) > 0.5
        for mn in (0, 1, 3, 8):
            assert np.array_equal(imgcore.remove_isolated(mask, mn),
                                  oracles.remove_isolated(mask, mn))

    def test_simultaneous_not_iterated(self):
        # a 3-pixel diagonal: ends have 1 neighbor, center has 2; with
        # min_neighbors=2 the center must survive even though both ends go.
        mask = np.zeros((5, 5), dtype=bool)
        mask[1, 1] = mask[2, 2] = mask[3, 3] = True
        out = imgcore.remove_isolated(mask, 2)
        assert out[2, 2] and out.sum() == 1

    @pytest.mark.parametrize("mn", [-1, 9])
    def test_rejects_bad_min_neighbors(self, mn):
        with pytest.raises(ParameterError):
            imgcore.remove_isolated(np.zeros((3, 3), dtype=bool), mn)

    @given(mask=small_masks, mn=st.integers(0, 8))
    def test_output_subset_of_input(self, mask, mn):
        out = imgcore.remove_isolated(mask, mn)
        assert not (out & ~mask).any()


class TestPositiveLaplacian:
    def test_constant_is_zero(self):
        assert np.array_equal(imgcore.positive_laplacian(np.full((6, 6), 0.8)),
                              np.zeros((6, 6)))

    def test_dark_pixel_in_bright_field_responds(self):
        image = np.ones((7, 7))
        image[3, 3] = 0.0
        out = imgcore.positive_laplacian(image)
        assert out[3, 3] == 4.0  # -4 * (0 - 1)

    def test_matches_loop_oracle(self, rng):
        image = rng.random((8, 8))
        assert np.max(np.abs(imgcore.positive_laplacian(image)
                             - oracles.positive_laplacian(image))) < 1e-12

    def test_eight_neighbor_variant(self):
        image = np.ones((5, 5))
        image[2, 2] = 0.0
        assert imgcore.positive_laplacian(image, connectivity=8)[2, 2] == 8.0
        with pytest.raises(ParameterError):
            imgcore.positive_laplacian(image, connectivity=5)

    @given(image=small_images)
    def test_everywhere_nonnegative(self, image):
        assert (imgcore.positive_laplacian(image) >= 0.0).all()


class TestDilate:
    def test_radius_zero_identity(self, rng):
        mask = rng.random((6, 6)) > 0.5
        assert np.array_equal(imgcore.dilate(mask, 0), mask)

    def test_single_pixel_becomes_block(self):
        mask = np.zeros((5, 5), dtype=bool)
        mask[2, 2] = True
        out = imgcore.dilate(mask, 1)
        expected = np.zeros((5, 5), dtype=bool)
        expected[1:4, 1:4] = True
        assert np.array_equal(out, expected)

    def test_clips_at_borders(self):
        mask = np.zeros((4, 4), dtype=bool)
        mask[0, 0] = True
        out = imgcore.dilate(mask, 1)
        expected = np.zeros((4, 4), dtype=bool)
        expected[:2, :2] = True
        assert np.array_equal(out, expected)

    def test_matches_max_filter_oracle(self, rng):
        mask = rng.random((9, 11)) > 0.7
        assert np.array_equal(imgcore.dilate(mask, 2), oracles.dilate(mask, 2))

    def test_rejects_negative_radius(self):
        with pytest.raises(ParameterError):
            imgcore.dilate(np.zeros((3, 3), dtype=bool), -1)

    @given(mask=small_masks, radius=st.integers(0, 3))
    def test_extensive(self, mask, radius):
        out = imgcore.dilate(mask, radius)
        assert (out | mask).sum() == out.sum()

    @given(mask=small_masks, extra=small_masks, radius=st.integers(0, 3))
    def test_monotone(self, mask, extra, radius):
        if mask.shape != extra.shape:
            return
        bigger = mask | extra
        d_small = imgcore.dilate(mask, radius)
        d_big = imgcore.dilate(bigger, radius)
        assert not (d_small & ~d_big).any()


class TestBlockPower:
    def test_constant_two_gives_four(self):
        vec = imgcore.block_power(np.full((8, 8), 2.0), 4, 4)
        assert np.array_equal(vec, np.full(4, 4.0))

    def test_zero_image(self):
        assert np.array_equal(imgcore.block_power(np.zeros((8, 8)), 4, 4), np.zeros(4))

    def test_matches_loop_oracle(self, rng):
        image = rng.random((8, 8))
        vec = imgcore.block_power(image, 4, 4)
        assert vec.shape == (4,)
        assert np.max(np.abs(vec - oracles.block_power(image, 4, 4))) < 1e-12

    def test_row_major_block_order(self):
        # four 2x2 blocks with distinct constants: order must be
        # left-to-right then top-to-bottom
        image = np.zeros((4, 4))
        image[0:2, 0:2] = 1.0
        image[0:2, 2:4] = 2.0
        image[2:4, 0:2] = 3.0
        image[2:4, 2:4] = 4.0
        assert np.array_equal(imgcore.block_power(image, 2, 2), [1.0, 4.0, 9.0, 16.0])

    def test_rectangular_blocks(self, rng):
        image = rng.random((6, 8))
        vec = imgcore.block_power(image, block_w=4, block_h=2)
        assert vec.shape == (6,)
        assert np.max(np.abs(vec - oracles.block_power(image, 4, 2))) < 1e-12

    def test_rejects_non_divisible(self):
        with pytest.raises(ParameterError):
            imgcore.block_power(np.zeros((8, 8)), 3, 4)
        with pytest.raises(ParameterError):
            imgcore.block_power(np.zeros((8, 8)), 4, 5)

    @given(image=arrays(np.float64, (8, 8), elements=st.floats(-1.0, 1.0, width=64)))
    def test_sign_flip_invariant(self, image):
        assert np.array_equal(imgcore.block_power(image, 4, 4),
                              imgcore.block_power(-image, 4, 4))

import numpy as np
import pytest

from ttvseg import (
    NoiseSpec,
    add_gaussian_noise,
    ground_truth_to_membership,
    normalize,
    to_label_mask,
    validate_membership,
)


class TestNormalize:
    def test_two_levels_map_to_endpoints(self):
        out = normalize(np.array([[104.0, 191.0]]))
        assert np.array_equal(out, np.array([[0.0, 1.0]]))

    def test_constant_grid_maps_to_zeros(self):
        out = normalize(np.full((2, 2), 5.0))
        assert np.array_equal(out, np.zeros((2, 2)))

    def test_identity_on_unit_range(self):
        grid = np.array([[0.0, 0.5, 1.0]])
        assert np.array_equal(normalize(grid), grid)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            grid = rng.uniform(-50.0, 80.0, size=(9, 7))
            once = normalize(grid)
            assert np.abs(normalize(once) - once).max() <= 1e-12

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            normalize(np.zeros((0, 3)))


class TestGaussianNoise:
    def test_zero_variance_is_identity(self):
        img = np.random.default_rng(0).uniform(size=(5, 5))
        out = add_gaussian_noise(img, NoiseSpec(mean=0.0, variance=0.0, seed=3))
        assert np.array_equal(out, img)

    def test_same_seed_bit_identical(self):
        img = np.linspace(0.0, 1.0, 30).reshape(5, 6)
        spec = NoiseSpec(mean=0.0, variance=0.01, seed=77)
        assert np.array_equal(
            add_gaussian_noise(img, spec), add_gaussian_noise(img, spec)
        )

    def test_different_seeds_differ(self):
        img = np.zeros((8, 8))
        a = add_gaussian_noise(img, NoiseSpec(0.0, 0.01, 1))
        b = add_gaussian_noise(img, NoiseSpec(0.0, 0.01, 2))
        assert not np.array_equal(a, b)

    def test_sample_moments(self):
        # law-of-large-numbers check on a 256x256 zero grid
        out = add_gaussian_noise(np.zeros((256, 256)), NoiseSpec(0.0, 0.01, 2024))
        assert abs(out.mean()) <= 4.0 * (0.1 / 256.0)
        assert abs(out.var() / 0.01 - 1.0) <= 0.10

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(mean=0.0, variance=-0.01, seed=0)

    def test_input_not_mutated(self):
        img = np.ones((4, 4))
        add_gaussian_noise(img, NoiseSpec(0.0, 1.0, 5))
        assert np.array_equal(img, np.ones((4, 4)))


class TestLabelMask:
    def test_argmax(self):
        U = np.array([[[0.1]], [[0.9]]])
        assert to_label_mask(U)[0, 0] == 1

    def test_tie_breaks_to_smallest_phase(self):
        U = np.array([[[0.5]], [[0.5]]])
        assert to_label_mask(U)[0, 0] == 0

    def test_three_phases(self):
        U = np.array([[[0.2]], [[0.3]], [[0.5]]])
        assert to_label_mask(U)[0, 0] == 2


class TestGroundTruthMembership:
    def test_one_hot(self):
        U = ground_truth_to_membership(np.array([[0, 1]]), 2)
        assert np.array_equal(U[0], np.array([[1.0, 0.0]]))
        assert np.array_equal(U[1], np.array([[0.0, 1.0]]))

    def test_all_zero_labels(self):
        U = ground_truth_to_membership(np.zeros((3, 3), dtype=int), 3)
        assert np.array_equal(U[0], np.ones((3, 3)))
        assert np.array_equal(U[1], np.zeros((3, 3)))
        assert np.array_equal(U[2], np.zeros((3, 3)))

    def test_out_of_range_label_rejected(self):
        with pytest.raises(ValueError):
            ground_truth_to_membership(np.array([[0, 2]]), 2)

    def test_roundtrip_with_label_mask(self):
        rng = np.random.default_rng(9)
        for n_phases in (2, 3, 4):
            labels = rng.integers(0, n_phases, size=(11, 13))
            back = to_label_mask(ground_truth_to_membership(labels, n_phases))
            assert np.array_equal(back, labels)


class TestValidateMembership:
    def test_valid_field_passes(self):
        U = ground_truth_to_membership(np.array([[0, 1], [1, 0]]), 2)
        validate_membership(U, 2)

    def test_bad_sum_rejected(self):
        U = np.full((2, 2, 2), 0.4)
        with pytest.raises(ValueError):
            validate_membership(U)

    def test_out_of_range_rejected(self):
        U = np.stack([np.full((2, 2), 1.2), np.full((2, 2), -0.2)])
        with pytest.raises(ValueError):
            validate_membership(U)

    def test_wrong_phase_count_rejected(self):
        U = ground_truth_to_membership(np.array([[0, 1]]), 2)
        with pytest.raises(ValueError):
            validate_membership(U, 3)

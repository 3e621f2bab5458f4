import numpy as np
import pytest

from relational_som import (
    EuclideanPrototypes,
    Medoids,
    PointCloud,
    PrototypeCoefficients,
    assign_all,
    implicit_distance,
    init_coefficients,
    prototypes_in_data_space,
    squared_euclidean,
    unit_distances,
)
from relational_som.exceptions import DimensionMismatchError, InputValidationError


def random_simplex(rng, shape):
    values = rng.uniform(size=shape)
    return values / values.sum(axis=-1, keepdims=True)


class TestImplicitDistance:
    def test_one_hot_self(self, random_dissimilarity):
        dissimilarity = random_dissimilarity(5)
        assert implicit_distance(dissimilarity, np.eye(5)[2], 2) == 0.0

    def test_one_hot_other(self, random_dissimilarity):
        dissimilarity = random_dissimilarity(5)
        value = implicit_distance(dissimilarity, np.eye(5)[3], 1)
        assert value == pytest.approx(dissimilarity.values[1, 3])

    def test_explicit_prototype_oracle(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 21))
            d = int(rng.integers(1, 6))
            coords = rng.normal(size=(n, d))
            dissimilarity = squared_euclidean(PointCloud(coords))
            beta = random_simplex(rng, n)
            i = int(rng.integers(0, n))
            expected = np.sum((coords[i] - beta @ coords) ** 2)
            assert implicit_distance(dissimilarity, beta, i) == pytest.approx(
                expected, rel=1e-9, abs=1e-12
            )

    def test_dimension_mismatch(self, random_dissimilarity):
        with pytest.raises(DimensionMismatchError):
            implicit_distance(random_dissimilarity(4), np.ones(3) / 3.0, 0)

    def test_index_out_of_range(self, random_dissimilarity):
        with pytest.raises(DimensionMismatchError):
            implicit_distance(random_dissimilarity(4), np.ones(4) / 4.0, 4)


class TestInitCoefficients:
    def test_one_hot_permutation(self):
        coefficients = init_coefficients(6, 6, "one-hot-sample", seed=3)
        values = coefficients.values
        assert set(np.unique(values)) == {0.0, 1.0}
        np.testing.assert_array_equal(values.sum(axis=0), np.ones(6))
        np.testing.assert_array_equal(values.sum(axis=1), np.ones(6))

    def test_one_hot_with_replacement(self):
        coefficients = init_coefficients(3, 8, "one-hot-sample", seed=3)
        np.testing.assert_array_equal(coefficients.values.sum(axis=1), np.ones(8))

    def test_random_convex(self):
        values = init_coefficients(50, 25, "random-convex", seed=1).values
        assert np.all(values > 0.0)
        np.testing.assert_allclose(values.sum(axis=1), 1.0, rtol=0.0, atol=1e-12)

    @pytest.mark.parametrize("mode", ["one-hot-sample", "random-convex"])
    def test_deterministic(self, mode):
        first = init_coefficients(30, 12, mode, seed=7).values
        second = init_coefficients(30, 12, mode, seed=7).values
        np.testing.assert_array_equal(first, second)

    def test_seeds_differ(self):
        first = init_coefficients(30, 12, "random-convex", seed=7).values
        second = init_coefficients(30, 12, "random-convex", seed=8).values
        assert not np.array_equal(first, second)

    def test_empty(self):
        with pytest.raises(InputValidationError):
            init_coefficients(0, 4, "random-convex", seed=0)


class TestPrototypeCoefficients:
    def test_off_simplex(self):
        with pytest.raises(InputValidationError):
            PrototypeCoefficients(np.array([[0.5, 0.6]]))

    def test_negative(self):
        with pytest.raises(InputValidationError):
            PrototypeCoefficients(np.array([[1.5, -0.5]]))

    def test_medoids_one_hot(self):
        coefficients = Medoids(np.array([2, 0])).one_hot(3)
        np.testing.assert_array_equal(
            coefficients.values, [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
        )


class TestAssignAll:
    def test_one_hot_rows(self, random_dissimilarity):
        dissimilarity = random_dissimilarity(6)
        state = PrototypeCoefficients(np.eye(6)[:4])
        assignments = assign_all(dissimilarity, state)
        np.testing.assert_array_equal(assignments[:4], [0, 1, 2, 3])

    def test_full_tie_lowest_unit(self, random_dissimilarity):
        dissimilarity = random_dissimilarity(5)
        state = PrototypeCoefficients(np.full((4, 5), 0.2))
        np.testing.assert_array_equal(assign_all(dissimilarity, state), np.zeros(5))

    def test_naive_oracle(self, rng, random_dissimilarity):
        dissimilarity = random_dissimilarity(8)
        beta = random_simplex(rng, (5, 8))
        expected = [
            int(
                np.argmin([implicit_distance(dissimilarity, row, i) for row in beta])
            )
            for i in range(8)
        ]
        assignments = assign_all(dissimilarity, PrototypeCoefficients(beta))
        assert assignments.tolist() == expected

    def test_medoids(self, random_dissimilarity):
        dissimilarity = random_dissimilarity(5)
        assignments = assign_all(dissimilarity, Medoids(np.array([3, 1])))
        assert assignments[3] == 0 and assignments[1] == 1

    def test_euclidean_needs_points(self, random_dissimilarity):
        with pytest.raises(InputValidationError):
            assign_all(None, EuclideanPrototypes(np.zeros((2, 2))))

    def test_euclidean_matches_relational(self, rng):
        points = PointCloud(rng.normal(size=(15, 3)))
        beta = random_simplex(rng, (6, 15))
        relational = unit_distances(
            squared_euclidean(points), PrototypeCoefficients(beta)
        )
        euclidean = unit_distances(
            None, EuclideanPrototypes(beta @ points.coords), points=points
        )
        np.testing.assert_allclose(relational, euclidean, rtol=1e-9, atol=1e-12)


def test_prototypes_in_data_space(corner_points):
    coefficients = PrototypeCoefficients(np.array([[0.25, 0.25, 0.25, 0.25]]))
    np.testing.assert_allclose(
        prototypes_in_data_space(coefficients, corner_points), [[0.5, 0.5]]
    )

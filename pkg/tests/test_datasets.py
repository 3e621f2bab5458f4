import numpy as np
import pytest

from relational_som import generate_swiss_roll, generate_uniform_square
from relational_som.exceptions import InputValidationError


class TestUniformSquare:
    def test_bounds(self):
        points = generate_uniform_square(500, seed=0)
        assert points.coords.shape == (500, 2)
        assert np.all((points.coords >= 0.0) & (points.coords <= 1.0))

    def test_seeded(self):
        first = generate_uniform_square(50, seed=3).coords
        np.testing.assert_array_equal(first, generate_uniform_square(50, seed=3).coords)
        assert not np.array_equal(first, generate_uniform_square(50, seed=4).coords)


class TestSwissRoll:
    def test_roll_parameter_range(self):
        points = generate_swiss_roll(1000, seed=0)
        t = np.hypot(points.coords[:, 0], points.coords[:, 2])
        assert np.all((t >= 1.5 * np.pi) & (t <= 4.5 * np.pi))
        assert np.all((points.coords[:, 1] >= 0.0) & (points.coords[:, 1] <= 20.0))

    def test_seeded(self):
        first = generate_swiss_roll(40, seed=1).coords
        np.testing.assert_array_equal(first, generate_swiss_roll(40, seed=1).coords)


@pytest.mark.parametrize("generate", [generate_uniform_square, generate_swiss_roll])
def test_empty(generate):
    with pytest.raises(InputValidationError):
        generate(0, seed=0)

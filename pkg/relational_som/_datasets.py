from __future__ import annotations

import numpy as np

from ._dissimilarity import PointCloud
from .exceptions import InputValidationError

SWISS_ROLL_T_RANGE = (1.5 * np.pi, 4.5 * np.pi)
SWISS_ROLL_HEIGHT = 20.0


def generate_uniform_square(n: int, seed: int) -> PointCloud:
    _check_n(n)
    rng = np.random.default_rng(seed)
    return PointCloud(rng.uniform(0.0, 1.0, size=(n, 2)))


def generate_swiss_roll(n: int, seed: int) -> PointCloud:
    """Points (t cos t, h, t sin t), t ~ U[1.5 pi, 4.5 pi], h ~ U[0, 20]."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    t = rng.uniform(*SWISS_ROLL_T_RANGE, size=n)
    h = rng.uniform(0.0, SWISS_ROLL_HEIGHT, size=n)
    return PointCloud(np.stack([t * np.cos(t), h, t * np.sin(t)], axis=1))


def _check_n(n: int) -> None:
    if n < 1:
        raise InputValidationError(f"n must be >= 1: {n}")

from __future__ import annotations

import dataclasses
import functools
from typing import Literal, Protocol

import numpy as np
import numpy.typing as npt

from .exceptions import (
    GridShapeError,
    InputValidationError,
    IterationOutOfRangeError,
    ScheduleError,
)

KernelKind = Literal["hard", "gaussian"]

# floor on the gaussian width so that radius 0 still yields K(u, u) = 1
GAUSSIAN_MIN_RADIUS = 0.5
# alpha(T) = alpha0 / ALPHA_DECAY
ALPHA_DECAY = 10.0


@dataclasses.dataclass(frozen=True)
class MapGrid:
    """Rectangular grid; unit u sits at (u // cols, u % cols)."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise GridShapeError(f"grid must be at least 1x1: {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def max_radius(self) -> int:
        # strictly larger than the largest L1 distance (rows - 1) + (cols - 1)
        return self.rows + self.cols

    def unit_coord(self, unit: int) -> tuple[int, int]:
        if not 0 <= unit < self.size:
            raise GridShapeError(f"unit {unit} is out of range [0, {self.size})")
        return divmod(unit, self.cols)

    @functools.cached_property
    def coordinates(self) -> npt.NDArray[np.int64]:
        units = np.arange(self.size)
        return np.stack([units // self.cols, units % self.cols], axis=1)

    @functools.cached_property
    def distances(self) -> npt.NDArray[np.int64]:
        coords = self.coordinates
        return np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=2)

    def neighbors(self, unit: int) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.distances[unit] == 1)]

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        return [
            (int(u), int(v))
            for u, v in zip(*np.nonzero(np.triu(self.distances == 1)))
        ]


@dataclasses.dataclass(frozen=True)
class NeighborhoodKernel:
    kind: KernelKind = "hard"

    def __call__(
        self,
        distance: npt.ArrayLike,
        radius: float,
    ) -> npt.NDArray[np.float64]:
        distance = np.asarray(distance, dtype=np.float64)
        match self.kind:
            case "hard":
                return (distance <= radius).astype(np.float64)
            case "gaussian":
                width = max(radius, GAUSSIAN_MIN_RADIUS)
                return np.exp(-(distance**2) / (2.0 * width**2))
        raise InputValidationError(f"unknown kernel kind: {self.kind}")


def kernel_value(
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    u: int,
    v: int,
    radius: float,
) -> float:
    grid.unit_coord(u)
    grid.unit_coord(v)
    return float(kernel(grid.distances[u, v], radius))


def kernel_matrix(
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    radius: float,
) -> npt.NDArray[np.float64]:
    return kernel(grid.distances, radius)


class Schedule(Protocol):
    @property
    def iterations(self) -> int: ...

    def at(self, t: int) -> tuple[float, float]: ...


@dataclasses.dataclass(frozen=True)
class TrainingSchedule:
    """Learning rate alpha0 / (1 + 9 t / T) and a staircase radius.

    The radius falls linearly from `max_radius` to 0 over `plateaus` equal
    stages of the iteration range [1, T].
    """

    iterations: int
    max_radius: int
    alpha0: float = 0.5
    plateaus: int = 5

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ScheduleError(f"iterations must be >= 0: {self.iterations}")
        if not 0.0 < self.alpha0 <= 1.0:
            raise ScheduleError(f"alpha0 must be in (0, 1]: {self.alpha0}")
        if self.plateaus < 1:
            raise ScheduleError(f"plateaus must be >= 1: {self.plateaus}")
        if self.max_radius < 0:
            raise ScheduleError(f"max_radius must be >= 0: {self.max_radius}")

    @classmethod
    def for_grid(
        cls,
        grid: MapGrid,
        iterations: int,
        *,
        alpha0: float = 0.5,
        plateaus: int = 5,
    ) -> TrainingSchedule:
        return cls(
            iterations=iterations,
            max_radius=grid.max_radius,
            alpha0=alpha0,
            plateaus=plateaus,
        )

    def alpha(self, t: int) -> float:
        self._check(t)
        return self.alpha0 / (1.0 + (ALPHA_DECAY - 1.0) * t / self.iterations)

    def radius(self, t: int) -> float:
        self._check(t)
        # fewer iterations than plateaus: one plateau per iteration
        stages = min(self.plateaus, self.iterations)
        if stages == 1:
            return 0.0
        stage = (t - 1) * stages // self.iterations
        return float(self.max_radius * (stages - 1 - stage) // (stages - 1))

    def at(self, t: int) -> tuple[float, float]:
        return self.alpha(t), self.radius(t)

    def _check(self, t: int) -> None:
        if not 1 <= t <= self.iterations:
            raise IterationOutOfRangeError(
                f"iteration {t} is out of range [1, {self.iterations}]"
            )


@dataclasses.dataclass(frozen=True)
class FixedSchedule:
    iterations: int
    alpha: float
    radius: float

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ScheduleError(f"iterations must be >= 0: {self.iterations}")
        if not 0.0 < self.alpha <= 1.0:
            raise ScheduleError(f"alpha must be in (0, 1]: {self.alpha}")
        if self.radius < 0:
            raise ScheduleError(f"radius must be >= 0: {self.radius}")

    def at(self, t: int) -> tuple[float, float]:
        if not 1 <= t <= self.iterations:
            raise IterationOutOfRangeError(
                f"iteration {t} is out of range [1, {self.iterations}]"
            )
        return self.alpha, self.radius


def schedule_at(schedule: Schedule, t: int) -> tuple[float, float]:
    return schedule.at(t)

from __future__ import annotations

import dataclasses
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
from scipy.spatial.distance import cdist

from ._dissimilarity import DissimilarityMatrix, PointCloud
from ._topology import MapGrid, NeighborhoodKernel, Schedule
from .exceptions import DimensionMismatchError, InputValidationError

Variant = Literal[
    "online-relational",
    "batch-relational",
    "euclidean-online",
    "batch-median",
]
InitMode = Literal["one-hot-sample", "random-convex"]
SamplingMode = Literal["uniform", "epoch-shuffle"]

SIMPLEX_ATOL = 1.0e-10


@dataclasses.dataclass(frozen=True)
class PrototypeCoefficients:
    """U×n row-stochastic matrix; row u holds the weights of prototype u."""

    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DimensionMismatchError(
                f"coefficients must be a U×n matrix: {values.shape}"
            )
        if np.any(values < 0.0) or not np.allclose(
            values.sum(axis=1), 1.0, rtol=0.0, atol=SIMPLEX_ATOL
        ):
            raise InputValidationError("coefficient rows are not on the simplex")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def units(self) -> int:
        return int(self.values.shape[0])

    @property
    def n(self) -> int:
        return int(self.values.shape[1])


@dataclasses.dataclass(frozen=True)
class Medoids:
    indices: npt.NDArray[np.int64]

    def one_hot(self, n: int) -> PrototypeCoefficients:
        values = np.zeros((self.indices.size, n))
        values[np.arange(self.indices.size), self.indices] = 1.0
        return PrototypeCoefficients(values)


@dataclasses.dataclass(frozen=True)
class EuclideanPrototypes:
    vectors: npt.NDArray[np.float64]


type MapState = PrototypeCoefficients | Medoids | EuclideanPrototypes


@dataclasses.dataclass(frozen=True)
class Checkpoint:
    iteration: int
    quantization_error: float


@dataclasses.dataclass(frozen=True)
class Snapshot:
    iteration: int
    state: MapState


@dataclasses.dataclass(frozen=True)
class TrainedMap:
    variant: Variant
    grid: MapGrid
    kernel: NeighborhoodKernel
    schedule: Schedule
    seed: int
    state: MapState
    assignments: npt.NDArray[np.int64]
    history: list[Checkpoint]
    # online variants only: sampled observation and winner per iteration
    samples: Optional[npt.NDArray[np.int64]] = None
    winners: Optional[npt.NDArray[np.int64]] = None
    snapshots: list[Snapshot] = dataclasses.field(default_factory=list)

    def __post_init__(self) -> None:
        if self.assignments.size and not (
            0 <= self.assignments.min() and self.assignments.max() < self.grid.size
        ):
            raise InputValidationError("assignment outside of the grid")
        iterations = [checkpoint.iteration for checkpoint in self.history]
        if any(a >= b for a, b in zip(iterations, iterations[1:])):
            raise InputValidationError("history iterations are not increasing")

    @property
    def n(self) -> int:
        return int(self.assignments.size)

    @property
    def coefficients(self) -> Optional[PrototypeCoefficients]:
        match self.state:
            case PrototypeCoefficients():
                return self.state
            case Medoids():
                return self.state.one_hot(self.n)
        return None


def implicit_distance(
    dissimilarity: DissimilarityMatrix,
    beta: npt.ArrayLike,
    i: int,
) -> float:
    """(D beta)_i - beta^T D beta / 2; may be negative for non-Euclidean D."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (dissimilarity.n,):
        raise DimensionMismatchError(
            f"coefficient row of shape {beta.shape} for n = {dissimilarity.n}"
        )
    if not 0 <= i < dissimilarity.n:
        raise DimensionMismatchError(f"observation {i} is out of range")
    d_beta = dissimilarity.values @ beta
    return float(d_beta[i] - 0.5 * beta @ d_beta)


def init_coefficients(
    n: int,
    units: int,
    mode: InitMode,
    seed: int,
) -> PrototypeCoefficients:
    if n < 1 or units < 1:
        raise InputValidationError(f"n and U must be >= 1: n={n}, U={units}")
    rng = init_rng(seed)
    match mode:
        case "one-hot-sample":
            indices = rng.choice(n, size=units, replace=units > n)
            values = np.zeros((units, n))
            values[np.arange(units), indices] = 1.0
        case "random-convex":
            # uniform on (0, 1]: all weights strictly positive
            values = 1.0 - rng.random((units, n))
            values /= values.sum(axis=1, keepdims=True)
        case _:
            raise InputValidationError(f"unknown init mode: {mode}")
    return PrototypeCoefficients(values)


def init_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 0])


def sampling_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 1])


def relational_distances(
    dissimilarity: DissimilarityMatrix,
    beta: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """n×U implicit distances for a U×n coefficient matrix."""
    beta_d = beta @ dissimilarity.values
    quadratic = np.einsum("un,un->u", beta_d, beta)
    return (beta_d - 0.5 * quadratic[:, None]).T


def unit_distances(
    dissimilarity: Optional[DissimilarityMatrix],
    state: MapState,
    *,
    points: Optional[PointCloud] = None,
) -> npt.NDArray[np.float64]:
    match state:
        case PrototypeCoefficients():
            if dissimilarity is None:
                raise InputValidationError("relational state needs a dissimilarity")
            _check_n(dissimilarity, state.n)
            return relational_distances(dissimilarity, state.values)
        case Medoids():
            if dissimilarity is None:
                raise InputValidationError("medoid state needs a dissimilarity")
            return np.array(dissimilarity.values[:, state.indices])
        case EuclideanPrototypes():
            if points is None:
                raise InputValidationError("euclidean state needs the point cloud")
            if points.d != state.vectors.shape[1]:
                raise DimensionMismatchError(
                    f"prototypes of dimension {state.vectors.shape[1]}"
                    f" for points of dimension {points.d}"
                )
            return cdist(points.coords, state.vectors, "sqeuclidean")
    raise InputValidationError(f"unknown map state: {type(state)}")


def assign_all(
    dissimilarity: Optional[DissimilarityMatrix],
    state: MapState,
    *,
    points: Optional[PointCloud] = None,
) -> npt.NDArray[np.int64]:
    # argmin returns the first minimum: lowest unit index on ties
    distances = unit_distances(dissimilarity, state, points=points)
    return np.argmin(distances, axis=1).astype(np.int64)


def prototypes_in_data_space(
    coefficients: PrototypeCoefficients,
    points: PointCloud,
) -> npt.NDArray[np.float64]:
    if coefficients.n != points.n:
        raise DimensionMismatchError(
            f"coefficients over {coefficients.n} observations for {points.n} points"
        )
    return coefficients.values @ points.coords


def state_in_data_space(
    state: MapState,
    points: PointCloud,
) -> npt.NDArray[np.float64]:
    match state:
        case PrototypeCoefficients():
            return prototypes_in_data_space(state, points)
        case Medoids():
            return np.array(points.coords[state.indices])
        case EuclideanPrototypes():
            return np.array(state.vectors)
    raise InputValidationError(f"unknown map state: {type(state)}")


def _check_n(dissimilarity: DissimilarityMatrix, n: int) -> None:
    if dissimilarity.n != n:
        raise DimensionMismatchError(
            f"state over {n} observations for a {dissimilarity.n}×"
            f"{dissimilarity.n} dissimilarity"
        )

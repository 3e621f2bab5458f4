from __future__ import annotations

import logging
from typing import Callable, Optional, Sequence

import numpy as np
import numpy.typing as npt

from ._dissimilarity import DissimilarityMatrix, PointCloud
from ._som import (
    Checkpoint,
    EuclideanPrototypes,
    InitMode,
    MapState,
    Medoids,
    PrototypeCoefficients,
    SamplingMode,
    Snapshot,
    TrainedMap,
    Variant,
    assign_all,
    init_coefficients,
    relational_distances,
    sampling_rng,
    unit_distances,
)
from ._topology import MapGrid, NeighborhoodKernel, Schedule, kernel_matrix
from .exceptions import DimensionMismatchError, InputValidationError

type Init = InitMode | PrototypeCoefficients


def default_checkpoints(iterations: int, count: int = 6) -> list[int]:
    """`count` evenly spaced iterations from 0 (initialization) to T."""
    return sorted({int(t) for t in np.linspace(0, iterations, count).round()})


def train_online_relational(
    dissimilarity: DissimilarityMatrix,
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    init: Init,
    seed: int,
    *,
    sampling: SamplingMode = "uniform",
    checkpoints: Optional[Sequence[int]] = None,
    record_snapshots: bool = False,
    warn_indefinite: bool = False,
    logger: Optional[logging.Logger] = None,
) -> TrainedMap:
    logger = logger or logging.getLogger(__name__)
    n = dissimilarity.n
    coefficients = _initial_coefficients(init, n, grid.size, seed)
    _log_start("online-relational", grid, kernel, schedule, seed, logger)
    values = dissimilarity.values
    beta = np.array(coefficients.values)
    # beta_u D beta_u^T, refreshed only for the units touched by an update
    quadratic = np.einsum("un,un->u", beta @ values, beta)
    recorder = _Recorder(
        schedule.iterations,
        checkpoints,
        record_snapshots,
        lambda: PrototypeCoefficients(beta),
        lambda state: unit_distances(dissimilarity, state),
        logger,
    )
    samples = _sample_order(n, schedule.iterations, sampling_rng(seed), sampling)
    winners = np.empty(schedule.iterations, dtype=np.int64)
    negative = 0
    recorder.record(0)
    for t in range(1, schedule.iterations + 1):
        i = samples[t - 1]
        # assignment: (beta_u D)_i - beta_u D beta_u^T / 2
        distances = beta @ values[:, i] - 0.5 * quadratic
        winner = int(np.argmin(distances))
        winners[t - 1] = winner
        if distances[winner] < 0.0:
            negative += 1
        # update: beta_u += alpha K (1_i - beta_u)
        step = _step(grid, kernel, schedule, t, winner)
        updated = np.flatnonzero(step > 0.0)
        beta[updated] *= (1.0 - step[updated])[:, None]
        beta[updated, i] += step[updated]
        touched = beta[updated]
        quadratic[updated] = np.einsum("un,un->u", touched @ values, touched)
        recorder.record(t)
    if warn_indefinite:
        _report_indefinite(negative, schedule.iterations, logger)
    state = PrototypeCoefficients(beta)
    return TrainedMap(
        variant="online-relational",
        grid=grid,
        kernel=kernel,
        schedule=schedule,
        seed=seed,
        state=state,
        assignments=assign_all(dissimilarity, state),
        history=recorder.history,
        samples=samples,
        winners=winners,
        snapshots=recorder.snapshots,
    )


def train_online_euclidean(
    points: PointCloud,
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    init: Init,
    seed: int,
    *,
    sampling: SamplingMode = "uniform",
    checkpoints: Optional[Sequence[int]] = None,
    record_snapshots: bool = False,
    logger: Optional[logging.Logger] = None,
) -> TrainedMap:
    logger = logger or logging.getLogger(__name__)
    n = points.n
    coefficients = _initial_coefficients(init, n, grid.size, seed)
    _log_start("euclidean-online", grid, kernel, schedule, seed, logger)
    coords = points.coords
    # p_u = sum_i beta_ui x_i
    prototypes = coefficients.values @ coords
    recorder = _Recorder(
        schedule.iterations,
        checkpoints,
        record_snapshots,
        lambda: EuclideanPrototypes(np.array(prototypes)),
        lambda state: unit_distances(None, state, points=points),
        logger,
    )
    samples = _sample_order(n, schedule.iterations, sampling_rng(seed), sampling)
    winners = np.empty(schedule.iterations, dtype=np.int64)
    recorder.record(0)
    for t in range(1, schedule.iterations + 1):
        i = samples[t - 1]
        distances = np.sum((prototypes - coords[i]) ** 2, axis=1)
        winner = int(np.argmin(distances))
        winners[t - 1] = winner
        step = _step(grid, kernel, schedule, t, winner)
        updated = np.flatnonzero(step > 0.0)
        prototypes[updated] += step[updated, None] * (coords[i] - prototypes[updated])
        recorder.record(t)
    state = EuclideanPrototypes(prototypes)
    return TrainedMap(
        variant="euclidean-online",
        grid=grid,
        kernel=kernel,
        schedule=schedule,
        seed=seed,
        state=state,
        assignments=assign_all(None, state, points=points),
        history=recorder.history,
        samples=samples,
        winners=winners,
        snapshots=recorder.snapshots,
    )


def train_batch_relational(
    dissimilarity: DissimilarityMatrix,
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    init: Init,
    seed: int,
    *,
    checkpoints: Optional[Sequence[int]] = None,
    record_snapshots: bool = False,
    logger: Optional[logging.Logger] = None,
) -> TrainedMap:
    logger = logger or logging.getLogger(__name__)
    coefficients = _initial_coefficients(init, dissimilarity.n, grid.size, seed)
    _log_start("batch-relational", grid, kernel, schedule, seed, logger)
    beta = np.array(coefficients.values)
    recorder = _Recorder(
        schedule.iterations,
        checkpoints,
        record_snapshots,
        lambda: PrototypeCoefficients(beta),
        lambda state: unit_distances(dissimilarity, state),
        logger,
    )
    assignments = _argmin(relational_distances(dissimilarity, beta))
    recorder.record(0)
    for epoch in range(1, schedule.iterations + 1):
        _, radius = schedule.at(epoch)
        weights = kernel_matrix(grid, kernel, radius)[:, assignments]
        mass = weights.sum(axis=1)
        filled = _filled_units(mass, epoch, logger)
        # beta_ui = K(f(x_i), u) / sum_j K(f(x_j), u)
        beta[filled] = weights[filled] / mass[filled, None]
        updated = _argmin(relational_distances(dissimilarity, beta))
        recorder.record(epoch)
        if _converged(assignments, updated, schedule, epoch, logger):
            recorder.fill_from(epoch + 1)
            break
        assignments = updated
    state = PrototypeCoefficients(beta)
    return TrainedMap(
        variant="batch-relational",
        grid=grid,
        kernel=kernel,
        schedule=schedule,
        seed=seed,
        state=state,
        assignments=assign_all(dissimilarity, state),
        history=recorder.history,
        snapshots=recorder.snapshots,
    )


def train_batch_median(
    dissimilarity: DissimilarityMatrix,
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    init: Init | Medoids,
    seed: int,
    *,
    checkpoints: Optional[Sequence[int]] = None,
    record_snapshots: bool = False,
    logger: Optional[logging.Logger] = None,
) -> TrainedMap:
    logger = logger or logging.getLogger(__name__)
    values = dissimilarity.values
    medoids = _initial_medoids(init, dissimilarity, grid.size, seed)
    _log_start("batch-median", grid, kernel, schedule, seed, logger)
    recorder = _Recorder(
        schedule.iterations,
        checkpoints,
        record_snapshots,
        lambda: Medoids(np.array(medoids)),
        lambda state: unit_distances(dissimilarity, state),
        logger,
    )
    assignments = _argmin(values[:, medoids])
    recorder.record(0)
    for epoch in range(1, schedule.iterations + 1):
        _, radius = schedule.at(epoch)
        weights = kernel_matrix(grid, kernel, radius)[:, assignments]
        filled = _filled_units(weights.sum(axis=1), epoch, logger)
        # m_u = argmin_j sum_i K(f(x_i), u) delta_ij
        cost = weights[filled] @ values
        medoids[filled] = np.argmin(cost, axis=1)
        updated = _argmin(values[:, medoids])
        recorder.record(epoch)
        if _converged(assignments, updated, schedule, epoch, logger):
            recorder.fill_from(epoch + 1)
            break
        assignments = updated
    state = Medoids(medoids)
    return TrainedMap(
        variant="batch-median",
        grid=grid,
        kernel=kernel,
        schedule=schedule,
        seed=seed,
        state=state,
        assignments=assign_all(dissimilarity, state),
        history=recorder.history,
        snapshots=recorder.snapshots,
    )


class _Recorder:
    def __init__(
        self,
        iterations: int,
        checkpoints: Optional[Sequence[int]],
        record_snapshots: bool,
        current: Callable[[], MapState],
        distances: Callable[[MapState], npt.NDArray[np.float64]],
        logger: logging.Logger,
    ) -> None:
        if checkpoints is None:
            checkpoints = default_checkpoints(iterations)
        self._checkpoints = {t for t in checkpoints if 0 <= t <= iterations}
        self._record_snapshots = record_snapshots
        self._current = current
        self._distances = distances
        self._logger = logger
        self.history: list[Checkpoint] = []
        self.snapshots: list[Snapshot] = []

    def record(self, iteration: int) -> None:
        if iteration not in self._checkpoints:
            return
        state = self._current()
        error = float(self._distances(state).min(axis=1).mean())
        self._logger.debug(f"iteration {iteration}: quantization error {error:.6g}")
        self.history.append(Checkpoint(iteration=iteration, quantization_error=error))
        if self._record_snapshots:
            self.snapshots.append(Snapshot(iteration=iteration, state=state))

    def fill_from(self, iteration: int) -> None:
        # checkpoints past an early stop keep the fixed-point state
        for later in sorted(t for t in self._checkpoints if t >= iteration):
            self.record(later)


def _initial_coefficients(
    init: Init,
    n: int,
    units: int,
    seed: int,
) -> PrototypeCoefficients:
    if isinstance(init, PrototypeCoefficients):
        if init.units != units or init.n != n:
            raise DimensionMismatchError(
                f"initial coefficients of shape {init.values.shape}"
                f" for U={units}, n={n}"
            )
        return init
    return init_coefficients(n, units, init, seed)


def _initial_medoids(
    init: Init | Medoids,
    dissimilarity: DissimilarityMatrix,
    units: int,
    seed: int,
) -> npt.NDArray[np.int64]:
    if isinstance(init, Medoids):
        if init.indices.shape != (units,):
            raise DimensionMismatchError(f"{init.indices.size} medoids for U={units}")
        return np.array(init.indices, dtype=np.int64)
    coefficients = _initial_coefficients(init, dissimilarity.n, units, seed)
    # observation closest to each initial convex combination
    distances = relational_distances(dissimilarity, coefficients.values)
    return np.argmin(distances, axis=0).astype(np.int64)


def _sample_order(
    n: int,
    iterations: int,
    rng: np.random.Generator,
    sampling: SamplingMode,
) -> npt.NDArray[np.int64]:
    match sampling:
        case "uniform":
            return rng.integers(0, n, size=iterations, dtype=np.int64)
        case "epoch-shuffle":
            epochs = -(-iterations // n)
            order = np.concatenate([rng.permutation(n) for _ in range(epochs)])
            return order[:iterations].astype(np.int64)
    raise InputValidationError(f"unknown sampling mode: {sampling}")


def _step(
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    t: int,
    winner: int,
) -> npt.NDArray[np.float64]:
    alpha, radius = schedule.at(t)
    return alpha * kernel(grid.distances[winner], radius)


def _argmin(distances: npt.NDArray[np.float64]) -> npt.NDArray[np.int64]:
    return np.argmin(distances, axis=1).astype(np.int64)


def _filled_units(
    mass: npt.NDArray[np.float64],
    epoch: int,
    logger: logging.Logger,
) -> npt.NDArray[np.bool_]:
    filled = mass > 0.0
    for unit in np.flatnonzero(~filled):
        logger.debug(f"epoch {epoch}: empty kernel mass on unit {unit}, unchanged")
    return filled


def _converged(
    previous: npt.NDArray[np.int64],
    current: npt.NDArray[np.int64],
    schedule: Schedule,
    epoch: int,
    logger: logging.Logger,
) -> bool:
    # a fixed point only once the radius has reached its final value
    if epoch == schedule.iterations or not np.array_equal(previous, current):
        return False
    if schedule.at(epoch)[1] != schedule.at(schedule.iterations)[1]:
        return False
    logger.info(f"assignments unchanged after epoch {epoch}: converged")
    return True


def _report_indefinite(
    negative: int,
    iterations: int,
    logger: logging.Logger,
) -> None:
    if iterations == 0:
        return
    logger.warning(
        f"negative implicit distance for {negative} of {iterations} winners"
        f" ({negative / iterations:.2%})"
    )


def _log_start(
    variant: Variant,
    grid: MapGrid,
    kernel: NeighborhoodKernel,
    schedule: Schedule,
    seed: int,
    logger: logging.Logger,
) -> None:
    logger.info(
        f"train {variant}: grid {grid.rows}x{grid.cols}, kernel {kernel.kind},"
        f" {schedule.iterations} iterations, seed {seed}"
    )

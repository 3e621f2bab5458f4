from __future__ import annotations

import logging
import statistics
import time
from typing import Optional, Sequence

import pandas as pd

from ._datasets import generate_uniform_square
from ._dissimilarity import DissimilarityMatrix, PointCloud, squared_euclidean
from ._som import Variant
from ._topology import FixedSchedule, MapGrid, NeighborhoodKernel
from ._training import (
    train_batch_median,
    train_batch_relational,
    train_online_euclidean,
    train_online_relational,
)
from .exceptions import InputValidationError

ONLINE_ITERATIONS = 100


def benchmark_scaling(
    variant: Variant,
    sizes: Sequence[int],
    grid: MapGrid,
    repetitions: int,
    seed: int,
    *,
    iterations: int = ONLINE_ITERATIONS,
    logger: Optional[logging.Logger] = None,
) -> pd.DataFrame:
    """Median wall time of one online iteration or one batch epoch per n.

    Online runs time `iterations` steps at whole-grid radius, so every
    unit is updated; batch runs time a single epoch.
    """
    logger = logger or logging.getLogger(__name__)
    if list(sizes) != sorted(sizes) or not sizes:
        raise InputValidationError(f"sizes must be sorted ascending: {list(sizes)}")
    if repetitions < 1:
        raise InputValidationError(f"repetitions must be >= 1: {repetitions}")
    online = variant in ("online-relational", "euclidean-online")
    steps = iterations if online else 1
    schedule = FixedSchedule(iterations=steps, alpha=0.5, radius=grid.max_radius)
    records: list[dict[str, object]] = []
    for n in sizes:
        points = generate_uniform_square(n, seed)
        dissimilarity = squared_euclidean(points)
        timings: list[float] = []
        # sequential repetitions only
        for _ in range(repetitions):
            start = time.perf_counter()
            _train_once(variant, points, dissimilarity, grid, schedule, seed, logger)
            timings.append((time.perf_counter() - start) / steps)
        seconds = statistics.median(timings)
        logger.info(f"{variant}: n = {n}, {seconds:.6g} s per step")
        records.append(
            {
                "variant": variant,
                "n": n,
                "units": grid.size,
                "repetitions": repetitions,
                "seconds": seconds,
            }
        )
    frame = pd.DataFrame.from_records(records)
    # growth factor from the previous size
    frame["ratio"] = frame["seconds"] / frame["seconds"].shift(1)
    return frame


def _train_once(
    variant: Variant,
    points: PointCloud,
    dissimilarity: DissimilarityMatrix,
    grid: MapGrid,
    schedule: FixedSchedule,
    seed: int,
    logger: logging.Logger,
) -> None:
    kernel = NeighborhoodKernel(kind="hard")
    match variant:
        case "online-relational":
            train_online_relational(
                dissimilarity,
                grid,
                kernel,
                schedule,
                "random-convex",
                seed,
                checkpoints=[],
                logger=logger,
            )
        case "euclidean-online":
            train_online_euclidean(
                points,
                grid,
                kernel,
                schedule,
                "random-convex",
                seed,
                checkpoints=[],
                logger=logger,
            )
        case "batch-relational":
            train_batch_relational(
                dissimilarity,
                grid,
                kernel,
                schedule,
                "random-convex",
                seed,
                checkpoints=[],
                logger=logger,
            )
        case "batch-median":
            train_batch_median(
                dissimilarity,
                grid,
                kernel,
                schedule,
                "random-convex",
                seed,
                checkpoints=[],
                logger=logger,
            )

from __future__ import annotations

import dataclasses
import logging
import pathlib
from typing import Mapping, Optional

from ._config import ExperimentConfig
from ._datasets import generate_swiss_roll, generate_uniform_square
from ._dissimilarity import (
    DissimilarityMatrix,
    PointCloud,
    SimpleGraph,
    geodesic_dissimilarity,
    graph_shortest_path_dissimilarity,
    kimura2p_dissimilarity,
    squared_euclidean,
)
from ._evaluation import (
    MapReport,
    label_distribution,
    map_report,
    neighbor_cell_distances,
    project_graph,
    swiss_roll_quartile_labels,
)
from ._io import (
    load_edge_list,
    load_fasta,
    load_labels,
    load_matrix,
    load_points,
    load_trained_map,
    save_edge_list,
    save_labels,
    save_matrix,
    save_neighbor_distances,
    save_points,
    save_report,
    save_trained_map,
)
from ._plot import (
    emit_grid_plot,
    emit_label_distribution_plot,
    emit_polygon_distance_plot,
    emit_projected_graph_plot,
    emit_snapshot_plot,
)
from ._som import TrainedMap, Variant, state_in_data_space
from ._topology import MapGrid, NeighborhoodKernel, TrainingSchedule
from ._training import (
    default_checkpoints,
    train_batch_median,
    train_batch_relational,
    train_online_euclidean,
    train_online_relational,
)
from .exceptions import InputFormatError

# file names inside a run directory
DISSIMILARITY_FILE = "dissimilarity.csv"
POINTS_FILE = "points.csv"
LABELS_FILE = "labels.csv"
EDGES_FILE = "edges.txt"
NEIGHBOR_DISTANCES_FILE = "neighbor_distances.csv"


@dataclasses.dataclass(frozen=True)
class ExperimentInput:
    dissimilarity: DissimilarityMatrix
    # observation coordinates, when the input has any
    points: Optional[PointCloud] = None
    labels: Optional[list[str]] = None
    graph: Optional[SimpleGraph] = None


def prepare_input(
    config: ExperimentConfig,
    *,
    logger: Optional[logging.Logger] = None,
) -> ExperimentInput:
    logger = logger or logging.getLogger(__name__)
    source = config.input.source
    path = pathlib.Path(config.input.path) if config.input.path else None
    labels = (
        load_labels(pathlib.Path(config.input.labels), one_based=config.input.one_based)
        if config.input.labels is not None
        else None
    )
    logger.info(f"input: {source}")
    points: Optional[PointCloud] = None
    graph: Optional[SimpleGraph] = None
    match source:
        case "generator:uniform-square":
            points = generate_uniform_square(config.input.n, config.seed)
        case "generator:swiss-roll":
            points = generate_swiss_roll(config.input.n, config.seed)
            if labels is None:
                labels = swiss_roll_quartile_labels(points)
        case "csv-points":
            points = load_points(_required(path), header=config.input.header)
        case "edge-list":
            graph = load_edge_list(
                _required(path),
                one_based=config.input.one_based,
                labels=labels,
            )
    if config.input.coordinates is not None:
        points = load_points(
            pathlib.Path(config.input.coordinates), header=config.input.header
        )
    dissimilarity = _build_dissimilarity(config, path, points, graph, labels, logger)
    logger.info(f"dissimilarity: {config.dissimilarity_kind}, n = {dissimilarity.n}")
    return ExperimentInput(
        dissimilarity=dissimilarity,
        points=points,
        labels=labels,
        graph=graph,
    )


def _build_dissimilarity(
    config: ExperimentConfig,
    path: Optional[pathlib.Path],
    points: Optional[PointCloud],
    graph: Optional[SimpleGraph],
    labels: Optional[list[str]],
    logger: logging.Logger,
) -> DissimilarityMatrix:
    match config.dissimilarity_kind:
        case "squared-euclidean":
            return squared_euclidean(_required(points))
        case "geodesic":
            return geodesic_dissimilarity(
                _required(points), config.dissimilarity.k, logger=logger
            )
        case "shortest-path":
            return graph_shortest_path_dissimilarity(_required(graph))
        case "kimura2p":
            return kimura2p_dissimilarity(load_fasta(_required(path)))
        case "precomputed":
            return load_matrix(_required(path), labels=labels)
    raise InputFormatError(f"unknown dissimilarity: {config.dissimilarity_kind}")


def snapshot_checkpoints(variant: Variant, iterations: int) -> list[int]:
    """Initialization and five later checkpoints.

    Online runs use evenly spaced iterations (0, 500, ..., 2500 for
    T = 2500); batch runs use the epoch after each fifth of the run,
    ending on the last (0, 5, 9, 13, 17, 20 for 20 epochs).
    """
    if variant in ("online-relational", "euclidean-online"):
        return default_checkpoints(iterations)
    return sorted(
        {0} | {min(iterations, k * iterations // 5 + 1) for k in range(1, 6)}
    )


def train_map(
    config: ExperimentConfig,
    data: ExperimentInput,
    *,
    record_snapshots: bool = False,
    logger: Optional[logging.Logger] = None,
) -> TrainedMap:
    logger = logger or logging.getLogger(__name__)
    grid = MapGrid(rows=config.grid.rows, cols=config.grid.cols)
    kernel = NeighborhoodKernel(kind=config.kernel.kind)
    schedule = TrainingSchedule.for_grid(
        grid,
        config.schedule.T,
        alpha0=config.schedule.alpha0,
        plateaus=config.schedule.plateaus,
    )
    variant = config.algorithm.variant
    checkpoints = config.schedule.checkpoints or snapshot_checkpoints(
        variant, schedule.iterations
    )
    init = config.algorithm.init
    match variant:
        case "online-relational":
            return train_online_relational(
                data.dissimilarity,
                grid,
                kernel,
                schedule,
                init,
                config.seed,
                sampling=config.algorithm.sampling,
                checkpoints=checkpoints,
                record_snapshots=record_snapshots,
                warn_indefinite=config.algorithm.warn_indefinite,
                logger=logger,
            )
        case "euclidean-online":
            return train_online_euclidean(
                _required(data.points),
                grid,
                kernel,
                schedule,
                init,
                config.seed,
                sampling=config.algorithm.sampling,
                checkpoints=checkpoints,
                record_snapshots=record_snapshots,
                logger=logger,
            )
        case "batch-relational":
            return train_batch_relational(
                data.dissimilarity,
                grid,
                kernel,
                schedule,
                init,
                config.seed,
                checkpoints=checkpoints,
                record_snapshots=record_snapshots,
                logger=logger,
            )
        case "batch-median":
            return train_batch_median(
                data.dissimilarity,
                grid,
                kernel,
                schedule,
                init,
                config.seed,
                checkpoints=checkpoints,
                record_snapshots=record_snapshots,
                logger=logger,
            )
    raise InputFormatError(f"unknown variant: {variant}")


def save_input(directory: pathlib.Path, data: ExperimentInput) -> None:
    save_matrix(directory.joinpath(DISSIMILARITY_FILE), data.dissimilarity)
    if data.points is not None:
        save_points(directory.joinpath(POINTS_FILE), data.points)
    if data.labels is not None:
        save_labels(directory.joinpath(LABELS_FILE), data.labels)
    if data.graph is not None:
        save_edge_list(directory.joinpath(EDGES_FILE), data.graph)


def load_input(directory: pathlib.Path) -> ExperimentInput:
    """Read back the inputs written by `save_input`."""
    labels_path = directory.joinpath(LABELS_FILE)
    labels = load_labels(labels_path) if labels_path.exists() else None
    matrix_path = directory.joinpath(DISSIMILARITY_FILE)
    if not matrix_path.exists():
        raise InputFormatError(f'"{directory}" has no {DISSIMILARITY_FILE}')
    dissimilarity = load_matrix(matrix_path, labels=labels)
    points_path = directory.joinpath(POINTS_FILE)
    edges_path = directory.joinpath(EDGES_FILE)
    return ExperimentInput(
        dissimilarity=dissimilarity,
        points=load_points(points_path) if points_path.exists() else None,
        labels=labels,
        graph=(
            load_edge_list(edges_path, labels=labels, n_nodes=dissimilarity.n)
            if edges_path.exists()
            else None
        ),
    )


def evaluate(
    directory: pathlib.Path,
    data: ExperimentInput,
    trained_map: TrainedMap,
    *,
    logger: Optional[logging.Logger] = None,
) -> MapReport:
    logger = logger or logging.getLogger(__name__)
    report = map_report(
        data.dissimilarity,
        trained_map,
        data.labels,
        points=data.points,
    )
    logger.info(
        f"quantization error {report.quantization_error:.6g},"
        f" topographic error {report.topographic_error:.4f},"
        f" {report.empty_unit_count} empty units"
    )
    if report.purity is not None:
        logger.info(f"purity {report.purity:.4f}")
    save_report(directory, report, trained_map.grid, logger=logger)
    save_neighbor_distances(
        directory.joinpath(NEIGHBOR_DISTANCES_FILE),
        neighbor_cell_distances(data.dissimilarity, trained_map),
    )
    return report


def emit_plots(
    directory: pathlib.Path,
    data: ExperimentInput,
    trained_map: TrainedMap,
    *,
    label_colors: Optional[Mapping[str, str]] = None,
    logger: Optional[logging.Logger] = None,
) -> list[pathlib.Path]:
    logger = logger or logging.getLogger(__name__)
    grid = trained_map.grid
    emitted: list[pathlib.Path] = []
    # prototype lattice over the data
    if data.points is not None and data.points.d == 2:
        path = directory.joinpath("grid_snapshots.svg")
        if trained_map.snapshots:
            emit_snapshot_plot(
                data.points.coords,
                [
                    (
                        snapshot.iteration,
                        state_in_data_space(snapshot.state, data.points),
                    )
                    for snapshot in trained_map.snapshots
                ],
                grid,
                path,
                logger=logger,
            )
        else:
            emit_grid_plot(
                data.points.coords,
                state_in_data_space(trained_map.state, data.points),
                grid,
                path,
                title=trained_map.variant,
                logger=logger,
            )
        emitted.append(path)
    # neighbor distances
    path = directory.joinpath("polygon_distances.svg")
    emit_polygon_distance_plot(
        neighbor_cell_distances(data.dissimilarity, trained_map), path, logger=logger
    )
    emitted.append(path)
    # labels per unit
    if data.labels is not None:
        path = directory.joinpath("label_distribution.svg")
        emit_label_distribution_plot(
            label_distribution(trained_map.assignments, data.labels, grid),
            grid,
            path,
            colors=label_colors,
            logger=logger,
        )
        emitted.append(path)
    # clusters of the graph
    if data.graph is not None:
        path = directory.joinpath("projected_graph.svg")
        emit_projected_graph_plot(
            project_graph(data.graph, trained_map.assignments, grid),
            path,
            logger=logger,
        )
        emitted.append(path)
    return emitted


def run_experiment(
    config: ExperimentConfig,
    *,
    logger: Optional[logging.Logger] = None,
) -> pathlib.Path:
    logger = logger or logging.getLogger(__name__)
    directory = pathlib.Path(config.output.directory)
    logger.info(f'run experiment into "{directory}"')
    data = prepare_input(config, logger=logger)
    plot_lattice = (
        config.output.plots and data.points is not None and data.points.d == 2
    )
    trained_map = train_map(config, data, record_snapshots=plot_lattice, logger=logger)
    save_input(directory, data)
    save_trained_map(directory, trained_map, logger=logger)
    evaluate(directory, data, trained_map, logger=logger)
    if config.output.plots:
        emit_plots(
            directory,
            data,
            trained_map,
            label_colors=config.output.label_colors,
            logger=logger,
        )
    return directory


def load_run(directory: pathlib.Path) -> tuple[ExperimentInput, TrainedMap]:
    return load_input(directory), load_trained_map(directory)


def _required[T](value: Optional[T]) -> T:
    if value is None:
        raise InputFormatError("input is missing for the configured source")
    return value

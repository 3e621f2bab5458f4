from __future__ import annotations

import json
import logging
import pathlib
from typing import Any, Optional, Sequence

import jsonschema
import numpy as np
import pandas as pd
from Bio import SeqIO

from ._dissimilarity import (
    DissimilarityMatrix,
    DnaSequenceSet,
    PointCloud,
    SimpleGraph,
    validate,
)
from ._evaluation import MapReport, NeighborDistanceMap
from ._som import (
    Checkpoint,
    EuclideanPrototypes,
    MapState,
    Medoids,
    PrototypeCoefficients,
    TrainedMap,
)
from ._topology import FixedSchedule, MapGrid, NeighborhoodKernel, TrainingSchedule
from .exceptions import InputFormatError

FLOAT_FORMAT = "%.17g"


def load_json(
    path: pathlib.Path,
    *,
    schema: Optional[dict] = None,
) -> Optional[Any]:
    if not path.exists():
        return None
    with path.open(encoding="utf-8") as file:
        value = json.load(file)
    # JSON Schema validation
    if schema is not None:
        jsonschema.validate(instance=value, schema=schema)
    return value


def save_json(
    path: pathlib.Path,
    data: Any,
    *,
    schema: Optional[dict] = None,
    indent: Optional[int] = 2,
) -> None:
    # JSON Schema validation
    if schema is not None:
        jsonschema.validate(instance=data, schema=schema)
    _mkdir(path)
    with path.open(mode="w", encoding="utf-8", newline="\n") as file:
        json.dump(
            data,
            file,
            ensure_ascii=False,
            indent=indent,
            sort_keys=True,
        )
        file.write("\n")


def _mkdir(path: pathlib.Path) -> None:
    if not path.parent.exists():
        path.parent.mkdir(parents=True)


def _save_csv(path: pathlib.Path, frame: pd.DataFrame) -> None:
    _mkdir(path)
    frame.to_csv(path, index=False, lineterminator="\n", float_format=FLOAT_FORMAT)


# inputs


def load_points(path: pathlib.Path, *, header: bool = False) -> PointCloud:
    try:
        frame = pd.read_csv(path, header=None, skiprows=1 if header else 0)
        coords = frame.to_numpy(dtype=np.float64)
    except (ValueError, pd.errors.ParserError) as error:
        raise InputFormatError(f'failed to read points from "{path}": {error}')
    return PointCloud(coords)


def save_points(path: pathlib.Path, points: PointCloud) -> None:
    _mkdir(path)
    np.savetxt(path, points.coords, fmt=FLOAT_FORMAT, delimiter=",", newline="\n")


def load_matrix(
    path: pathlib.Path,
    *,
    labels: Optional[Sequence[str]] = None,
) -> DissimilarityMatrix:
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as error:
        raise InputFormatError(f'failed to read matrix from "{path}": {error}')
    return validate(values, labels=labels)


def save_matrix(path: pathlib.Path, matrix: DissimilarityMatrix) -> None:
    _mkdir(path)
    np.savetxt(path, matrix.values, fmt=FLOAT_FORMAT, delimiter=",", newline="\n")


def load_labels(path: pathlib.Path, *, one_based: bool = False) -> list[str]:
    """Read `id,label` lines; ids must cover 0..n-1 (or 1..n)."""
    try:
        frame = pd.read_csv(
            path,
            header=None,
            names=["id", "label"],
            dtype={"id": np.int64, "label": str},
            keep_default_na=False,
        )
    except (ValueError, pd.errors.ParserError) as error:
        raise InputFormatError(f'failed to read labels from "{path}": {error}')
    ids = frame["id"].to_numpy() - (1 if one_based else 0)
    if sorted(ids.tolist()) != list(range(len(ids))):
        raise InputFormatError(f'label ids in "{path}" are not 0..n-1')
    return frame["label"].to_numpy()[np.argsort(ids)].tolist()


def save_labels(path: pathlib.Path, labels: Sequence[str]) -> None:
    frame = pd.DataFrame({"id": range(len(labels)), "label": list(labels)})
    _mkdir(path)
    frame.to_csv(path, index=False, header=False, lineterminator="\n")


def load_edge_list(
    path: pathlib.Path,
    *,
    one_based: bool = False,
    labels: Optional[Sequence[str]] = None,
    n_nodes: Optional[int] = None,
) -> SimpleGraph:
    try:
        frame = pd.read_csv(path, sep=r"\s+", header=None, comment="#")
        if frame.shape[1] < 2:
            raise InputFormatError(
                f'edge list "{path}" needs two node columns: {frame.shape[1]}'
            )
        edges = frame.iloc[:, :2].to_numpy(dtype=np.int64)
    except (ValueError, pd.errors.ParserError) as error:
        raise InputFormatError(f'failed to read edge list from "{path}": {error}')
    if one_based:
        edges = edges - 1
    if n_nodes is None:
        n_nodes = len(labels) if labels is not None else int(edges.max()) + 1
    return SimpleGraph(
        n_nodes=n_nodes,
        edges=tuple((int(source), int(target)) for source, target in edges),
        labels=tuple(labels) if labels is not None else None,
    )


def save_edge_list(path: pathlib.Path, graph: SimpleGraph) -> None:
    frame = pd.DataFrame(list(graph.edges), columns=["source", "target"])
    _mkdir(path)
    frame.to_csv(path, sep=" ", index=False, header=False, lineterminator="\n")


def load_fasta(path: pathlib.Path) -> DnaSequenceSet:
    records = list(SeqIO.parse(path, "fasta"))
    if not records:
        raise InputFormatError(f'no FASTA records in "{path}"')
    return DnaSequenceSet(
        ids=tuple(record.id for record in records),
        sequences=tuple(str(record.seq) for record in records),
    )


# trained map


def jsonschema_meta() -> dict[str, Any]:
    schema = {
        "type": "object",
        "required": ["variant", "seed", "grid", "kernel", "schedule", "n"],
        "additionalProperties": False,
        "properties": {
            "variant": {
                "enum": [
                    "online-relational",
                    "batch-relational",
                    "euclidean-online",
                    "batch-median",
                ],
            },
            "seed": {"type": "integer"},
            "n": {"type": "integer", "minimum": 1},
            "grid": {
                "type": "object",
                "required": ["rows", "cols"],
                "additionalProperties": False,
                "properties": {
                    "rows": {"type": "integer", "minimum": 1},
                    "cols": {"type": "integer", "minimum": 1},
                },
            },
            "kernel": {"enum": ["hard", "gaussian"]},
            "schedule": {
                "oneOf": [
                    {
                        "type": "object",
                        "required": ["iterations", "max_radius", "alpha0", "plateaus"],
                        "additionalProperties": False,
                        "properties": {
                            "iterations": {"type": "integer", "minimum": 0},
                            "max_radius": {"type": "integer", "minimum": 0},
                            "alpha0": {"type": "number"},
                            "plateaus": {"type": "integer", "minimum": 1},
                        },
                    },
                    {
                        "type": "object",
                        "required": ["iterations", "alpha", "radius"],
                        "additionalProperties": False,
                        "properties": {
                            "iterations": {"type": "integer", "minimum": 0},
                            "alpha": {"type": "number"},
                            "radius": {"type": "number"},
                        },
                    },
                ],
            },
        },
    }
    return schema


def save_trained_map(
    directory: pathlib.Path,
    trained_map: TrainedMap,
    *,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or logging.getLogger(__name__)
    grid = trained_map.grid
    logger.info(f'save trained map to "{directory}"')
    # meta.json
    save_json(
        directory.joinpath("meta.json"),
        {
            "variant": trained_map.variant,
            "seed": trained_map.seed,
            "n": trained_map.n,
            "grid": {"rows": grid.rows, "cols": grid.cols},
            "kernel": trained_map.kernel.kind,
            "schedule": _schedule_to_json(trained_map.schedule),
        },
        schema=jsonschema_meta(),
    )
    # assignments.csv
    rows, cols = np.divmod(trained_map.assignments, grid.cols)
    _save_csv(
        directory.joinpath("assignments.csv"),
        pd.DataFrame(
            {
                "observation_id": np.arange(trained_map.n),
                "unit": trained_map.assignments,
                "row": rows,
                "col": cols,
            }
        ),
    )
    # history.csv
    _save_csv(
        directory.joinpath("history.csv"),
        pd.DataFrame(
            {
                "iteration": [c.iteration for c in trained_map.history],
                "quantization_error": [
                    c.quantization_error for c in trained_map.history
                ],
            }
        ),
    )
    # trace.csv
    if trained_map.samples is not None and trained_map.winners is not None:
        _save_csv(
            directory.joinpath("trace.csv"),
            pd.DataFrame(
                {
                    "iteration": np.arange(1, trained_map.samples.size + 1),
                    "observation_id": trained_map.samples,
                    "unit": trained_map.winners,
                }
            ),
        )
    # state
    _save_state(directory, trained_map.state)


def _save_state(directory: pathlib.Path, state: MapState) -> None:
    match state:
        case PrototypeCoefficients():
            path = directory.joinpath("coefficients.csv")
            _mkdir(path)
            np.savetxt(path, state.values, fmt=FLOAT_FORMAT, delimiter=",")
        case EuclideanPrototypes():
            path = directory.joinpath("prototypes.csv")
            _mkdir(path)
            np.savetxt(path, state.vectors, fmt=FLOAT_FORMAT, delimiter=",")
        case Medoids():
            _save_csv(
                directory.joinpath("medoids.csv"),
                pd.DataFrame(
                    {
                        "unit": np.arange(state.indices.size),
                        "observation_id": state.indices,
                    }
                ),
            )


def load_trained_map(directory: pathlib.Path) -> TrainedMap:
    meta = load_json(directory.joinpath("meta.json"), schema=jsonschema_meta())
    if meta is None:
        raise InputFormatError(f'"{directory}" has no meta.json')
    grid = MapGrid(rows=meta["grid"]["rows"], cols=meta["grid"]["cols"])
    assignments = pd.read_csv(directory.joinpath("assignments.csv"))
    history = pd.read_csv(directory.joinpath("history.csv"))
    trace_path = directory.joinpath("trace.csv")
    trace = pd.read_csv(trace_path) if trace_path.exists() else None
    return TrainedMap(
        variant=meta["variant"],
        grid=grid,
        kernel=NeighborhoodKernel(kind=meta["kernel"]),
        schedule=_schedule_from_json(meta["schedule"]),
        seed=meta["seed"],
        state=_load_state(directory, meta["variant"]),
        assignments=assignments["unit"].to_numpy(dtype=np.int64),
        history=[
            Checkpoint(
                iteration=int(row.iteration),
                quantization_error=float(row.quantization_error),
            )
            for row in history.itertuples(index=False)
        ],
        samples=(
            trace["observation_id"].to_numpy(dtype=np.int64)
            if trace is not None
            else None
        ),
        winners=trace["unit"].to_numpy(dtype=np.int64) if trace is not None else None,
    )


def _load_state(directory: pathlib.Path, variant: str) -> MapState:
    match variant:
        case "online-relational" | "batch-relational":
            values = np.loadtxt(
                directory.joinpath("coefficients.csv"), delimiter=",", ndmin=2
            )
            return PrototypeCoefficients(values)
        case "euclidean-online":
            vectors = np.loadtxt(
                directory.joinpath("prototypes.csv"), delimiter=",", ndmin=2
            )
            return EuclideanPrototypes(vectors)
        case "batch-median":
            medoids = pd.read_csv(directory.joinpath("medoids.csv"))
            return Medoids(medoids["observation_id"].to_numpy(dtype=np.int64))
    raise InputFormatError(f"unknown variant: {variant}")


def _schedule_to_json(schedule: object) -> dict[str, Any]:
    match schedule:
        case TrainingSchedule():
            return {
                "iterations": schedule.iterations,
                "max_radius": schedule.max_radius,
                "alpha0": schedule.alpha0,
                "plateaus": schedule.plateaus,
            }
        case FixedSchedule():
            return {
                "iterations": schedule.iterations,
                "alpha": schedule.alpha,
                "radius": schedule.radius,
            }
    raise InputFormatError(f"unknown schedule: {type(schedule)}")


def _schedule_from_json(value: dict[str, Any]) -> TrainingSchedule | FixedSchedule:
    if "plateaus" in value:
        return TrainingSchedule(**value)
    return FixedSchedule(**value)


# reports


def jsonschema_report() -> dict[str, Any]:
    schema = {
        "type": "object",
        "required": [
            "quantization_error",
            "topographic_error",
            "empty_unit_count",
            "purity",
        ],
        "additionalProperties": False,
        "properties": {
            "quantization_error": {"type": "number"},
            "topographic_error": {"type": "number", "minimum": 0, "maximum": 1},
            "empty_unit_count": {"type": "integer", "minimum": 0},
            "purity": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
        },
    }
    return schema


def save_report(
    directory: pathlib.Path,
    report: MapReport,
    grid: MapGrid,
    *,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or logging.getLogger(__name__)
    logger.info(f'save report to "{directory}"')
    save_json(
        directory.joinpath("report.json"),
        {
            "quantization_error": report.quantization_error,
            "topographic_error": report.topographic_error,
            "empty_unit_count": report.empty_unit_count,
            "purity": report.purity,
        },
        schema=jsonschema_report(),
    )
    units = pd.DataFrame(
        {
            "unit": np.arange(grid.size),
            "row": grid.coordinates[:, 0],
            "col": grid.coordinates[:, 1],
            "size": report.cluster_sizes,
        }
    )
    if report.unit_purity is not None and report.unit_majority is not None:
        units["purity"] = report.unit_purity
        units["majority"] = list(report.unit_majority)
    _save_csv(directory.joinpath("units.csv"), units)


def save_neighbor_distances(
    path: pathlib.Path,
    distances: NeighborDistanceMap,
) -> None:
    pairs = list(distances.values)
    _save_csv(
        path,
        pd.DataFrame(
            {
                "unit": [u for u, _ in pairs],
                "neighbor": [v for _, v in pairs],
                "distance": [
                    np.nan if value is None else value
                    for value in distances.values.values()
                ],
            }
        ),
    )


def load_neighbor_distances(path: pathlib.Path, grid: MapGrid) -> NeighborDistanceMap:
    frame = pd.read_csv(path)
    values: dict[tuple[int, int], Optional[float]] = {
        (int(row.unit), int(row.neighbor)): (
            None if pd.isna(row.distance) else float(row.distance)
        )
        for row in frame.itertuples(index=False)
    }
    return NeighborDistanceMap(grid=grid, values=values)


# benchmark


def save_benchmark(path: pathlib.Path, frame: pd.DataFrame) -> None:
    _save_csv(path, frame)

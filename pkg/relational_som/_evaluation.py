from __future__ import annotations

import dataclasses
import itertools
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from ._dissimilarity import DissimilarityMatrix, PointCloud, SimpleGraph
from ._som import TrainedMap, unit_distances
from ._topology import MapGrid
from .exceptions import DimensionMismatchError, DimensionNot2DError


@dataclasses.dataclass(frozen=True)
class MapReport:
    quantization_error: float
    topographic_error: float
    cluster_sizes: npt.NDArray[np.int64]
    empty_unit_count: int
    # only when labels are given; NaN for empty units
    unit_purity: Optional[npt.NDArray[np.float64]] = None
    unit_majority: Optional[tuple[Optional[str], ...]] = None
    purity: Optional[float] = None


@dataclasses.dataclass(frozen=True)
class NeighborDistanceMap:
    """Mean dissimilarity between members of grid-adjacent units.

    `values` maps each adjacent pair (u, v), u < v, to the mean of
    delta_ij over i in u and j in v; None when either unit is empty.
    """

    grid: MapGrid
    values: dict[tuple[int, int], Optional[float]]

    def distance(self, u: int, v: int) -> Optional[float]:
        return self.values[(min(u, v), max(u, v))]

    def max_distance(self) -> float:
        defined = [value for value in self.values.values() if value is not None]
        return max(defined, default=0.0)


@dataclasses.dataclass(frozen=True)
class ProjectedGraph:
    """Graph of clusters: sizes per unit and edge counts per unit pair."""

    grid: MapGrid
    sizes: npt.NDArray[np.int64]
    edge_counts: dict[tuple[int, int], int]


@dataclasses.dataclass(frozen=True)
class LabelDistribution:
    labels: tuple[str, ...]
    # U×L counts, columns ordered as `labels`
    counts: npt.NDArray[np.int64]


def map_report(
    dissimilarity: Optional[DissimilarityMatrix],
    trained_map: TrainedMap,
    labels: Optional[Sequence[str]] = None,
    *,
    points: Optional[PointCloud] = None,
) -> MapReport:
    distances = unit_distances(dissimilarity, trained_map.state, points=points)
    n, units = distances.shape
    if labels is not None and len(labels) != n:
        raise DimensionMismatchError(f"{len(labels)} labels for {n} observations")
    best = np.argmin(distances, axis=1)
    quantization_error = float(distances[np.arange(n), best].mean())
    topographic_error = _topographic_error(distances, best, trained_map.grid)
    sizes = np.bincount(best, minlength=units).astype(np.int64)
    report = MapReport(
        quantization_error=quantization_error,
        topographic_error=topographic_error,
        cluster_sizes=sizes,
        empty_unit_count=int(np.sum(sizes == 0)),
    )
    if labels is None:
        return report
    distribution = label_distribution(best, labels, trained_map.grid)
    majority_counts = distribution.counts.max(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit_purity = np.where(sizes > 0, majority_counts / sizes, np.nan)
    # argmax picks the first label in sorted order on ties
    majority = tuple(
        distribution.labels[int(np.argmax(row))] if size > 0 else None
        for row, size in zip(distribution.counts, sizes)
    )
    return dataclasses.replace(
        report,
        unit_purity=unit_purity,
        unit_majority=majority,
        purity=float(majority_counts.sum() / n),
    )


def _topographic_error(
    distances: npt.NDArray[np.float64],
    best: npt.NDArray[np.int64],
    grid: MapGrid,
) -> float:
    n, units = distances.shape
    if units < 2:
        return 0.0
    masked = distances.copy()
    masked[np.arange(n), best] = np.inf
    second = np.argmin(masked, axis=1)
    return float(np.mean(grid.distances[best, second] != 1))


def neighbor_cell_distances(
    dissimilarity: DissimilarityMatrix,
    trained_map: TrainedMap,
) -> NeighborDistanceMap:
    return neighbor_distances_from_assignments(
        dissimilarity,
        trained_map.assignments,
        trained_map.grid,
    )


def neighbor_distances_from_assignments(
    dissimilarity: DissimilarityMatrix,
    assignments: npt.NDArray[np.int64],
    grid: MapGrid,
) -> NeighborDistanceMap:
    if assignments.size != dissimilarity.n:
        raise DimensionMismatchError(
            f"{assignments.size} assignments for n = {dissimilarity.n}"
        )
    members = [np.flatnonzero(assignments == unit) for unit in range(grid.size)]
    values: dict[tuple[int, int], Optional[float]] = {}
    for u, v in grid.adjacent_pairs():
        if members[u].size == 0 or members[v].size == 0:
            values[(u, v)] = None
            continue
        values[(u, v)] = float(
            dissimilarity.values[np.ix_(members[u], members[v])].mean()
        )
    return NeighborDistanceMap(grid=grid, values=values)


def label_distribution(
    assignments: npt.NDArray[np.int64],
    labels: Sequence[str],
    grid: MapGrid,
) -> LabelDistribution:
    if len(labels) != assignments.size:
        raise DimensionMismatchError(
            f"{len(labels)} labels for {assignments.size} observations"
        )
    names, codes = np.unique(np.asarray(labels, dtype=str), return_inverse=True)
    counts = np.zeros((grid.size, names.size), dtype=np.int64)
    np.add.at(counts, (assignments, codes.ravel()), 1)
    return LabelDistribution(labels=tuple(str(name) for name in names), counts=counts)


def project_graph(
    graph: SimpleGraph,
    assignments: npt.NDArray[np.int64],
    grid: MapGrid,
) -> ProjectedGraph:
    if assignments.size != graph.n_nodes:
        raise DimensionMismatchError(
            f"{assignments.size} assignments for {graph.n_nodes} nodes"
        )
    counts: dict[tuple[int, int], int] = {}
    for source, target in graph.edges:
        u, v = sorted((int(assignments[source]), int(assignments[target])))
        counts[(u, v)] = counts.get((u, v), 0) + 1
    return ProjectedGraph(
        grid=grid,
        sizes=np.bincount(assignments, minlength=grid.size).astype(np.int64),
        edge_counts=dict(sorted(counts.items())),
    )


def lattice_segments(
    prototypes: npt.NDArray[np.float64],
    grid: MapGrid,
) -> list[tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]]:
    if prototypes.ndim != 2 or prototypes.shape[1] != 2:
        raise DimensionNot2DError(f"prototypes must be U×2: {prototypes.shape}")
    if prototypes.shape[0] != grid.size:
        raise DimensionMismatchError(
            f"{prototypes.shape[0]} prototypes for {grid.size} units"
        )
    return [(prototypes[u], prototypes[v]) for u, v in grid.adjacent_pairs()]


def lattice_crossings(
    prototypes: npt.NDArray[np.float64],
    grid: MapGrid,
) -> int:
    """Number of crossing lattice-edge pairs that share no endpoint."""
    pairs = grid.adjacent_pairs()
    segments = lattice_segments(prototypes, grid)
    crossings = 0
    for (first, a), (second, b) in itertools.combinations(zip(pairs, segments), 2):
        if set(first) & set(second):
            continue
        if _segments_intersect(a[0], a[1], b[0], b[1]):
            crossings += 1
    return crossings


def _segments_intersect(
    p1: npt.NDArray[np.float64],
    p2: npt.NDArray[np.float64],
    q1: npt.NDArray[np.float64],
    q2: npt.NDArray[np.float64],
) -> bool:
    d1 = _orientation(q1, q2, p1)
    d2 = _orientation(q1, q2, p2)
    d3 = _orientation(p1, p2, q1)
    d4 = _orientation(p1, p2, q2)
    if d1 * d2 < 0.0 and d3 * d4 < 0.0:
        return True
    # collinear touching
    return (
        (d1 == 0.0 and _on_segment(q1, q2, p1))
        or (d2 == 0.0 and _on_segment(q1, q2, p2))
        or (d3 == 0.0 and _on_segment(p1, p2, q1))
        or (d4 == 0.0 and _on_segment(p1, p2, q2))
    )


def _orientation(
    a: npt.NDArray[np.float64],
    b: npt.NDArray[np.float64],
    c: npt.NDArray[np.float64],
) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _on_segment(
    a: npt.NDArray[np.float64],
    b: npt.NDArray[np.float64],
    c: npt.NDArray[np.float64],
) -> bool:
    return bool(
        min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
    )


def swiss_roll_quartile_labels(points: PointCloud) -> list[str]:
    """Quartile of the roll parameter t = ||(x, z)|| as "q1".."q4"."""
    if points.d != 3:
        raise DimensionMismatchError(f"swiss roll points are 3D: d = {points.d}")
    t = np.hypot(points.coords[:, 0], points.coords[:, 2])
    bounds = np.quantile(t, [0.25, 0.5, 0.75])
    quartile = np.searchsorted(bounds, t, side="right")
    return [f"q{int(q) + 1}" for q in quartile]

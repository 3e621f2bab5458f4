from __future__ import annotations

import dataclasses
import logging
import math
import pathlib
from typing import Any, Mapping, Optional, Sequence

import matplotlib
import numpy as np
import numpy.typing as npt
from matplotlib.axes import Axes
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from matplotlib.patches import Circle, Patch, Polygon, Rectangle, Wedge

from ._evaluation import (
    LabelDistribution,
    NeighborDistanceMap,
    ProjectedGraph,
    lattice_segments,
)
from ._topology import MapGrid
from .exceptions import DimensionNot2DError

# fixed hash salt and no date metadata: identical inputs give identical files
_SVG_RC: dict[str, Any] = {
    "svg.hashsalt": "relational-som",
    "svg.fonttype": "none",
}
_SVG_METADATA: dict[str, Any] = {"Date": None}

# up, right, down, left
_DIRECTIONS = ((-1, 0), (0, 1), (1, 0), (0, -1))


@dataclasses.dataclass(frozen=True)
class CellPolygon:
    unit: int
    # 4×2 vertices ordered up, right, down, left
    vertices: npt.NDArray[np.float64]
    has_undefined: bool


def emit_grid_plot(
    points: npt.ArrayLike,
    prototypes: npt.ArrayLike,
    grid: MapGrid,
    path: pathlib.Path,
    *,
    title: Optional[str] = None,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or logging.getLogger(__name__)
    figure = Figure(figsize=(5.0, 5.0))
    _draw_lattice(figure.add_subplot(), points, prototypes, grid, title)
    _save_svg(figure, path, logger)


def emit_snapshot_plot(
    points: npt.ArrayLike,
    snapshots: Sequence[tuple[int, npt.ArrayLike]],
    grid: MapGrid,
    path: pathlib.Path,
    *,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or logging.getLogger(__name__)
    columns = min(3, max(1, len(snapshots)))
    rows = max(1, math.ceil(len(snapshots) / columns))
    figure = Figure(figsize=(4.0 * columns, 4.0 * rows))
    for index, (iteration, prototypes) in enumerate(snapshots):
        axes = figure.add_subplot(rows, columns, index + 1)
        _draw_lattice(axes, points, prototypes, grid, f"iteration {iteration}")
    _save_svg(figure, path, logger)


def _draw_lattice(
    axes: Axes,
    points: npt.ArrayLike,
    prototypes: npt.ArrayLike,
    grid: MapGrid,
    title: Optional[str],
) -> None:
    data = _as_2d(points, "points")
    vectors = _as_2d(prototypes, "prototypes")
    segments = lattice_segments(vectors, grid)
    axes.scatter(data[:, 0], data[:, 1], s=4, c="0.7", gid="data")
    axes.add_collection(
        LineCollection(
            [np.stack(segment) for segment in segments],
            colors="tab:red",
            linewidths=0.8,
            gid="lattice",
        )
    )
    axes.scatter(vectors[:, 0], vectors[:, 1], s=10, c="tab:red", gid="prototypes")
    axes.set_aspect("equal")
    if title is not None:
        axes.set_title(title)


def distance_polygons(distances: NeighborDistanceMap) -> list[CellPolygon]:
    """Per-cell polygons; the largest distance maps to the cell center.

    A vertex sits at offset 0.5 * (1 - d / d_max) from the center toward
    the shared edge, so zero distance lands on the edge. Undefined (empty)
    neighbors are drawn on the edge. Directions off the grid take the mean
    offset of the cell's defined neighbors, so equal distances everywhere
    give congruent polygons.
    """
    grid = distances.grid
    largest = distances.max_distance()
    polygons: list[CellPolygon] = []
    for unit in range(grid.size):
        row, col = grid.unit_coord(unit)
        center = _cell_center(grid, unit)
        offsets: list[Optional[float]] = []
        defined: list[float] = []
        has_undefined = False
        for d_row, d_col in _DIRECTIONS:
            if not (0 <= row + d_row < grid.rows and 0 <= col + d_col < grid.cols):
                # off the grid, filled in below
                offsets.append(None)
                continue
            value = distances.distance(unit, (row + d_row) * grid.cols + col + d_col)
            if value is None:
                has_undefined = True
                offsets.append(0.5)
                continue
            offset = 0.5 * (1.0 - value / largest) if largest > 0.0 else 0.5
            defined.append(offset)
            offsets.append(offset)
        border = float(np.mean(defined)) if defined else 0.5
        vertices = np.empty((4, 2))
        for index, (side, (d_row, d_col)) in enumerate(zip(offsets, _DIRECTIONS)):
            # rows grow downward on the plot
            vertices[index] = center + (border if side is None else side) * np.array(
                [d_col, -d_row]
            )
        polygons.append(
            CellPolygon(unit=unit, vertices=vertices, has_undefined=has_undefined)
        )
    return polygons


def emit_polygon_distance_plot(
    distances: NeighborDistanceMap,
    path: pathlib.Path,
    *,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or logging.getLogger(__name__)
    grid = distances.grid
    figure = Figure(figsize=(0.5 * grid.cols + 1.0, 0.5 * grid.rows + 1.0))
    axes = figure.add_subplot()
    _draw_cells(axes, grid)
    for polygon in distance_polygons(distances):
        axes.add_patch(
            Polygon(
                polygon.vertices,
                closed=True,
                facecolor="tab:blue",
                edgecolor="tab:orange" if polygon.has_undefined else "black",
                linestyle="--" if polygon.has_undefined else "-",
                linewidth=0.6,
                gid=f"cell-{polygon.unit}",
            )
        )
    _finish_cells(axes, grid)
    _save_svg(figure, path, logger)


def emit_label_distribution_plot(
    distribution: LabelDistribution,
    grid: MapGrid,
    path: pathlib.Path,
    *,
    colors: Optional[Mapping[str, str]] = None,
    logger: Optional[logging.Logger] = None,
) -> None:
    """One pie per cell, radius proportional to sqrt(size / largest size)."""
    logger = logger or logging.getLogger(__name__)
    palette = _label_colors(distribution.labels, colors)
    sizes = distribution.counts.sum(axis=1)
    largest = max(int(sizes.max()), 1)
    figure = Figure(figsize=(0.5 * grid.cols + 2.5, 0.5 * grid.rows + 1.0))
    axes = figure.add_subplot()
    _draw_cells(axes, grid)
    for unit, counts in enumerate(distribution.counts):
        if sizes[unit] == 0:
            continue
        center = _cell_center(grid, unit)
        radius = 0.45 * math.sqrt(sizes[unit] / largest)
        start = 90.0
        for label, count in zip(distribution.labels, counts):
            if count == 0:
                continue
            sweep = 360.0 * count / sizes[unit]
            axes.add_patch(
                Wedge(
                    center,
                    radius,
                    start,
                    start + sweep,
                    facecolor=palette[label],
                    edgecolor="white",
                    linewidth=0.3,
                )
            )
            start += sweep
    axes.legend(
        handles=[
            Patch(facecolor=palette[label], label=label)
            for label in distribution.labels
        ],
        loc="center left",
        bbox_to_anchor=(1.0, 0.5),
        frameon=False,
    )
    _finish_cells(axes, grid)
    _save_svg(figure, path, logger)


def emit_projected_graph_plot(
    projected: ProjectedGraph,
    path: pathlib.Path,
    *,
    logger: Optional[logging.Logger] = None,
) -> None:
    """Disk area proportional to cluster size, width to inter-cluster edges."""
    logger = logger or logging.getLogger(__name__)
    grid = projected.grid
    largest = max(int(projected.sizes.max()), 1)
    between = {
        pair: count
        for pair, count in projected.edge_counts.items()
        if pair[0] != pair[1]
    }
    most = max(between.values(), default=1)
    figure = Figure(figsize=(0.5 * grid.cols + 1.0, 0.5 * grid.rows + 1.0))
    axes = figure.add_subplot()
    _draw_cells(axes, grid)
    if between:
        axes.add_collection(
            LineCollection(
                [
                    np.stack([_cell_center(grid, u), _cell_center(grid, v)])
                    for u, v in between
                ],
                linewidths=[0.5 + 4.0 * count / most for count in between.values()],
                colors="0.4",
                gid="projected-edges",
            )
        )
    for unit, size in enumerate(projected.sizes):
        if size == 0:
            continue
        axes.add_patch(
            Circle(
                _cell_center(grid, unit),
                0.45 * math.sqrt(size / largest),
                facecolor="tab:green",
                edgecolor="black",
                linewidth=0.3,
                zorder=3,
            )
        )
    _finish_cells(axes, grid)
    _save_svg(figure, path, logger)


def _cell_center(grid: MapGrid, unit: int) -> npt.NDArray[np.float64]:
    row, col = grid.unit_coord(unit)
    return np.array([col + 0.5, grid.rows - row - 0.5])


def _draw_cells(axes: Axes, grid: MapGrid) -> None:
    for unit in range(grid.size):
        row, col = grid.unit_coord(unit)
        axes.add_patch(
            Rectangle(
                (col, grid.rows - row - 1),
                1.0,
                1.0,
                facecolor="none",
                edgecolor="0.6",
                linewidth=0.4,
            )
        )


def _finish_cells(axes: Axes, grid: MapGrid) -> None:
    axes.set_xlim(0.0, grid.cols)
    axes.set_ylim(0.0, grid.rows)
    axes.set_aspect("equal")
    axes.set_axis_off()


def _label_colors(
    labels: Sequence[str],
    colors: Optional[Mapping[str, str]],
) -> dict[str, Any]:
    colormap = matplotlib.colormaps["tab10"]
    palette: dict[str, Any] = {
        label: colormap(index % colormap.N) for index, label in enumerate(labels)
    }
    if colors is not None:
        palette.update(
            {label: color for label, color in colors.items() if label in palette}
        )
    return palette


def _as_2d(values: npt.ArrayLike, name: str) -> npt.NDArray[np.float64]:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 2 or array.shape[1] != 2:
        raise DimensionNot2DError(f"{name} must be 2D for plotting: {array.shape}")
    return array


def _save_svg(
    figure: Figure,
    path: pathlib.Path,
    logger: logging.Logger,
) -> None:
    if not path.parent.exists():
        path.parent.mkdir(parents=True)
    logger.info(f'save "{path}"')
    with matplotlib.rc_context(_SVG_RC):
        figure.savefig(path, format="svg", metadata=_SVG_METADATA)

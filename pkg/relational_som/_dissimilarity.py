from __future__ import annotations

import dataclasses
import logging
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.spatial.distance import pdist, squareform

from .exceptions import (
    AsymmetryBeyondToleranceError,
    DimensionMismatchError,
    DisconnectedGraphError,
    DisconnectedNeighborGraphError,
    InvalidGraphError,
    InvalidPointCloudError,
    KTooLargeError,
    NegativeEntryError,
    NoComparableSitesError,
    NonFiniteEntryError,
    NonZeroDiagonalError,
    NotSquareError,
    SequenceLengthError,
    UndefinedDistanceError,
)

# relative tolerance of the symmetry check, plus an absolute floor for zeros
SYMMETRY_RTOL = 1.0e-9
SYMMETRY_ATOL = 1.0e-12
DIAGONAL_ATOL = 1.0e-12


@dataclasses.dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric, non-negative, zero-diagonal n×n matrix.

    Instances are only built by `validate` and the builders below, which
    guarantee the invariants bit-exactly; the stored array is read-only.
    """

    values: npt.NDArray[np.float64]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.labels is not None and len(self.labels) != self.n:
            raise DimensionMismatchError(
                f"{len(self.labels)} labels given for {self.n} observations"
            )

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


@dataclasses.dataclass(frozen=True)
class PointCloud:
    coords: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise InvalidPointCloudError(
                f"point cloud must be an n×d array with n, d >= 1: {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise InvalidPointCloudError("point cloud has non-finite coordinates")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    @property
    def d(self) -> int:
        return int(self.coords.shape[1])


@dataclasses.dataclass(frozen=True)
class SimpleGraph:
    """Undirected unweighted graph on nodes 0..n_nodes-1."""

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise InvalidGraphError(f"graph needs at least one node: {self.n_nodes}")
        normalized: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for source, target in self.edges:
            if not (0 <= source < self.n_nodes and 0 <= target < self.n_nodes):
                raise InvalidGraphError(
                    f"edge ({source}, {target}) is out of range [0, {self.n_nodes})"
                )
            if source == target:
                raise InvalidGraphError(f"self-loop on node {source}")
            edge = (min(source, target), max(source, target))
            if edge in seen:
                raise InvalidGraphError(f"duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        if self.labels is not None and len(self.labels) != self.n_nodes:
            raise InvalidGraphError(
                f"{len(self.labels)} labels given for {self.n_nodes} nodes"
            )

    def adjacency(self) -> csr_matrix:
        rows = [edge[0] for edge in self.edges] + [edge[1] for edge in self.edges]
        cols = [edge[1] for edge in self.edges] + [edge[0] for edge in self.edges]
        return csr_matrix(
            (np.ones(len(rows)), (rows, cols)),
            shape=(self.n_nodes, self.n_nodes),
        )


@dataclasses.dataclass(frozen=True)
class DnaSequenceSet:
    ids: tuple[str, ...]
    sequences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.sequences:
            raise SequenceLengthError("no sequences")
        if len(self.ids) != len(self.sequences):
            raise SequenceLengthError(
                f"{len(self.ids)} ids given for {len(self.sequences)} sequences"
            )
        lengths = {len(sequence) for sequence in self.sequences}
        if len(lengths) != 1:
            raise SequenceLengthError(
                f"sequences are not aligned: lengths {sorted(lengths)}"
            )
        if 0 in lengths:
            raise SequenceLengthError("sequences are empty")
        object.__setattr__(
            self,
            "sequences",
            tuple(sequence.lower() for sequence in self.sequences),
        )

    @property
    def length(self) -> int:
        return len(self.sequences[0])


def validate(
    matrix: npt.ArrayLike,
    *,
    labels: Optional[Sequence[str]] = None,
) -> DissimilarityMatrix:
    values = np.array(matrix, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1] or values.size == 0:
        raise NotSquareError(f"dissimilarity matrix is not square: {values.shape}")
    # finite
    if bad := _first_index(~np.isfinite(values)):
        raise NonFiniteEntryError(*bad)
    # diagonal
    diagonal = np.diagonal(values)
    if bad := _first_index(np.abs(diagonal) > DIAGONAL_ATOL):
        raise NonZeroDiagonalError(bad[0])
    np.fill_diagonal(values, 0.0)
    # non negative
    if bad := _first_index(values < 0.0):
        raise NegativeEntryError(*bad)
    # symmetric
    transposed = values.T
    tolerance = (
        SYMMETRY_RTOL * np.maximum(np.abs(values), np.abs(transposed)) + SYMMETRY_ATOL
    )
    if bad := _first_index(np.abs(values - transposed) > tolerance):
        raise AsymmetryBeyondToleranceError(*bad)
    values = (values + transposed) / 2.0
    return DissimilarityMatrix(
        values,
        labels=tuple(labels) if labels is not None else None,
    )


def _first_index(mask: npt.NDArray[np.bool_]) -> Optional[tuple[int, ...]]:
    found = np.argwhere(mask)
    if found.shape[0] == 0:
        return None
    return tuple(int(index) for index in found[0])


def squared_euclidean(points: PointCloud) -> DissimilarityMatrix:
    # pdist evaluates each pair once, squareform mirrors it
    return DissimilarityMatrix(squareform(pdist(points.coords, "sqeuclidean")))


def geodesic_dissimilarity(
    points: PointCloud,
    k: int,
    *,
    logger: Optional[logging.Logger] = None,
) -> DissimilarityMatrix:
    logger = logger or logging.getLogger(__name__)
    n = points.n
    if k < 1 or k >= n:
        raise KTooLargeError(f"k must satisfy 1 <= k < n = {n}: k = {k}")
    euclidean = squareform(pdist(points.coords, "euclidean"))
    # k nearest neighbors, ties broken by lower index
    ranking = euclidean.copy()
    np.fill_diagonal(ranking, np.inf)
    neighbors = np.argsort(ranking, axis=1, kind="stable")[:, :k]
    adjacency = np.zeros((n, n), dtype=bool)
    adjacency[np.repeat(np.arange(n), k), neighbors.ravel()] = True
    # OR-rule
    adjacency |= adjacency.T
    rows, cols = np.nonzero(adjacency)
    graph = csr_matrix((euclidean[rows, cols], (rows, cols)), shape=(n, n))
    logger.debug(f"K-rule graph: k={k}, {rows.size // 2} edges")
    _check_connected(graph, DisconnectedNeighborGraphError)
    distances = shortest_path(graph, method="D", directed=False)
    return DissimilarityMatrix(_exact_symmetric(distances))


def graph_shortest_path_dissimilarity(graph: SimpleGraph) -> DissimilarityMatrix:
    adjacency = graph.adjacency()
    _check_connected(adjacency, DisconnectedGraphError)
    distances = shortest_path(adjacency, directed=False, unweighted=True)
    return DissimilarityMatrix(_exact_symmetric(distances), labels=graph.labels)


def _check_connected(
    graph: csr_matrix,
    error: type[DisconnectedGraphError] | type[DisconnectedNeighborGraphError],
) -> None:
    count, component = connected_components(graph, directed=False)
    if count > 1:
        sizes = sorted(np.bincount(component).tolist(), reverse=True)
        raise error(sizes)


def _exact_symmetric(distances: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    # per-source sums may differ in the last bit between (i, j) and (j, i)
    symmetric = np.minimum(distances, distances.T)
    np.fill_diagonal(symmetric, 0.0)
    return symmetric


# a, g are purines; c, t are pyrimidines; everything else is a gap
_NUCLEOTIDE_CODES = {"a": 0, "g": 1, "c": 2, "t": 3}


def _encode(sequences: Sequence[str]) -> npt.NDArray[np.int8]:
    table = np.full(128, -1, dtype=np.int8)
    for nucleotide, code in _NUCLEOTIDE_CODES.items():
        table[ord(nucleotide)] = code
    raw = np.frombuffer(
        "".join(sequences).encode("ascii", "replace"),
        dtype=np.uint8,
    )
    return table[raw].reshape(len(sequences), -1)


def kimura2p_dissimilarity(sequences: DnaSequenceSet) -> DissimilarityMatrix:
    codes = _encode(sequences.sequences)
    comparable = codes >= 0
    purine = codes < 2
    n = codes.shape[0]
    values = np.zeros((n, n))
    for i in range(n - 1):
        others = slice(i + 1, n)
        sites = comparable[i] & comparable[others]
        site_count = sites.sum(axis=1)
        differ = sites & (codes[i] != codes[others])
        transitions = (differ & (purine[i] == purine[others])).sum(axis=1)
        transversions = (differ & (purine[i] != purine[others])).sum(axis=1)
        for offset in range(n - i - 1):
            j = i + 1 + offset
            values[i, j] = values[j, i] = _kimura2p(
                int(transitions[offset]),
                int(transversions[offset]),
                int(site_count[offset]),
                i,
                j,
            )
    return DissimilarityMatrix(values, labels=sequences.ids)


def _kimura2p(
    transitions: int,
    transversions: int,
    sites: int,
    i: int,
    j: int,
) -> float:
    if sites == 0:
        raise NoComparableSitesError(i, j)
    p = transitions / sites
    q = transversions / sites
    first = 1.0 - 2.0 * p - 2.0 * q
    second = 1.0 - 2.0 * q
    if first <= 0.0 or second <= 0.0:
        raise UndefinedDistanceError(i, j)
    # adding 0.0 turns -0.0 into 0.0 for identical sequences
    return float(-0.5 * np.log(first * np.sqrt(second))) + 0.0

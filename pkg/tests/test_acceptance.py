"""Long-running organization and scaling experiments (run with --runslow)."""

import os
import pathlib

import numpy as np
import pytest
from scipy.sparse.csgraph import breadth_first_order

from relational_som import (
    MapGrid,
    NeighborhoodKernel,
    PointCloud,
    TrainingSchedule,
    benchmark_scaling,
    generate_swiss_roll,
    generate_uniform_square,
    geodesic_dissimilarity,
    graph_shortest_path_dissimilarity,
    lattice_crossings,
    load_edge_list,
    load_labels,
    map_report,
    squared_euclidean,
    swiss_roll_quartile_labels,
    train_batch_median,
    train_batch_relational,
    train_online_euclidean,
    train_online_relational,
    validate,
)
from relational_som._som import state_in_data_space

pytestmark = pytest.mark.slow

HARD = NeighborhoodKernel("hard")


def test_simplex_preserved():
    rng = np.random.default_rng(0)
    grid = MapGrid(rows=5, cols=5)
    schedule = TrainingSchedule.for_grid(grid, 1000)
    for seed in range(100):
        values = np.triu(rng.uniform(0.1, 1.0, size=(50, 50)), 1)
        trained = train_online_relational(
            validate(values + values.T),
            grid,
            HARD,
            schedule,
            "random-convex",
            seed,
            checkpoints=range(0, 1001, 50),
            record_snapshots=True,
        )
        for snapshot in trained.snapshots:
            beta = snapshot.state.values
            assert np.all(beta >= 0.0)
            np.testing.assert_allclose(beta.sum(axis=1), 1.0, rtol=0.0, atol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_euclidean_equivalence(seed):
    points = PointCloud(np.random.default_rng(1000 + seed).normal(size=(100, 3)))
    grid = MapGrid(rows=5, cols=5)
    schedule = TrainingSchedule.for_grid(grid, 2000)
    relational = train_online_relational(
        squared_euclidean(points), grid, HARD, schedule, "random-convex", seed
    )
    euclidean = train_online_euclidean(
        points, grid, HARD, schedule, "random-convex", seed
    )
    np.testing.assert_array_equal(relational.samples, euclidean.samples)
    np.testing.assert_array_equal(relational.winners, euclidean.winners)
    assert relational.history[-1].quantization_error == pytest.approx(
        euclidean.history[-1].quantization_error, rel=1e-6
    )


def test_uniform_square_organization():
    grid = MapGrid(rows=10, cols=10)
    online_fewer_crossings = 0
    online_low_error = 0
    for seed in range(10):
        points = generate_uniform_square(500, seed)
        dissimilarity = squared_euclidean(points)
        online = train_online_relational(
            dissimilarity,
            grid,
            HARD,
            TrainingSchedule.for_grid(grid, 2500),
            "random-convex",
            seed,
        )
        batch = train_batch_relational(
            dissimilarity,
            grid,
            HARD,
            TrainingSchedule.for_grid(grid, 20),
            "random-convex",
            seed,
        )
        online_crossings = lattice_crossings(
            state_in_data_space(online.state, points), grid
        )
        batch_crossings = lattice_crossings(
            state_in_data_space(batch.state, points), grid
        )
        online_fewer_crossings += online_crossings < batch_crossings
        online_low_error += map_report(dissimilarity, online).topographic_error < 0.15
    assert online_fewer_crossings >= 8
    assert online_low_error >= 8


def test_scaling_trend():
    grid = MapGrid(rows=10, cols=10)
    sizes = [250, 500, 1000]
    online = benchmark_scaling("online-relational", sizes, grid, 5, seed=0)
    assert online["ratio"].iloc[1:].between(2.8, 5.6).all(), online
    # a batch epoch is one U×n by n×n product: quadratic in n, as online
    batch = benchmark_scaling("batch-relational", sizes, grid, 5, seed=0)
    assert batch["ratio"].iloc[1:].between(2.8, 5.6).all(), batch


def test_swiss_roll():
    grid = MapGrid(rows=30, cols=10)
    online_good = 0
    online_better = 0
    for seed in range(10):
        points = generate_swiss_roll(1000, seed)
        labels = swiss_roll_quartile_labels(points)
        dissimilarity = geodesic_dissimilarity(points, 10)
        online = map_report(
            dissimilarity,
            train_online_relational(
                dissimilarity,
                grid,
                HARD,
                TrainingSchedule.for_grid(grid, 2500),
                "random-convex",
                seed,
            ),
            labels,
        )
        median = map_report(
            dissimilarity,
            train_batch_median(
                dissimilarity,
                grid,
                HARD,
                TrainingSchedule.for_grid(grid, 20),
                "random-convex",
                seed,
            ),
            labels,
        )
        online_good += online.topographic_error < 0.2 and online.purity >= 0.7
        online_better += (
            online.topographic_error < median.topographic_error
            and online.purity > median.purity
        )
    assert online_good >= 7
    assert online_better >= 7


def breadth_first_hops(graph):
    adjacency = graph.adjacency()
    hops = np.zeros((graph.n_nodes, graph.n_nodes))
    for source in range(graph.n_nodes):
        order, predecessors = breadth_first_order(adjacency, source, directed=False)
        for node in order[1:]:
            hops[source, node] = hops[source, predecessors[node]] + 1
    return hops


@pytest.fixture
def political_books():
    directory = os.environ.get("RELATIONAL_SOM_POLBOOKS")
    if directory is None:
        pytest.skip("RELATIONAL_SOM_POLBOOKS is not set")
    path = pathlib.Path(directory)
    labels = load_labels(path / "labels.csv")
    return load_edge_list(path / "edges.txt", labels=labels), labels


def test_political_books(political_books):
    graph, labels = political_books
    assert (graph.n_nodes, len(graph.edges)) == (105, 441)
    dissimilarity = graph_shortest_path_dissimilarity(graph)
    np.testing.assert_array_equal(dissimilarity.values, breadth_first_hops(graph))
    grid = MapGrid(rows=10, cols=10)
    pure = 0
    for seed in range(10):
        trained = train_online_relational(
            dissimilarity,
            grid,
            HARD,
            TrainingSchedule.for_grid(grid, 2500),
            "random-convex",
            seed,
        )
        pure += map_report(dissimilarity, trained, labels).purity >= 0.75
    assert pure >= 7

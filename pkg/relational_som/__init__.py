from ._benchmark import benchmark_scaling
from ._config import ExperimentConfig, config_from_dict, load_config
from ._datasets import generate_swiss_roll, generate_uniform_square
from ._dissimilarity import (
    DissimilarityMatrix,
    DnaSequenceSet,
    PointCloud,
    SimpleGraph,
    geodesic_dissimilarity,
    graph_shortest_path_dissimilarity,
    kimura2p_dissimilarity,
    squared_euclidean,
    validate,
)
from ._evaluation import (
    LabelDistribution,
    MapReport,
    NeighborDistanceMap,
    ProjectedGraph,
    label_distribution,
    lattice_crossings,
    lattice_segments,
    map_report,
    neighbor_cell_distances,
    project_graph,
    swiss_roll_quartile_labels,
)
from ._experiment import ExperimentInput, run_experiment
from ._io import (
    load_edge_list,
    load_fasta,
    load_labels,
    load_matrix,
    load_points,
    load_trained_map,
    save_matrix,
    save_points,
    save_trained_map,
)
from ._main import main, relational_som
from ._plot import (
    emit_grid_plot,
    emit_label_distribution_plot,
    emit_polygon_distance_plot,
    emit_projected_graph_plot,
    emit_snapshot_plot,
)
from ._som import (
    EuclideanPrototypes,
    Medoids,
    PrototypeCoefficients,
    TrainedMap,
    assign_all,
    implicit_distance,
    init_coefficients,
    prototypes_in_data_space,
    unit_distances,
)
from ._topology import (
    FixedSchedule,
    MapGrid,
    NeighborhoodKernel,
    TrainingSchedule,
    kernel_matrix,
    kernel_value,
    schedule_at,
)
from ._training import (
    train_batch_median,
    train_batch_relational,
    train_online_euclidean,
    train_online_relational,
)

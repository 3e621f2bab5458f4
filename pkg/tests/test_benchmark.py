import numpy as np
import pytest

from relational_som import MapGrid, benchmark_scaling
from relational_som.exceptions import InputValidationError


@pytest.mark.parametrize(
    "variant",
    ["online-relational", "euclidean-online", "batch-relational", "batch-median"],
)
def test_frame(variant):
    frame = benchmark_scaling(
        variant, [10, 20], MapGrid(rows=2, cols=2), 2, seed=0, iterations=5
    )
    assert frame.columns.tolist() == [
        "variant",
        "n",
        "units",
        "repetitions",
        "seconds",
        "ratio",
    ]
    assert frame["n"].tolist() == [10, 20]
    assert (frame["seconds"] > 0.0).all()
    assert np.isnan(frame["ratio"].iloc[0])
    assert frame["ratio"].iloc[1] == pytest.approx(
        frame["seconds"].iloc[1] / frame["seconds"].iloc[0]
    )


@pytest.mark.parametrize(
    "sizes,repetitions",
    [([20, 10], 1), ([], 1), ([10], 0)],
    ids=["descending", "empty", "no-repetition"],
)
def test_invalid(sizes, repetitions):
    with pytest.raises(InputValidationError):
        benchmark_scaling(
            "online-relational", sizes, MapGrid(rows=2, cols=2), repetitions, seed=0
        )

import pytest

from relational_som import config_from_dict, run_experiment
from relational_som._experiment import prepare_input, snapshot_checkpoints, train_map


def small_config(variant, iterations, **output):
    return config_from_dict(
        {
            "input": {"source": "generator:uniform-square", "n": 30},
            "algorithm": {"variant": variant},
            "grid": {"rows": 2, "cols": 2},
            "schedule": {"T": iterations},
            "output": output,
        }
    )


class TestSnapshotCheckpoints:
    @pytest.mark.parametrize("variant", ["online-relational", "euclidean-online"])
    def test_online(self, variant):
        assert snapshot_checkpoints(variant, 2500) == [0, 500, 1000, 1500, 2000, 2500]

    @pytest.mark.parametrize("variant", ["batch-relational", "batch-median"])
    def test_batch(self, variant):
        assert snapshot_checkpoints(variant, 20) == [0, 5, 9, 13, 17, 20]

    def test_short_batch(self):
        assert snapshot_checkpoints("batch-relational", 3) == [0, 1, 2, 3]


class TestTrainMap:
    def test_online_recipe(self):
        config = small_config("online-relational", 2500)
        trained = train_map(config, prepare_input(config), record_snapshots=True)
        expected = [0, 500, 1000, 1500, 2000, 2500]
        assert [c.iteration for c in trained.history] == expected
        assert [s.iteration for s in trained.snapshots] == expected

    @pytest.mark.parametrize("variant", ["batch-relational", "batch-median"])
    def test_batch_recipe(self, variant):
        config = small_config(variant, 20)
        trained = train_map(config, prepare_input(config), record_snapshots=True)
        # a run that converges early still reaches the last epoch
        expected = [0, 5, 9, 13, 17, 20]
        assert [c.iteration for c in trained.history] == expected
        assert [s.iteration for s in trained.snapshots] == expected


class TestLabelColors:
    def test_label_distribution_colors(self, tmp_path):
        (tmp_path / "edges.txt").write_text("0 1\n1 2\n2 3\n", encoding="utf-8")
        (tmp_path / "labels.csv").write_text(
            "0,l\n1,l\n2,c\n3,n\n", encoding="utf-8"
        )
        config = config_from_dict(
            {
                "input": {
                    "source": "edge-list",
                    "path": str(tmp_path / "edges.txt"),
                    "labels": str(tmp_path / "labels.csv"),
                },
                "grid": {"rows": 1, "cols": 2},
                "schedule": {"T": 20},
                "output": {
                    "directory": str(tmp_path / "run"),
                    "label_colors": {"l": "red", "c": "blue", "n": "green"},
                },
            }
        )
        directory = run_experiment(config)
        svg = (directory / "label_distribution.svg").read_text(encoding="utf-8")
        for color in ("#ff0000", "#0000ff", "#008000"):
            assert color in svg

import jsonschema
import pytest

from relational_som import ExperimentConfig, config_from_dict, load_config
from relational_som._config import apply_overrides, parse_override
from relational_som.exceptions import ConfigError

CONFIG_TOML = """\
seed = 7

[input]
source = "generator:swiss-roll"
n = 200

[dissimilarity]
k = 8

[algorithm]
variant = "batch-median"

[grid]
rows = 6
cols = 6

[schedule]
T = 20
alpha0 = 0.25
"""


class TestLoadConfig:
    def test_toml(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text(CONFIG_TOML, encoding="utf-8")
        config = load_config(path)
        assert config.seed == 7
        assert config.input.n == 200
        assert config.dissimilarity_kind == "geodesic"
        assert config.dissimilarity.k == 8
        assert config.algorithm.variant == "batch-median"
        assert (config.grid.rows, config.grid.cols) == (6, 6)
        assert config.schedule.T == 20
        assert config.schedule.alpha0 == 0.25
        # untouched tables keep their defaults
        assert config.kernel.kind == "hard"
        assert config.output.plots

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text(CONFIG_TOML, encoding="utf-8")
        config = load_config(path, overrides={"grid.rows": 3, "seed": 1})
        assert config.grid.rows == 3
        assert config.grid.cols == 6
        assert config.seed == 1

    def test_label_colors_override(self):
        config = load_config(
            None,
            overrides={
                "input.source": "generator:uniform-square",
                "output.label_colors.l": "red",
            },
        )
        assert config.output.label_colors == {"l": "red"}

    def test_overrides_only(self):
        config = load_config(
            None, overrides={"input.source": "generator:uniform-square"}
        )
        assert config.input.n == 500
        assert config.dissimilarity_kind == "squared-euclidean"
        assert config.schedule.T == 2500
        assert config.algorithm.init == "random-convex"


class TestValidation:
    @pytest.mark.parametrize(
        "data",
        [
            {},
            {"input": {"source": "spreadsheet"}},
            {"input": {"source": "matrix", "path": "d.csv"}, "grid": {"rows": 0}},
            {"input": {"source": "matrix", "path": "d.csv"}, "colour": "red"},
            {
                "input": {"source": "matrix", "path": "d.csv"},
                "schedule": {"alpha0": 1.5},
            },
            {
                "input": {"source": "matrix", "path": "d.csv"},
                "output": {"label_colors": {"l": 1}},
            },
        ],
        ids=[
            "no-input",
            "unknown-source",
            "empty-grid",
            "unknown-key",
            "alpha0",
            "label-color",
        ],
    )
    def test_schema(self, data):
        with pytest.raises(jsonschema.ValidationError):
            config_from_dict(data)

    def test_missing_path(self):
        with pytest.raises(ConfigError):
            config_from_dict({"input": {"source": "matrix"}})

    def test_incompatible_dissimilarity(self):
        with pytest.raises(ConfigError):
            config_from_dict(
                {
                    "input": {"source": "fasta", "path": "s.fasta"},
                    "dissimilarity": {"kind": "geodesic"},
                }
            )

    def test_euclidean_needs_points(self):
        with pytest.raises(ConfigError):
            config_from_dict(
                {
                    "input": {"source": "matrix", "path": "d.csv"},
                    "algorithm": {"variant": "euclidean-online"},
                }
            )

    def test_type_mismatch(self):
        with pytest.raises(jsonschema.ValidationError):
            config_from_dict({"input": {"source": "matrix", "path": 3}})

    @pytest.mark.parametrize(
        "source,kind",
        [
            ("csv-points", "squared-euclidean"),
            ("matrix", "precomputed"),
            ("edge-list", "shortest-path"),
            ("fasta", "kimura2p"),
        ],
    )
    def test_default_kind(self, source, kind):
        config = config_from_dict({"input": {"source": source, "path": "x"}})
        assert isinstance(config, ExperimentConfig)
        assert config.dissimilarity_kind == kind


class TestOverrides:
    def test_apply_nested(self):
        merged = apply_overrides({"grid": {"rows": 2}}, {"grid.cols": 4, "seed": 1})
        assert merged == {"grid": {"rows": 2, "cols": 4}, "seed": 1}

    def test_apply_keeps_source(self):
        data = {"grid": {"rows": 2}}
        apply_overrides(data, {"grid.rows": 5})
        assert data == {"grid": {"rows": 2}}

    def test_apply_through_value(self):
        with pytest.raises(ConfigError):
            apply_overrides({"seed": 1}, {"seed.value": 2})

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("grid.rows=12", ("grid.rows", 12)),
            ("schedule.alpha0 = 0.3", ("schedule.alpha0", 0.3)),
            ("output.plots=false", ("output.plots", False)),
            ('input.source="fasta"', ("input.source", "fasta")),
            ("input.path=data/books.txt", ("input.path", "data/books.txt")),
            ("schedule.checkpoints=[0, 10]", ("schedule.checkpoints", [0, 10])),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_override(text) == expected

    @pytest.mark.parametrize("text", ["grid.rows", "=3"])
    def test_parse_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_override(text)

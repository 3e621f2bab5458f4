from __future__ import annotations

import copy
import dataclasses
import logging
import pathlib
from typing import Any, Literal, Mapping, Optional, get_args

import dacite
import jsonschema
import toml

from ._som import InitMode, SamplingMode, Variant
from ._topology import KernelKind
from .exceptions import ConfigError

InputSource = Literal[
    "csv-points",
    "matrix",
    "edge-list",
    "fasta",
    "generator:uniform-square",
    "generator:swiss-roll",
]
DissimilarityKind = Literal[
    "squared-euclidean",
    "geodesic",
    "shortest-path",
    "kimura2p",
    "precomputed",
]

_DEFAULT_KIND: dict[InputSource, DissimilarityKind] = {
    "csv-points": "squared-euclidean",
    "matrix": "precomputed",
    "edge-list": "shortest-path",
    "fasta": "kimura2p",
    "generator:uniform-square": "squared-euclidean",
    "generator:swiss-roll": "geodesic",
}
_POINT_SOURCES = ("csv-points", "generator:uniform-square", "generator:swiss-roll")


@dataclasses.dataclass(frozen=True)
class InputConfig:
    source: InputSource
    path: Optional[str] = None
    n: int = 500
    header: bool = False
    one_based: bool = False
    labels: Optional[str] = None
    # 2D coordinates used for plotting only (e.g. a graph layout)
    coordinates: Optional[str] = None

    @property
    def has_points(self) -> bool:
        return self.source in _POINT_SOURCES

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "required": ["source"],
            "additionalProperties": False,
            "properties": {
                "source": {"enum": list(get_args(InputSource))},
                "path": {"type": "string"},
                "n": {"type": "integer", "minimum": 1},
                "header": {"type": "boolean"},
                "one_based": {"type": "boolean"},
                "labels": {"type": "string"},
                "coordinates": {"type": "string"},
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class DissimilarityConfig:
    kind: Optional[DissimilarityKind] = None
    k: int = 10

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": list(get_args(DissimilarityKind))},
                "k": {"type": "integer", "minimum": 1},
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class AlgorithmConfig:
    variant: Variant = "online-relational"
    init: InitMode = "random-convex"
    sampling: SamplingMode = "uniform"
    warn_indefinite: bool = False

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "variant": {"enum": list(get_args(Variant))},
                "init": {"enum": list(get_args(InitMode))},
                "sampling": {"enum": list(get_args(SamplingMode))},
                "warn_indefinite": {"type": "boolean"},
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class GridConfig:
    rows: int = 10
    cols: int = 10

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rows": {"type": "integer", "minimum": 1},
                "cols": {"type": "integer", "minimum": 1},
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class KernelConfig:
    kind: KernelKind = "hard"

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": list(get_args(KernelKind))},
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class ScheduleConfig:
    T: int = 2500  # pylint: disable=invalid-name
    alpha0: float = 0.5
    plateaus: int = 5
    checkpoints: Optional[list[int]] = None

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "T": {"type": "integer", "minimum": 0},
                "alpha0": {
                    "type": "number",
                    "exclusiveMinimum": 0.0,
                    "maximum": 1.0,
                },
                "plateaus": {"type": "integer", "minimum": 1},
                "checkpoints": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                },
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class OutputConfig:
    directory: str = "output"
    plots: bool = True
    # label -> matplotlib color for the label distribution plot
    label_colors: Optional[dict[str, str]] = None

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": "string"},
                "plots": {"type": "boolean"},
                "label_colors": {
                    "type": "object",
                    "additionalProperties": {"type": "string"},
                },
            },
        }
        return schema


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    input: InputConfig
    dissimilarity: DissimilarityConfig = DissimilarityConfig()
    algorithm: AlgorithmConfig = AlgorithmConfig()
    grid: GridConfig = GridConfig()
    kernel: KernelConfig = KernelConfig()
    schedule: ScheduleConfig = ScheduleConfig()
    output: OutputConfig = OutputConfig()
    seed: int = 0

    def __post_init__(self) -> None:
        source = self.input.source
        if not source.startswith("generator:") and self.input.path is None:
            raise ConfigError(f'input.path is required for source "{source}"')
        kind = self.dissimilarity_kind
        compatible: dict[DissimilarityKind, tuple[str, ...]] = {
            "squared-euclidean": _POINT_SOURCES,
            "geodesic": _POINT_SOURCES,
            "shortest-path": ("edge-list",),
            "kimura2p": ("fasta",),
            "precomputed": ("matrix",),
        }
        if source not in compatible[kind]:
            raise ConfigError(f'dissimilarity "{kind}" cannot be built from "{source}"')
        if self.algorithm.variant == "euclidean-online" and not self.input.has_points:
            raise ConfigError(f'"euclidean-online" needs point coordinates: "{source}"')

    @property
    def dissimilarity_kind(self) -> DissimilarityKind:
        if self.dissimilarity.kind is not None:
            return self.dissimilarity.kind
        return _DEFAULT_KIND[self.input.source]

    @classmethod
    def jsonschema(cls) -> dict[str, Any]:
        schema = {
            "type": "object",
            "required": ["input"],
            "additionalProperties": False,
            "properties": {
                "input": InputConfig.jsonschema(),
                "dissimilarity": DissimilarityConfig.jsonschema(),
                "algorithm": AlgorithmConfig.jsonschema(),
                "grid": GridConfig.jsonschema(),
                "kernel": KernelConfig.jsonschema(),
                "schedule": ScheduleConfig.jsonschema(),
                "output": OutputConfig.jsonschema(),
                "seed": {"type": "integer"},
            },
        }
        return schema


def load_config(
    path: Optional[pathlib.Path],
    *,
    overrides: Optional[Mapping[str, Any]] = None,
    logger: Optional[logging.Logger] = None,
) -> ExperimentConfig:
    logger = logger or logging.getLogger(__name__)
    # load TOML
    loaded: dict[str, Any] = {}
    if path is not None:
        logger.info(f'load config from "{path}"')
        with path.open(encoding="utf-8") as file:
            loaded = toml.load(file)
        logger.debug(f"loaded toml: {repr(loaded)}")
    # flags override file values
    loaded = apply_overrides(loaded, overrides or {})
    return config_from_dict(loaded, logger=logger)


def config_from_dict(
    data: Mapping[str, Any],
    *,
    logger: Optional[logging.Logger] = None,
) -> ExperimentConfig:
    logger = logger or logging.getLogger(__name__)
    # JSON Schema validation
    jsonschema.Draft202012Validator(ExperimentConfig.jsonschema()).validate(
        instance=data
    )
    # to dataclass
    config = dacite.from_dict(
        data_class=ExperimentConfig,
        data=dict(data),
        config=dacite.Config(strict=True),
    )
    logger.debug(f"config: {repr(config)}")
    return config


def apply_overrides(
    data: Mapping[str, Any],
    overrides: Mapping[str, Any],
) -> dict[str, Any]:
    """Merge dotted keys (e.g. "grid.rows") into a nested mapping."""
    merged: dict[str, Any] = copy.deepcopy(dict(data))
    for key, value in overrides.items():
        *parents, leaf = key.split(".")
        table = merged
        for parent in parents:
            child = table.setdefault(parent, {})
            if not isinstance(child, dict):
                raise ConfigError(f'"{parent}" in "{key}" is not a table')
            table = child
        table[leaf] = value
    return merged


def parse_override(text: str) -> tuple[str, Any]:
    """Parse `key=value`; the value is read as a TOML value, else a string."""
    key, separator, raw = text.partition("=")
    if not separator or not key.strip():
        raise ConfigError(f'override must be "key=value": {text}')
    try:
        value = toml.loads(f"value = {raw.strip()}")["value"]
    except toml.TomlDecodeError:
        value = raw.strip()
    return key.strip(), value

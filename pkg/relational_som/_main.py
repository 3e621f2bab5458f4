from __future__ import annotations

import argparse
import dataclasses
import logging
import pathlib
from typing import Any, Optional, Sequence, get_args

import dacite
import jsonschema

from ._benchmark import benchmark_scaling
from ._config import ExperimentConfig, load_config, parse_override
from ._datasets import generate_swiss_roll, generate_uniform_square
from ._experiment import (
    emit_plots,
    evaluate,
    load_run,
    prepare_input,
    run_experiment,
    save_input,
    train_map,
)
from ._io import save_benchmark, save_points, save_trained_map
from ._som import Variant
from ._topology import MapGrid
from .exceptions import ConfigError, InputValidationError

EXIT_SUCCESS = 0
EXIT_VALIDATION_ERROR = 1
EXIT_RUNTIME_ERROR = 2


def main(args: Optional[list[str]] = None) -> int:
    logger = _default_logger()
    try:
        relational_som(args=args, logger=logger)
    except (
        InputValidationError,
        jsonschema.ValidationError,
        dacite.DaciteError,
    ) as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_VALIDATION_ERROR
    except Exception as error:  # pylint: disable=broad-exception-caught
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_RUNTIME_ERROR
    return EXIT_SUCCESS


def relational_som(
    *,
    args: Optional[list[str]] = None,
    logger: Optional[logging.Logger] = None,
) -> None:
    logger = logger or _default_logger()
    # option
    option = parse_args(args)
    if option.verbose:
        logger.setLevel(logging.DEBUG)
    logger.debug(f"option: {option}")
    # command
    match option:
        case GenOption():
            logger.info(f"command: gen {option.kind}")
            if option.kind == "swiss-roll":
                points = generate_swiss_roll(option.n, option.seed)
            else:
                points = generate_uniform_square(option.n, option.seed)
            logger.info(f'save "{option.output}"')
            save_points(option.output, points)
        case DissimOption():
            logger.info("command: dissim")
            config = option.load_config(logger=logger)
            directory = pathlib.Path(config.output.directory)
            save_input(directory, prepare_input(config, logger=logger))
        case TrainOption():
            logger.info("command: train")
            config = option.load_config(logger=logger)
            directory = pathlib.Path(config.output.directory)
            data = prepare_input(config, logger=logger)
            trained_map = train_map(config, data, logger=logger)
            save_input(directory, data)
            save_trained_map(directory, trained_map, logger=logger)
        case PlotOption():
            logger.info(f'command: plot "{option.directory}"')
            data, trained_map = load_run(option.directory)
            emit_plots(
                option.directory,
                data,
                trained_map,
                label_colors=option.color_map(),
                logger=logger,
            )
        case EvalOption():
            logger.info(f'command: eval "{option.directory}"')
            data, trained_map = load_run(option.directory)
            evaluate(option.directory, data, trained_map, logger=logger)
        case BenchOption():
            logger.info(f"command: bench {option.variant}")
            frame = benchmark_scaling(
                option.variant,
                option.sizes,
                MapGrid(rows=option.rows, cols=option.cols),
                option.repetitions,
                option.seed,
                logger=logger,
            )
            logger.info(f'save "{option.output}"')
            save_benchmark(option.output, frame)
        case RunOption():
            logger.info("command: run")
            run_experiment(option.load_config(logger=logger), logger=logger)


def _default_logger() -> logging.Logger:
    logger = logging.getLogger("relational-som")
    if not logger.handlers:
        logger.setLevel(logging.INFO)
        handler = logging.StreamHandler()
        handler.formatter = logging.Formatter(
            fmt="%(asctime)s %(name)s:%(levelname)s:%(message)s"
        )
        logger.addHandler(handler)
    return logger


@dataclasses.dataclass(frozen=True)
class CommonOption:
    verbose: bool

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.set_defaults(cls=cls)

    @classmethod
    def add_common_arguments(cls, parser: argparse.ArgumentParser) -> None:
        # verbose
        parser.add_argument(
            "-v",
            "--verbose",
            dest="verbose",
            action="store_true",
            help="set log level to debug",
        )


@dataclasses.dataclass(frozen=True)
class ConfigOption(CommonOption):
    config: Optional[pathlib.Path]
    overrides: list[str]
    output_directory: Optional[str]
    seed: Optional[int]
    header: bool
    one_based: bool
    warn_indefinite: bool

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        # config
        parser.add_argument(
            "--config",
            dest="config",
            metavar="TOML",
            type=pathlib.Path,
            help="experiment .toml file",
        )
        # overrides
        parser.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help='override a config key (e.g. "grid.rows=5"), repeatable',
        )
        parser.add_argument(
            "-o",
            "--output",
            dest="output_directory",
            metavar="DIR",
            help="output directory (overrides output.directory)",
        )
        parser.add_argument(
            "--seed",
            dest="seed",
            type=int,
            help="random seed (overrides seed)",
        )
        # input & algorithm switches
        parser.add_argument(
            "--header",
            dest="header",
            action="store_true",
            help="points CSV has a header row (sets input.header)",
        )
        parser.add_argument(
            "--one-based",
            dest="one_based",
            action="store_true",
            help="edge list node ids start at 1 (sets input.one_based)",
        )
        parser.add_argument(
            "--warn-indefinite",
            dest="warn_indefinite",
            action="store_true",
            help="report negative implicit distances"
            " (sets algorithm.warn_indefinite)",
        )

    def load_config(self, *, logger: logging.Logger) -> ExperimentConfig:
        overrides: dict[str, Any] = dict(
            parse_override(text) for text in self.overrides
        )
        if self.output_directory is not None:
            overrides["output.directory"] = self.output_directory
        if self.seed is not None:
            overrides["seed"] = self.seed
        if self.header:
            overrides["input.header"] = True
        if self.one_based:
            overrides["input.one_based"] = True
        if self.warn_indefinite:
            overrides["algorithm.warn_indefinite"] = True
        return load_config(self.config, overrides=overrides, logger=logger)


@dataclasses.dataclass(frozen=True)
class GenOption(CommonOption):
    kind: str
    n: int
    seed: int
    output: pathlib.Path

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "kind",
            choices=["uniform-square", "swiss-roll"],
            help="synthetic data set",
        )
        parser.add_argument(
            "-n",
            dest="n",
            type=int,
            default=500,
            help="number of points (default %(default)s)",
        )
        parser.add_argument(
            "--seed",
            dest="seed",
            type=int,
            default=0,
            help="random seed (default %(default)s)",
        )
        parser.add_argument(
            "-o",
            "--output",
            dest="output",
            required=True,
            metavar="CSV",
            type=pathlib.Path,
            help="points file to write",
        )


@dataclasses.dataclass(frozen=True)
class DissimOption(ConfigOption):
    pass


@dataclasses.dataclass(frozen=True)
class TrainOption(ConfigOption):
    pass


@dataclasses.dataclass(frozen=True)
class RunOption(ConfigOption):
    pass


@dataclasses.dataclass(frozen=True)
class EvalOption(CommonOption):
    directory: pathlib.Path

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "directory",
            metavar="DIR",
            type=pathlib.Path,
            help="directory written by train or run",
        )


@dataclasses.dataclass(frozen=True)
class PlotOption(EvalOption):
    label_colors: list[str]

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "--label-color",
            dest="label_colors",
            action="append",
            default=[],
            metavar="LABEL=COLOR",
            help='label color (e.g. "l=red"), repeatable',
        )

    def color_map(self) -> dict[str, str]:
        colors: dict[str, str] = {}
        for text in self.label_colors:
            label, separator, color = text.partition("=")
            if not separator or not label or not color:
                raise ConfigError(f'expected LABEL=COLOR: "{text}"')
            colors[label] = color
        return colors


@dataclasses.dataclass(frozen=True)
class BenchOption(CommonOption):
    variant: Variant
    sizes: list[int]
    rows: int
    cols: int
    repetitions: int
    seed: int
    output: pathlib.Path

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "variant",
            choices=list(get_args(Variant)),
            help="algorithm to time",
        )
        parser.add_argument(
            "--sizes",
            dest="sizes",
            nargs="+",
            type=int,
            default=[250, 500, 1000],
            metavar="N",
            help="ascending numbers of observations (default %(default)s)",
        )
        parser.add_argument(
            "--rows",
            dest="rows",
            type=int,
            default=10,
            help="grid rows (default %(default)s)",
        )
        parser.add_argument(
            "--cols",
            dest="cols",
            type=int,
            default=10,
            help="grid columns (default %(default)s)",
        )
        parser.add_argument(
            "--repetitions",
            dest="repetitions",
            type=int,
            default=5,
            help="timed runs per size (default %(default)s)",
        )
        parser.add_argument(
            "--seed",
            dest="seed",
            type=int,
            default=0,
            help="random seed (default %(default)s)",
        )
        parser.add_argument(
            "-o",
            "--output",
            dest="output",
            required=True,
            metavar="CSV",
            type=pathlib.Path,
            help="timings file to write",
        )


type Option = (
    GenOption
    | DissimOption
    | TrainOption
    | EvalOption
    | PlotOption
    | BenchOption
    | RunOption
)


def parse_args(args: Optional[Sequence[str]] = None) -> Option:
    parser = _argument_parser()
    option = vars(parser.parse_args(args))
    cls = option.pop("cls")
    return cls(**option)


def _argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relational-som")
    # common
    CommonOption.add_common_arguments(parser)
    # sub parser
    sub_parsers = parser.add_subparsers(
        title="command",
        description="command to be executed",
        required=True,
    )
    commands: list[tuple[str, str, type[CommonOption]]] = [
        ("gen", "generate a synthetic point cloud", GenOption),
        ("dissim", "build and validate the dissimilarity matrix", DissimOption),
        ("train", "train a map", TrainOption),
        ("eval", "evaluate a trained map", EvalOption),
        ("plot", "draw the SVG plots of a trained map", PlotOption),
        ("bench", "time iterations against the number of observations", BenchOption),
        ("run", "build, train, evaluate and plot from a config", RunOption),
    ]
    for name, description, option in commands:
        option.add_arguments(sub_parsers.add_parser(name, help=description))
    return parser

# Copyright 2025 - Pruna AI GmbH. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from dotenv import dotenv_values

from nrvqa.algorithms import learner_names
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import load_csv, save_csv
from nrvqa.data.grid import GRID_MTU, build_from_clips, write_grid_clips
from nrvqa.engine.quality_model import QualityModel
from nrvqa.errors import NrvqaError, UsageError
from nrvqa.evaluation.experiments import (
    DEFAULT_FOLDS,
    run_blind_eval,
    run_feature_baseline,
    run_random_cv,
    run_size_sweep,
    time_training,
)
from nrvqa.evaluation.render import ReportFormat, render_report
from nrvqa.impairment.channel import ChannelStats, LossKind
from nrvqa.logging.logger import NrvqaLoggerContext, nrvqa_logger
from nrvqa.quality.benchmark import DEFAULT_ORACLE
from nrvqa.quality.registry import OracleRegistry
from nrvqa.train import train
from nrvqa.video.frame_io import read_y4m
from nrvqa.video.procedural import CLIP_RECIPES, DEFAULT_FRAMES, DEFAULT_HEIGHT, DEFAULT_WIDTH, make_clip_classes

TRUE_STRINGS = ("1", "true", "yes", "on")
EXPERIMENTS = ("blind", "cv", "sweep", "time", "baseline")


class NrvqaArgumentParser(argparse.ArgumentParser):
    """Argument parser raising ``UsageError`` instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        """Print the usage text and raise."""
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser, seed: bool = True) -> None:
    parser.add_argument("--config", type=Path, default=None, help="File of key=value lines with flag defaults.")
    parser.add_argument("--verbose", action="store_true", help="Log progress.")
    if seed:
        parser.add_argument("--seed", type=int, default=0, help="Seed of every random choice.")


def build_parser() -> NrvqaArgumentParser:
    """
    Build the command-line parser.

    Returns
    -------
    NrvqaArgumentParser
        The parser; every leaf parser is stored as the ``leaf_parser`` default.
    """
    parser = NrvqaArgumentParser(prog="nrvqa", description="No-reference video quality prediction.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=NrvqaArgumentParser)
    oracles = OracleRegistry.names()

    synth = commands.add_parser("synth", help="Generate clip classes and the impaired grid clips.")
    synth.add_argument("--out", type=Path)
    synth.add_argument("--classes", type=int, default=len(CLIP_RECIPES))
    synth.add_argument("--width", type=int, default=DEFAULT_WIDTH)
    synth.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    synth.add_argument("--frames", type=int, default=DEFAULT_FRAMES)
    synth.add_argument("--loss-kind", choices=[kind.value for kind in LossKind], default=LossKind.BERNOULLI.value)
    synth.add_argument("--mtu", type=int, default=GRID_MTU)
    synth.add_argument("--oracle", choices=oracles, default=DEFAULT_ORACLE, help="Ground-truth oracle of the grid.")
    _add_common(synth)
    synth.set_defaults(handler=_synth, leaf_parser=synth, required_flags=("out",))

    extract = commands.add_parser("extract", help="Measure the grid clips into a dataset CSV.")
    extract.add_argument("--clips", type=Path, help="Directory written by synth.")
    extract.add_argument("--refs", type=Path, default=None, help="Directory of reference clips.")
    extract.add_argument("--out", type=Path)
    extract.add_argument("--jobs", type=int, default=1)
    extract.add_argument("--oracle", choices=oracles, default=None, help="Oracle overriding the one in the manifest.")
    extract.add_argument("--seed", type=int, default=None, help="Grid seed the clips must have been synthesized with.")
    _add_common(extract, seed=False)
    extract.set_defaults(handler=_extract, leaf_parser=extract, required_flags=("clips", "out"))

    train_cmd = commands.add_parser("train", help="Train a quality model.")
    train_cmd.add_argument("--dataset", type=Path)
    train_cmd.add_argument("--algo", help=f"One of {', '.join(learner_names())}.")
    train_cmd.add_argument("--out", type=Path)
    train_cmd.add_argument("--param", action="append", default=[], help="Hyperparameter override key=value.")
    _add_common(train_cmd)
    train_cmd.set_defaults(
        handler=_train, leaf_parser=train_cmd, required_flags=("dataset", "algo", "out")
    )

    predict = commands.add_parser("predict", help="Predict the quality of a received clip.")
    predict.add_argument("--model", type=Path)
    predict.add_argument("--clip", type=Path)
    predict.add_argument("--loss", type=float, help="Measured packet loss ratio in [0, 1].")
    predict.add_argument("--bitrate", type=float, help="Nominal bitrate in kbps.")
    _add_common(predict, seed=False)
    predict.set_defaults(
        handler=_predict, leaf_parser=predict, required_flags=("model", "clip", "loss", "bitrate")
    )

    evaluate = commands.add_parser("eval", help="Run an experiment and write its report.")
    experiments = evaluate.add_subparsers(dest="experiment", required=True, parser_class=NrvqaArgumentParser)
    for name in EXPERIMENTS:
        experiment = experiments.add_parser(name)
        experiment.add_argument("--dataset", type=Path)
        experiment.add_argument("--out", type=Path)
        experiment.add_argument("--jobs", type=int, default=1)
        experiment.add_argument("--formats", default=",".join(fmt.value for fmt in ReportFormat))
        if name != "baseline":
            experiment.add_argument("--algos", default=",".join(learner_names()))
        if name == "cv":
            experiment.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
        _add_common(experiment)
        experiment.set_defaults(handler=_evaluate, leaf_parser=experiment, required_flags=("dataset", "out"))
    return parser


def _actions(parser: argparse.ArgumentParser) -> dict[str, argparse.Action]:
    return {action.dest: action for action in parser._actions if action.option_strings}


def _convert(action: argparse.Action, value: str) -> Any:
    if isinstance(action, argparse._StoreTrueAction):
        return value.strip().lower() in TRUE_STRINGS
    if isinstance(action, argparse._AppendAction):
        return [item.strip() for item in value.split(",") if item.strip()]
    if action.choices is not None and value not in action.choices:
        raise UsageError(f"Invalid value '{value}' for '{action.dest}', choose from {list(action.choices)}.")
    return action.type(value) if callable(action.type) else value


def apply_config(args: argparse.Namespace, argv: Sequence[str]) -> argparse.Namespace:
    """
    Fill flags not given on the command line from the ``--config`` file.

    Parameters
    ----------
    args : argparse.Namespace
        Parsed arguments.
    argv : Sequence[str]
        The raw arguments, to tell explicit flags apart.

    Returns
    -------
    argparse.Namespace
        The arguments with file values applied.
    """
    if args.config is None:
        return args
    if not args.config.is_file():
        nrvqa_logger.error(f"Configuration file {args.config} does not exist.")
        raise UsageError(f"Configuration file {args.config} does not exist.")

    actions = _actions(args.leaf_parser)
    given = {arg.split("=", 1)[0] for arg in argv if arg.startswith("--")}
    for key, value in dotenv_values(args.config).items():
        dest = key.strip().lower().replace("-", "_")
        if dest not in actions or dest == "config":
            nrvqa_logger.error(f"Unknown configuration key '{key}' for this command.")
            raise UsageError(f"Unknown configuration key '{key}'.")
        action = actions[dest]
        if given & set(action.option_strings) or value is None:
            continue
        try:
            setattr(args, dest, _convert(action, value))
        except ValueError as e:
            raise UsageError(f"Invalid value '{value}' for configuration key '{key}'.") from e
    return args


def _check_required(args: argparse.Namespace) -> None:
    for dest in args.required_flags:
        if getattr(args, dest, None) is None:
            args.leaf_parser.print_usage(sys.stderr)
            nrvqa_logger.error(f"The flag --{dest.replace('_', '-')} is required.")
            raise UsageError(f"The flag --{dest.replace('_', '-')} is required.")


def _synth(args: argparse.Namespace) -> None:
    classes = make_clip_classes(args.classes, seed=args.seed, width=args.width, height=args.height, frames=args.frames)
    write_grid_clips(
        classes,
        args.out,
        seed=args.seed,
        oracle=args.oracle,
        loss_kind=args.loss_kind,
        mtu=args.mtu,
        verbose=args.verbose,
    )


def _extract(args: argparse.Namespace) -> None:
    dataset = build_from_clips(
        args.clips, refs_dir=args.refs, jobs=args.jobs, verbose=args.verbose, oracle=args.oracle, seed=args.seed
    )
    save_csv(dataset, args.out)
    nrvqa_logger.info(f"Wrote {len(dataset)} samples to {args.out}.")


def _train(args: argparse.Namespace) -> None:
    spec = LearnerSpec.parse(args.algo, args.param)
    model = train(spec, load_csv(args.dataset), seed=args.seed, verbose=args.verbose)
    model.save(args.out)


def _predict(args: argparse.Namespace) -> None:
    model = QualityModel.load(args.model)
    stats = ChannelStats.from_loss_ratio(args.loss, args.bitrate)
    q = model.predict_clip(read_y4m(args.clip), stats)
    print(f"{q:.6f}")


def _parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _evaluate(args: argparse.Namespace) -> None:
    dataset = load_csv(args.dataset)
    formats = _parse_list(args.formats)
    for fmt in formats:
        if fmt not in [member.value for member in ReportFormat]:
            raise UsageError(f"Unknown report format '{fmt}'.")

    runners: dict[str, Callable[..., Any]] = {
        "blind": run_blind_eval,
        "sweep": run_size_sweep,
        "time": time_training,
    }
    if args.experiment == "baseline":
        report = run_feature_baseline(dataset, seed=args.seed)
    else:
        specs = [LearnerSpec(algo) for algo in _parse_list(args.algos)]
        if not specs:
            raise UsageError("No learner selected.")
        if args.experiment == "cv":
            report = run_random_cv(
                dataset, specs, k=args.folds, seed=args.seed, n_jobs=args.jobs, verbose=args.verbose
            )
        else:
            report = runners[args.experiment](
                dataset, specs, seed=args.seed, n_jobs=args.jobs, verbose=args.verbose
            )
    for fmt in formats:
        for path in render_report(report, fmt, args.out):
            nrvqa_logger.info(f"Wrote {path}.")


def dispatch(argv: Sequence[str]) -> int:
    """
    Run one command.

    Parameters
    ----------
    argv : Sequence[str]
        Arguments without the program name.

    Returns
    -------
    int
        Exit code: 0 on success, 1 usage error, 2 data error, 3 training error.
    """
    try:
        args = apply_config(build_parser().parse_args(list(argv)), argv)
        _check_required(args)
        with NrvqaLoggerContext(verbose=args.verbose):
            args.handler(args)
    except NrvqaError as e:
        print(f"nrvqa: error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    return dispatch(sys.argv[1:] if argv is None else argv)

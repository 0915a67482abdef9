"""Command-line front end: runs, checks and exports, one subcommand each."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .bisection import bisection_locate
from .cantortrie import CylinderComplex, PointedSet
from .cardinality import classify_cardinality, naturals_demo, naturals_topology_report, verify_P_definition
from .config_loader import FORMATS, RunConfig, SuiteSizes, load_run_config
from .construction import DeletionSchedule, dense_schedule, preserve_run, run_construction, run_transfinite
from .errors import BudgetExceededError, CantorlabError, MalformedInputError, UsageError
from .export import complex_to_dot, trace_to_dot
from .logging_utils import LEVELS, configure_logging
from .reports import construction_report, preserve_report, render, transfinite_report, with_header
from .serialization import (
    complex_from_json,
    complex_to_json,
    dumps,
    load_json_file,
    load_schedule,
    parse_initial,
    pointed_set_from_json,
    pointed_set_to_json,
    write_text,
)
from .seqcore import Point
from .suites import SUITES, run_verify_suites, summary_table

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="Resolution depth d.")
    common.add_argument("--k-bound", dest="k_bound", type=int, default=None, help="Largest ordinal block count K.")
    common.add_argument("--lookahead", type=int, default=None, help="Extra depth for nowhere-density (default 2*depth).")
    common.add_argument("--budget", type=int, default=None, help="Resolution / search budget.")
    common.add_argument("--seed", type=int, default=None, help="Seed for generated schedules and samples.")
    common.add_argument("--format", dest="format", choices=FORMATS, default=None)
    common.add_argument("--config", type=Path, default=None, help="YAML config (default config/defaults.yml).")
    common.add_argument("--output", type=Path, default=None, help="Write the result here instead of stdout.")
    common.add_argument("--log-level", dest="log_level", choices=sorted(LEVELS), default="WARNING")
    common.add_argument("--log-file", dest="log_file", type=Path, default=None)
    return common


def _points(text: Optional[str]) -> List[Point]:
    if not text:
        return []
    return [Point.parse(part.strip()) for part in text.split(",") if part.strip()]


def _initial(args: argparse.Namespace) -> CylinderComplex:
    if getattr(args, "initial_file", None):
        return complex_from_json(load_json_file(args.initial_file))
    return parse_initial(args.initial)


def _pointed_set(args: argparse.Namespace) -> PointedSet:
    if getattr(args, "space", None):
        return pointed_set_from_json(load_json_file(args.space))
    return PointedSet(_initial(args), frozenset(_points(args.extras)), frozenset(_points(args.holes)))


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="cantorlab", description="Exact Baire-topology constructions on binary sequences.")
    parser.add_argument("--version", action="version", version=f"cantorlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def _with_initial(p: argparse.ArgumentParser) -> None:
        p.add_argument("--initial", default="full", help="'full', 'empty' or comma-separated stems, e.g. 0,11.")
        p.add_argument("--initial-file", dest="initial_file", type=Path, default=None, help="Complex JSON file.")

    def _with_space(p: argparse.ArgumentParser) -> None:
        _with_initial(p)
        p.add_argument("--extras", default="", help="Comma-separated points added outside the body.")
        p.add_argument("--holes", default="", help="Comma-separated points removed from the body.")
        p.add_argument("--space", type=Path, default=None, help="Pointed-set JSON file.")

    p = sub.add_parser("construct", parents=[common], help="Run a deletion schedule.")
    _with_initial(p)
    p.add_argument("--schedule", type=Path, default=None, help="Schedule JSON file.")
    p.add_argument("--dense", action="store_true", help="Generate a dense schedule at --depth from --seed.")
    p.add_argument("--sweep", type=int, default=None, help="Run N generated dense schedules in parallel.")
    p.add_argument("--workers", type=int, default=4)

    p = sub.add_parser("preserve", parents=[common], help="Delete around targets while keeping witnesses.")
    _with_initial(p)
    p.add_argument("--avoid", required=True, help="Comma-separated deletion targets.")
    p.add_argument("--keep", required=True, help="Seed witness point.")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--policy", choices=["keep", "fresh"], default="keep")

    p = sub.add_parser("transfinite", parents=[common], help="Preserving run through ω·K with limit stages.")
    _with_initial(p)
    p.add_argument("--segments", default="", help="Targets per ω-block: blocks split by ';', points by ','.")
    p.add_argument("--keep", required=True, help="Seed witness point.")
    p.add_argument("--k", type=int, required=True, help="Number of ω-blocks K.")
    p.add_argument("--policy", choices=["keep", "fresh"], default="keep")

    p = sub.add_parser("bisect", parents=[common], help="Locate a point by bisection.")
    _with_space(p)
    p.add_argument("--point", required=True)
    p.add_argument("--max-steps", dest="max_steps", type=int, default=None, help="Default: --budget.")

    p = sub.add_parser("verify", parents=[common], help="Run an invariant suite.")
    p.add_argument("suite", help=f"One of {', '.join(SUITES)} or all.")
    p.add_argument("--samples", type=int, default=None, help="Override every suite sample count.")

    p = sub.add_parser("classify", parents=[common], help="Cardinality class of a pointed set.")
    _with_space(p)
    p.add_argument("--horizon", type=int, default=None, help="Isolation horizon (default --depth).")

    p = sub.add_parser("naturals", parents=[common], help="Delete initial segments of the naturals.")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--delete", default="", help="Comma-separated cutoffs n of d_n = {m < n}.")
    p.add_argument("--cofinal", action="store_true", help="Also delete the top cutoff d_bound at every bound.")
    p.add_argument("--topology", action="store_true", help="Also check the terminal-segment topology.")

    p = sub.add_parser("verify-p", parents=[common], help="Dense deletion predicate at --depth.")
    _with_initial(p)

    p = sub.add_parser("export", parents=[common], help="Render a complex, run report or bisection trace.")
    _with_initial(p)
    p.add_argument("--report", type=Path, default=None, help="Report JSON from construct/preserve/transfinite/bisect.")
    p.add_argument("--to", choices=["dot", "json"], default="dot")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    overrides = {k: getattr(args, k) for k in ("depth", "k_bound", "lookahead", "budget", "seed", "format")}
    config = load_run_config(args.config, overrides)
    samples = getattr(args, "samples", None)
    if samples is not None:
        config = replace(config, suites=SuiteSizes(*([samples] * 5)))
    return config


def _schedule_key(schedule: DeletionSchedule) -> str:
    canonical = json.dumps(schedule.to_records(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _sweep(initial: CylinderComplex, config: RunConfig, count: int, workers: int) -> Dict[str, Any]:
    schedules = [dense_schedule(initial, config.depth, random.Random(config.seed + i), config.budget) for i in range(count)]

    def _one(schedule: DeletionSchedule) -> Dict[str, Any]:
        report = construction_report(run_construction(initial, schedule, config.budget), config, schedule.to_records())
        report["schedule_sha256"] = _schedule_key(schedule)
        for key in ("tool", "version", "config"):
            report.pop(key)
        return report

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        runs = list(pool.map(_one, schedules))
    runs.sort(key=lambda r: r["schedule_sha256"])
    logger.info("Swept %d dense schedules at depth %d", count, config.depth)
    return with_header(config, "construct", {"sweep": runs})


def _emit(report: Dict[str, Any], config: RunConfig, args: argparse.Namespace, dot: Optional[str] = None) -> None:
    if config.format == "dot":
        if dot is None:
            raise UsageError(f"Format 'dot' is not available for {args.command}")
        text = dot
    else:
        text = render(report, config.format)
    write_text(text, args.output)


def _cmd_construct(args: argparse.Namespace, config: RunConfig) -> int:
    initial = _initial(args)
    if args.sweep is not None:
        if args.sweep < 1:
            raise UsageError(f"--sweep needs a positive count, got {args.sweep}")
        _emit(_sweep(initial, config, args.sweep, args.workers), config, args)
        return 0
    if args.schedule is not None:
        schedule = load_schedule(args.schedule)
    elif args.dense:
        schedule = dense_schedule(initial, config.depth, random.Random(config.seed), config.budget)
    else:
        schedule = DeletionSchedule()
    state = run_construction(initial, schedule, config.budget)
    report = construction_report(state, config, schedule.to_records())
    _emit(report, config, args, complex_to_dot(state.current, "remainder"))
    return 0


def _cmd_preserve(args: argparse.Namespace, config: RunConfig) -> int:
    result = preserve_run(
        _initial(args), _points(args.avoid), Point.parse(args.keep), args.steps, config.budget, args.policy
    )
    _emit(preserve_report(result.state, config), config, args, complex_to_dot(result.state.current, "remainder"))
    return 0


def _cmd_transfinite(args: argparse.Namespace, config: RunConfig) -> int:
    segments = [_points(block) for block in args.segments.split(";")] if args.segments else []
    state = run_transfinite(
        _initial(args), segments, Point.parse(args.keep), args.k, config.k_bound, config.budget, args.policy
    )
    _emit(transfinite_report(state, config), config, args, complex_to_dot(state.current, "remainder"))
    return 0


def _cmd_bisect(args: argparse.Namespace, config: RunConfig) -> int:
    space = _pointed_set(args)
    x = Point.parse(args.point)
    result = bisection_locate(space, x, args.max_steps or config.budget)
    report = with_header(config, "bisect", {"point": str(x), **result.as_dict()})
    _emit(report, config, args, trace_to_dot(result.trace))
    return 0


def _cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    reports = run_verify_suites(args.suite, config)
    if config.format == "json":
        text = dumps(with_header(config, "verify", {"suites": {k: v.as_dict() for k, v in reports.items()}}))
    elif config.format == "csv":
        text = summary_table(reports).to_csv(index=False)
    elif config.format == "text":
        text = summary_table(reports).to_string(index=False) + "\n"
    else:
        raise UsageError("Format 'dot' is not available for verify")
    write_text(text, args.output)
    return 0 if all(r.passed for r in reports.values()) else 5


def _cmd_classify(args: argparse.Namespace, config: RunConfig) -> int:
    space = _pointed_set(args)
    horizon = config.depth if args.horizon is None else args.horizon
    cls = classify_cardinality(space, horizon)
    payload = {"space": pointed_set_to_json(space), "horizon": horizon, "class": str(cls), "count": cls.count}
    _emit(with_header(config, "classify", payload), config, args)
    return 0


def _cmd_naturals(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        indices = [int(part) for part in args.delete.split(",") if part.strip()]
    except ValueError as exc:
        raise MalformedInputError(f"--delete takes comma-separated integers, got {args.delete!r}") from exc
    family = (lambda n: indices + [n]) if args.cofinal else indices
    payload: Dict[str, Any] = naturals_demo(args.bound, family).as_dict()
    if args.topology:
        payload["topology"] = naturals_topology_report(args.bound)
    _emit(with_header(config, "naturals", payload), config, args)
    return 0


def _cmd_verify_p(args: argparse.Namespace, config: RunConfig) -> int:
    verdict = verify_P_definition(_initial(args), config.depth, config.budget)
    _emit(with_header(config, "verify-p", verdict.as_dict()), config, args)
    return 0


def _cmd_export(args: argparse.Namespace, config: RunConfig) -> int:
    if args.report is not None:
        report = load_json_file(args.report)
        if not isinstance(report, dict):
            raise MalformedInputError(f"{args.report} does not hold a report object")
        if "trace" in report:
            text = trace_to_dot(report["trace"]) if args.to == "dot" else dumps(report["trace"])
            write_text(text, args.output)
            return 0
        if "final" not in report or "complex" not in report["final"]:
            raise MalformedInputError(f"{args.report} has neither a trace nor a final complex")
        complex_ = complex_from_json(report["final"]["complex"])
        deleted = report.get("deleted", [])
    else:
        complex_ = _initial(args)
        deleted = []
    text = complex_to_dot(complex_, deleted=deleted) if args.to == "dot" else dumps(complex_to_json(complex_))
    write_text(text, args.output)
    return 0


COMMANDS = {
    "construct": _cmd_construct,
    "preserve": _cmd_preserve,
    "transfinite": _cmd_transfinite,
    "bisect": _cmd_bisect,
    "verify": _cmd_verify,
    "classify": _cmd_classify,
    "naturals": _cmd_naturals,
    "verify-p": _cmd_verify_p,
    "export": _cmd_export,
}


def _report_error(exc: CantorlabError) -> int:
    payload: Dict[str, Any] = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    if isinstance(exc, BudgetExceededError) and exc.trace:
        payload["trace"] = exc.trace
    sys.stderr.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
    return exc.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level, args.log_file)
        config = _config(args)
        logger.info("Running %s with %s", args.command, config.as_dict())
        return COMMANDS[args.command](args, config)
    except CantorlabError as exc:
        return _report_error(exc)


if __name__ == "__main__":
    raise SystemExit(main())

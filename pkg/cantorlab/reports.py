from __future__ import annotations

import logging
from typing import Any, Dict, Iterable, List, Mapping, Optional

import pandas as pd

from . import __version__
from .cantortrie import contains_point, intersects_cylinder, is_dense_at_depth, measure, nowhere_dense_at_depth
from .config_loader import RunConfig
from .construction import ConstructionState, StageRecord, TransfiniteConstructionState, schedule_is_dense, state_checks
from .errors import UsageError
from .serialization import complex_to_json, dumps

logger = logging.getLogger(__name__)

STAGE_COLUMNS = ["stage", "kind", "target", "deleted", "n", "r", "h", "measure", "interval", "witnesses"]


def report_header(config: RunConfig) -> Dict[str, Any]:
    return {"tool": "cantorlab", "version": __version__, "config": config.as_dict()}


def _stage_frame(rows: Iterable[Mapping[str, Any]]) -> pd.DataFrame:
    # Nullable integers so skipped stages show <NA> rather than floats.
    df = pd.DataFrame(list(rows), columns=STAGE_COLUMNS)
    for col in ("n", "r", "h", "witnesses"):
        df[col] = pd.to_numeric(df[col]).astype("Int64")
    return df


def stage_table(records: Iterable[StageRecord]) -> pd.DataFrame:
    """One row per stage of a run."""
    return _stage_frame(r.as_row() for r in records)


def construction_report(state: ConstructionState, config: RunConfig, schedule: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    depth, lookahead = config.depth, config.effective_lookahead
    dense = schedule_is_dense(state, depth, lookahead)
    final_nd = nowhere_dense_at_depth(state.current, depth, lookahead)
    checks = state_checks(state)
    report = report_header(config)
    report.update(
        {
            "command": "construct",
            "schedule": schedule,
            "stages": [r.as_row() for r in state.records],
            "deleted": list(state.deleted),
            "witnesses": [str(w) for w in state.witnesses],
            "final": {
                "measure": str(measure(state.current)),
                "empty": state.current.is_empty,
                "complex": complex_to_json(state.current),
            },
            "checks": {
                "reconstruction": checks["reconstruction"],
                "monotone": checks["monotone"],
                "schedule_dense_at_depth": dense,
                "final_dense_at_depth": is_dense_at_depth(state.current, depth),
                "final_nowhere_dense_at_depth": final_nd,
            },
        }
    )
    if dense and not final_nd:
        logger.warning("Dense schedule left a remainder that is not nowhere dense at depth %d", depth)
    return report


def preserve_report(state: ConstructionState, config: RunConfig) -> Dict[str, Any]:
    report = report_header(config)
    report.update(
        {
            "command": "preserve",
            "stages": [r.as_row() for r in state.records],
            "deleted": list(state.deleted),
            "witnesses": [str(w) for w in state.witnesses],
            "intervals": list(state.intervals),
            "final": {"measure": str(measure(state.current)), "complex": complex_to_json(state.current)},
            "checks": {"witnesses_in_remainder": state_checks(state)["witnesses_in_remainder"]},
        }
    )
    return report


def _limits_hold(state: TransfiniteConstructionState) -> bool:
    by_stage = dict(state.stages)
    return all(
        intersects_cylinder(by_stage[rec.stage], rec.interval) and contains_point(by_stage[rec.stage], rec.witness)
        for rec in state.limits
    )


def transfinite_report(state: TransfiniteConstructionState, config: RunConfig) -> Dict[str, Any]:
    report = report_header(config)
    report.update(
        {
            "command": "transfinite",
            "stage": state.stage.omega_form(),
            "stages": [r.as_row() for r in state.records],
            "deleted": list(state.deleted),
            "witnesses": [str(w) for w in state.witnesses],
            "limits": [rec.as_dict() for rec in state.limits],
            "final": {"measure": str(measure(state.current)), "complex": complex_to_json(state.current)},
            "checks": {
                "witnesses_in_remainder": state_checks(state)["witnesses_in_remainder"],
                "limit_stages_nonempty": _limits_hold(state),
            },
        }
    )
    return report


def with_header(config: RunConfig, command: str, payload: Mapping[str, Any]) -> Dict[str, Any]:
    report = report_header(config)
    report["command"] = command
    report.update(payload)
    return report


def render(report: Mapping[str, Any], fmt: str) -> str:
    """json: the whole report; csv/text: the stage table (or a flat key/value table)."""
    if fmt == "json":
        return dumps(dict(report))
    if "stages" in report and report["stages"]:
        df = _stage_frame(report["stages"])
    else:
        flat = {k: v for k, v in report.items() if k != "config" and not isinstance(v, (dict, list))}
        df = pd.DataFrame([{"key": k, "value": v} for k, v in flat.items()], columns=["key", "value"])
    if fmt == "csv":
        return df.to_csv(index=False)
    if fmt == "text":
        return df.to_string(index=False) + "\n"
    raise UsageError(f"Unknown format {fmt!r}")

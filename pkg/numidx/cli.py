from __future__ import annotations

import argparse
import enum
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from numidx.errors import InvalidInputError, NumIdxError
from numidx.geometry.norms import (
    LpFamily,
    Vec2,
    dual_evaluate,
    evaluate,
    norm_spec,
    parse_norm_spec,
)
from numidx.geometry.operators import Operator2x2, numerical_radius, operator_norm, to_isometry_coords
from numidx.geometry.validation import describe_validation, validate
from numidx.report import render
from numidx.settings import LOG_LEVELS, EngineSettings, get_settings

logger = logging.getLogger(__name__)


class Command(str, enum.Enum):
    radius = "radius"
    norm = "norm"
    index = "index"
    mp = "mp"
    sweep = "sweep"
    verify = "verify"


class IndexMethod(str, enum.Enum):
    bound = "bound"
    brute = "brute"
    certified = "certified"
    all = "all"


class OutputFormat(str, enum.Enum):
    text = "text"
    json = "json"
    csv = "csv"


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    command: Command
    norm_spec: Optional[str] = None
    operator: Optional[str] = None
    vector: Optional[str] = None
    sampled: bool = False
    method: IndexMethod = Field(default=IndexMethod.all)
    p: Optional[float] = None
    sweep_range: Optional[str] = None
    suite: str = Field(default="all")
    grid_resolution: int = Field(default=64, ge=8)
    output_format: OutputFormat = Field(default=OutputFormat.text)
    output_path: Optional[str] = None


def configure_logging(level: str) -> None:
    """Attach a single RichHandler to the package logger."""
    root = logging.getLogger("numidx")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = RichHandler(console=Console(stderr=True), show_path=False, markup=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level.upper())
    root.propagate = False


# flags whose values may start with a minus sign
_LITERAL_FLAGS = ("--op", "--vec")


def _join_literals(argv: list[str]) -> list[str]:
    """Rewrite `--op -1,0,0,1` as `--op=-1,0,0,1`; argparse would read the value as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _LITERAL_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numidx", description="Numerical radii and numerical index of planar norms")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="text")
    common.add_argument("--output", dest="output_path", default=None, help="Write the result to this file")
    common.add_argument("--log-level", default=None, choices=list(LOG_LEVELS), help="Override NIDX_LOG_LEVEL")

    sub = parser.add_subparsers(dest="command", required=True)

    # --- radius ---
    radius = sub.add_parser("radius", parents=[common], help="Numerical radius v(T) of a 2x2 operator")
    radius.add_argument("--norm", dest="norm_spec", required=True, help="Norm spec JSON")
    radius.add_argument("--op", dest="operator", required=True, help='Operator entries "t11,t12,t21,t22"')
    radius.add_argument("--sampled", action="store_true", help="Use the theta-grid oracle for polyhedral norms too")

    # --- norm ---
    norm = sub.add_parser("norm", parents=[common], help="Validate a norm; optionally evaluate a vector or operator")
    norm.add_argument("--norm", dest="norm_spec", required=True, help="Norm spec JSON")
    norm.add_argument("--vec", dest="vector", default=None, help='Vector "x,y"')
    norm.add_argument("--op", dest="operator", default=None, help='Operator entries "t11,t12,t21,t22"')
    norm.add_argument("--sampled", action="store_true", help="Use the theta-grid oracle for polyhedral norms too")

    # --- index ---
    index = sub.add_parser("index", parents=[common], help="Numerical index: contact bound, brute force, certified")
    index.add_argument("--norm", dest="norm_spec", required=True, help="Norm spec JSON")
    index.add_argument("--method", choices=[m.value for m in IndexMethod], default="all")
    index.add_argument("--grid", dest="grid_resolution", type=int, default=None, help="Brute-force resolution")

    # --- mp ---
    mp = sub.add_parser("mp", parents=[common], help="The constant M_p")
    mp.add_argument("--p", type=float, required=True)

    # --- sweep ---
    sweep = sub.add_parser("sweep", parents=[common], help="One row of lp data per exponent")
    sweep.add_argument("--range", dest="sweep_range", required=True, help="start:stop:step")
    sweep.add_argument("--method", choices=[m.value for m in IndexMethod], default="all", help="bound skips brute force")
    sweep.add_argument("--grid", dest="grid_resolution", type=int, default=None, help="Brute-force resolution")

    # --- verify ---
    verify = sub.add_parser("verify", parents=[common], help="Run a property suite")
    verify.add_argument("--suite", default="all", help="lemma1 | minimax | theorem3 | sandwich | isometry | bounds | adjoint | all")
    verify.add_argument("--grid", dest="grid_resolution", type=int, default=None, help="Brute-force resolution")

    return parser


def _config_from_args(args: argparse.Namespace, settings: EngineSettings) -> RunConfig:
    data: dict[str, Any] = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    data.setdefault("grid_resolution", settings.grid_resolution)
    return RunConfig.model_validate(data)


def _load_norm(config: RunConfig):
    norm = parse_norm_spec(config.norm_spec or "")
    verdict = validate(norm)
    if not verdict.passed:
        raise InvalidInputError(f"invalid norm: {verdict.reason}")
    return norm


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_radius(config: RunConfig, settings: EngineSettings) -> dict[str, Any]:
    norm = _load_norm(config)
    op = Operator2x2.parse(config.operator or "")
    method = "sampled" if config.sampled else "auto"
    options = {
        "theta_grid": settings.theta_grid,
        "candidates": settings.refine_candidates,
        "iterations": settings.golden_iterations,
    }
    return {
        "norm": norm_spec(norm),
        "operator": op,
        "method": method,
        "radius": numerical_radius(norm, op, method=method, **options),
        "operator_norm": operator_norm(norm, op, method=method, **options),
        "plus_norm": to_isometry_coords(op).plus_norm,
    }


def _cmd_norm(config: RunConfig, settings: EngineSettings) -> tuple[dict[str, Any], int]:
    norm = parse_norm_spec(config.norm_spec or "")
    verdict = validate(norm)
    out: dict[str, Any] = {"norm": norm_spec(norm), "validation": describe_validation(verdict)}
    if not verdict.passed:
        return out, 2
    if config.vector is not None:
        v = Vec2.of(config.vector.split(","))
        out["vector"] = {"value": v, "norm": evaluate(norm, v), "dual_norm": dual_evaluate(norm, v)}
    if config.operator is not None:
        op = Operator2x2.parse(config.operator)
        method = "sampled" if config.sampled else "auto"
        out["operator"] = {
            "value": op,
            "operator_norm": operator_norm(norm, op, method=method, theta_grid=settings.theta_grid),
        }
    return out, 0


def _cmd_index(config: RunConfig, settings: EngineSettings) -> dict[str, Any]:
    from numidx.index.brute import brute_force_index
    from numidx.index.engine import index_report
    from numidx.index.lp import CERTIFIED_RANGE, certified_index_lp

    norm = _load_norm(config)
    method = config.method
    out: dict[str, Any] = {"norm": norm_spec(norm), "method": method.value}

    if method == IndexMethod.certified:
        if not isinstance(norm, LpFamily):
            raise InvalidInputError("the certified path covers lp norms only")
        value = certified_index_lp(norm.p, grid_size=settings.condition_grid)
        out.update({"value": value, "exact": True, "certified_by": "lp-reduction"})
        return out

    if method in (IndexMethod.bound, IndexMethod.all):
        report = index_report(norm, condition_grid=settings.condition_grid)
        out.update(
            {
                "radius_i4": report.radius_i4,
                "maximizer": {"x": report.maximizer.x, "xstar": report.maximizer.xstar},
                "t0": report.t0,
                "contact": report.contact,
                "condition": report.condition_value,
                "bound": report.lower_bound,
                "exact": report.exact,
                "certified_index": report.certified_index,
                "certified_by": report.certified_by,
                "maximizers_checked": report.maximizers_checked,
            }
        )
        if method == IndexMethod.all and isinstance(norm, LpFamily):
            lo, hi = CERTIFIED_RANGE
            if lo <= norm.p <= hi:
                out["certified_index"] = certified_index_lp(norm.p, grid_size=settings.condition_grid)

    if method in (IndexMethod.brute, IndexMethod.all):
        estimate = brute_force_index(
            norm,
            config.grid_resolution,
            coarse_theta_grid=settings.coarse_theta_grid,
            theta_grid=settings.theta_grid,
            pattern_rounds=settings.pattern_rounds,
        )
        out["brute"] = {
            "value": estimate.value,
            "argmin": estimate.argmin,
            "grid_resolution": estimate.grid_resolution,
            "refined": estimate.refined,
        }
    return out


def _cmd_mp(config: RunConfig, settings: EngineSettings) -> dict[str, Any]:
    from numidx.index.lp import conjugate_exponent, mp_constant

    if config.p is None:
        raise InvalidInputError("--p is required")
    result = mp_constant(config.p)
    return {"p": config.p, "q": conjugate_exponent(config.p), "mp": result.value, "t0": result.t0}


def _cmd_sweep(config: RunConfig, settings: EngineSettings) -> list[Any]:
    from numidx.sweep import SweepRange, run_sweep

    sweep_range = SweepRange.parse(config.sweep_range or "")
    return run_sweep(
        sweep_range,
        brute=config.method != IndexMethod.bound,
        resolution=config.grid_resolution,
        condition_grid=settings.condition_grid,
        coarse_theta_grid=settings.coarse_theta_grid,
        theta_grid=settings.theta_grid,
        pattern_rounds=settings.pattern_rounds,
        workers=settings.workers,
    )


def _cmd_verify(config: RunConfig, settings: EngineSettings) -> list[Any]:
    from numidx.verify import run_suite

    return run_suite(config.suite, resolution=config.grid_resolution)


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path:
        Path(config.output_path).write_text(text, "utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_literals(sys.argv[1:] if argv is None else list(argv)))
    settings = get_settings()
    configure_logging(args.log_level or settings.log_level)

    try:
        config = _config_from_args(args, settings)
        fmt = config.output_format.value
        code = 0

        if config.command == Command.radius:
            text = render(_cmd_radius(config, settings), fmt, title="numerical radius")
        elif config.command == Command.norm:
            out, code = _cmd_norm(config, settings)
            text = render(out, fmt, title="norm")
        elif config.command == Command.index:
            text = render(_cmd_index(config, settings), fmt, title="numerical index")
        elif config.command == Command.mp:
            text = render(_cmd_mp(config, settings), fmt, title="M_p")
        elif config.command == Command.sweep:
            from numidx.sweep import SWEEP_COLUMNS

            text = render(_cmd_sweep(config, settings), fmt, title="lp sweep", columns=SWEEP_COLUMNS)
        else:
            results = _cmd_verify(config, settings)
            columns = None if fmt == "json" else ("name", "passed", "checks", "failures", "worst", "tolerance")
            text = render(results, fmt, title="verify", columns=columns)
            code = 0 if all(r.passed for r in results) else 1
    except (NumIdxError, ValidationError) as exc:
        if isinstance(exc, NumIdxError) and not isinstance(exc, ValueError):
            raise
        print(f"ERROR: {exc}", file=sys.stderr)
        return 2

    _emit(text, config)
    return code

"""Command-line front door: subcommand routing, JSON reports, batch runs.

Every subcommand writes one JSON document (schema_version 1, embedding
the tool version and the resolved configuration) to --out or stdout,
and a short human summary to stderr.  Exit codes: 0 success, 1 domain
errors (indeterminacy, contraction, guards), 2 usage and config errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .curves import (
    Curve,
    intersection_multiplicity,
    is_periodic_curve,
    rational_intersection_points,
)
from .degrees import degree_sequence, is_algebraically_stable_P2, profile_to_json_dict
from .dml import (
    DEFAULT_BIT_GUARD,
    DEFAULT_CURVE_SEARCH_CAP,
    DEFAULT_HORIZON,
    DEFAULT_MAX_PERIOD,
    dml_classify,
)
from .errors import DmlwbError, NotTriangularError
from .hirzebruch import FnModel, contracted_image_check, indeterminacy_fn
from .maps import Point, load_map, map_to_json_dict
from .metrics import DEFAULT_EPS, basin_probe, local_dml_probe
from .parsing import parse_point
from .places import (
    Place,
    abs_value,
    height_affine,
    northcott_enumerate,
    product_formula_check,
    relevant_places,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad flag combinations or invalid config files (exit code 2)."""


def _point_arg(text: str) -> Point:
    return Point(*parse_point(text))


def _place_arg(text: str) -> Place:
    return Place.parse(text)


def _eps_arg(text: str):
    m = re.fullmatch(r"(\d+)\^(-?\d+)", text.strip())
    if m:
        base, k = int(m.group(1)), int(m.group(2))
        return Fraction(base) ** k
    return Fraction(text)


def _curve_arg(text: str) -> Curve:
    return Curve.from_string(text)


def _positive_int(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise ValueError("must be positive")
    return n


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise ValueError("must be nonnegative")
    return n


def _envelope(command: str, config: dict, result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "dmlwb", "version": __version__},
        "command": command,
        "config": config,
        "result": result,
    }


def _emit(doc: dict, out: Optional[str], summary: list[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for line in summary:
        print(line, file=sys.stderr)


def _rename_fn_vars(p) -> str:
    # Poly2 prints in x, y; the model components live in x1, x2
    return str(p).replace("x", "\x00").replace("y", "x2").replace("\x00", "x1")


# -- subcommand handlers ---------------------------------------------------------

def _cmd_degrees(args) -> tuple[dict, dict, list[str]]:
    f = load_map(args.map)
    profile = degree_sequence(f, args.horizon)
    verdict = is_algebraically_stable_P2(f, args.horizon)
    config = {"map": args.map, "horizon": args.horizon}
    result = {
        "profile": profile_to_json_dict(profile),
        "stability": str(verdict),
    }
    summary = [
        f"degrees of the first {args.horizon} iterates: "
        + ", ".join(str(d) for d in profile.degrees),
        f"growth class: {profile.growth_class}; "
        f"lambda estimate: {profile.lambda_estimate:.6g}",
        f"plane stability: {verdict}",
    ]
    return config, result, summary


def _cmd_height(args) -> tuple[dict, dict, list[str]]:
    p = args.point
    h = height_affine(p)
    config = {"point": [str(p.x), str(p.y)]}
    result = {"point": [str(p.x), str(p.y)], "height": h}
    return config, result, [f"H({p.x}, {p.y}) = {h}"]


def _cmd_northcott(args) -> tuple[dict, dict, list[str]]:
    points = northcott_enumerate(args.bound, args.dim)
    config = {"bound": args.bound, "dim": args.dim}
    result = {
        "bound": args.bound,
        "dim": args.dim,
        "count": len(points),
        "points": [str(pt) for pt in points],
    }
    return config, result, [
        f"{len(points)} projective points of height <= {args.bound} in dimension {args.dim}"
    ]


def _cmd_product_check(args) -> tuple[dict, dict, list[str]]:
    x = args.value
    ok = product_formula_check(x)
    breakdown = [
        {"place": str(v), "abs": str(abs_value(x, v))} for v in relevant_places(x)
    ]
    config = {"value": str(x)}
    result = {"value": str(x), "product_is_one": ok, "places": breakdown}
    return config, result, [f"product formula for {x}: {'holds' if ok else 'FAILS'}"]


def _cmd_basin(args) -> tuple[dict, dict, list[str]]:
    f = load_map(args.map)
    if args.model == "p2":
        if args.target is None:
            raise UsageError("--model p2 requires --target (the fixed point)")
        model = f
        target = args.target
    elif args.model.startswith("fn:"):
        if args.target is not None:
            raise UsageError("--target only applies to --model p2; "
                             "ruled-surface probes converge to the canonical point")
        tag = args.model[3:]
        n = None if tag == "auto" else _nonneg_int(tag)
        model = FnModel.from_map(f, n)
        target = None
    else:
        raise UsageError("--model must be fn:auto, fn:<n>, or p2")
    report = basin_probe(model, args.point, target, args.place, args.horizon, args.eps)
    config = {
        "map": args.map,
        "model": args.model,
        "point": [str(args.point.x), str(args.point.y)],
        "place": str(args.place),
        "eps": str(args.eps),
        "horizon": args.horizon,
    }
    summary = [str(report)]
    summary.extend(report.notes)
    return config, report.to_json_dict(), summary


def _cmd_fn_model(args) -> tuple[dict, dict, list[str]]:
    f = load_map(args.map)
    n = None if args.n == "auto" else _nonneg_int(args.n)
    model = FnModel.from_map(f, n)
    components = [
        f"{model.a}*x1 + {model.b}*x2" if model.b else f"{model.a}*x1",
        "x2",
        f"({_rename_fn_vars(model.Ah)})*x3 + ({_rename_fn_vars(model.Bh)})*x4"
        if not model.Bh.is_zero
        else f"({_rename_fn_vars(model.Ah)})*x3",
        f"x2^{model.d}*x4" if model.d != 1 else "x2*x4",
    ]
    result = {
        "n": model.n,
        "d": model.d,
        "threshold": model.threshold,
        "stable": model.is_stable,
        "components": components,
        "map": map_to_json_dict(f),
    }
    if model.is_stable:
        info = indeterminacy_fn(model)
        result["indeterminacy"] = {
            "description": info.description,
            "point": "[1, 0, 0, 1]",
        }
        result["contraction_check"] = contracted_image_check(model)
    else:
        result["indeterminacy"] = None
        result["contraction_check"] = None
    config = {"map": args.map, "n": args.n}
    summary = [
        f"model on F_{model.n} (threshold {model.threshold}, "
        f"{'stable' if model.is_stable else 'NOT stable'})",
    ]
    if model.is_stable:
        summary.append(
            "indeterminacy locus: " + result["indeterminacy"]["description"]
        )
        summary.append(
            "fiber at infinity contracts to [1, 0, 1, 0]: "
            + str(result["contraction_check"])
        )
    else:
        summary.append("below threshold: indeterminacy is not a single point")
    return config, result, summary


def _cmd_curve_period(args) -> tuple[dict, dict, list[str]]:
    f = load_map(args.map)
    period = is_periodic_curve(args.curve, f, args.max_period)
    config = {
        "map": args.map,
        "curve": str(args.curve),
        "max_period": args.max_period,
    }
    result = {
        "curve": str(args.curve),
        "period": period,
        "max_period": args.max_period,
        "is_fixed": period == 1,
    }
    if period is None:
        summary = [f"no period <= {args.max_period} found"]
    else:
        summary = [f"curve has period {period}"]
    return config, result, summary


def _cmd_intersect(args) -> tuple[dict, dict, list[str]]:
    mult = intersection_multiplicity(args.c1, args.c2, args.at)
    config = {
        "c1": str(args.c1),
        "c2": str(args.c2),
        "at": [str(args.at.x), str(args.at.y)],
    }
    result = dict(config)
    result["multiplicity"] = "infinity" if mult == float("inf") else mult
    if args.all_points:
        points, flagged = rational_intersection_points(args.c1, args.c2)
        result["rational_points"] = [[str(p.x), str(p.y)] for p in points]
        result["nonrational_detected"] = flagged
    summary = [f"I_({args.at.x},{args.at.y}) = {result['multiplicity']}"]
    return config, result, summary


def _cmd_dml_scan(args) -> tuple[dict, dict, list[str]]:
    f = load_map(args.map)
    report = dml_classify(
        f,
        args.curve,
        args.point,
        N=args.horizon,
        K=args.max_period,
        bit_guard=args.bit_guard,
    )
    config = {
        "map": args.map,
        "curve": str(args.curve),
        "point": [str(args.point.x), str(args.point.y)],
        "horizon": args.horizon,
        "max_period": args.max_period,
        "bit_guard": args.bit_guard,
    }
    summary = [
        f"verdict: {report.verdict}",
        f"visit set has {len(report.visit_set)} entries; "
        f"{len(report.ap.progressions)} progressions, "
        f"{len(report.ap.exceptional)} exceptional",
    ]
    if report.preperiodic_witness is not None:
        tail, period = report.preperiodic_witness
        summary.append(f"orbit preperiodic: tail {tail}, period {period}")
    if report.curve_period_witness is not None:
        summary.append(f"curve periodic with period {report.curve_period_witness}")
    summary.extend(report.notes)
    return config, report.to_json_dict(), summary


# -- batch orchestration ----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """A batch: the cross product of maps x curves x points x places."""

    maps: tuple[str, ...]
    curves: tuple[str, ...]
    points: tuple[str, ...]
    places: tuple[str, ...]
    N: int = DEFAULT_HORIZON
    K: int = DEFAULT_MAX_PERIOD
    M: int = 50  # horizon for the place-local probes
    bit_guard: int = DEFAULT_BIT_GUARD
    curve_search_cap: int = DEFAULT_CURVE_SEARCH_CAP
    out: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "maps": list(self.maps),
            "curves": list(self.curves),
            "points": list(self.points),
            "places": list(self.places),
            "horizons": {"N": self.N, "K": self.K, "M": self.M},
            "guards": {
                "bit_guard": self.bit_guard,
                "curve_search_cap": self.curve_search_cap,
            },
            "out": self.out,
        }


def load_experiment_config(path: str) -> ExperimentConfig:
    """Load and fully validate a batch config; any defect is a usage error."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("--config: top level must be a JSON object")
    maps = raw.get("maps", [raw["map"]] if "map" in raw else [])
    curves = raw.get("curves", [])
    points = raw.get("points", [])
    places = raw.get("places", ["inf"])
    horizons = raw.get("horizons", {})
    guards = raw.get("guards", {})
    cfg = ExperimentConfig(
        maps=tuple(maps),
        curves=tuple(curves),
        points=tuple(points),
        places=tuple(places),
        N=horizons.get("N", DEFAULT_HORIZON),
        K=horizons.get("K", DEFAULT_MAX_PERIOD),
        M=horizons.get("M", 50),
        bit_guard=guards.get("bit_guard", DEFAULT_BIT_GUARD),
        curve_search_cap=guards.get("curve_search_cap", DEFAULT_CURVE_SEARCH_CAP),
        out=raw.get("out"),
    )
    for path_ in cfg.maps:
        if not isinstance(path_, str):
            raise UsageError(
                f"--config: maps entries must be file paths, got {path_!r}"
            )
        if not os.path.isfile(path_):
            raise UsageError(f"--config: map file does not exist: {path_}")
        try:
            load_map(path_)
        except Exception as exc:
            raise UsageError(f"--config: bad map file {path_}: {exc}") from exc
    for expr in cfg.curves:
        try:
            Curve.from_string(expr)
        except Exception as exc:
            raise UsageError(f"--config: bad curve {expr!r}: {exc}") from exc
    for text in cfg.points:
        try:
            parse_point(text)
        except Exception as exc:
            raise UsageError(f"--config: bad point {text!r}: {exc}") from exc
    for text in cfg.places:
        try:
            Place.parse(text)
        except Exception as exc:
            raise UsageError(f"--config: bad place {text!r}: {exc}") from exc
    for name, value in (("N", cfg.N), ("K", cfg.K), ("M", cfg.M)):
        if not isinstance(value, int) or value <= 0:
            raise UsageError(f"--config: horizon {name} must be a positive integer")
    for name, value in (
        ("bit_guard", cfg.bit_guard),
        ("curve_search_cap", cfg.curve_search_cap),
    ):
        if not isinstance(value, int) or value <= 0:
            raise UsageError(f"--config: guard {name} must be a positive integer")
    return cfg


def _batch_item(cfg: ExperimentConfig, loaded, item) -> dict:
    i_m, i_c, i_p, i_v = item
    f, C = loaded["maps"][i_m], loaded["curves"][i_c]
    p, v = loaded["points"][i_p], loaded["places"][i_v]
    report: dict = {
        "map": cfg.maps[i_m],
        "curve": cfg.curves[i_c],
        "point": cfg.points[i_p],
        "place": cfg.places[i_v],
        "error": None,
    }
    try:
        dml = dml_classify(
            f, C, p,
            N=cfg.N,
            K=cfg.K,
            bit_guard=cfg.bit_guard,
            curve_search_cap=cfg.curve_search_cap,
        )
        report["dml"] = dml.to_json_dict()
        try:
            model = FnModel.from_map(f)
            local = local_dml_probe(model, C, p, v=v, N=cfg.M)
            report["local"] = local.to_json_dict()
        except NotTriangularError:
            report["local"] = None
    except (DmlwbError, ValueError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    return report


def run_batch(cfg: ExperimentConfig, jobs: int = 1) -> dict:
    """Run the cross product; output ordering follows input indices
    regardless of execution interleaving."""
    loaded = {
        "maps": [load_map(p) for p in cfg.maps],
        "curves": [Curve.from_string(s) for s in cfg.curves],
        "points": [Point(*parse_point(s)) for s in cfg.points],
        "places": [Place.parse(s) for s in cfg.places],
    }
    items = [
        (i_m, i_c, i_p, i_v)
        for i_m in range(len(cfg.maps))
        for i_c in range(len(cfg.curves))
        for i_p in range(len(cfg.points))
        for i_v in range(len(cfg.places))
    ]
    if jobs <= 1 or len(items) <= 1:
        results = [_batch_item(cfg, loaded, it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(lambda it: _batch_item(cfg, loaded, it), items))
    return _envelope("batch", cfg.to_json_dict(), results)


def _cmd_batch(args) -> tuple[Optional[str], dict, list[str]]:
    cfg = load_experiment_config(args.config)
    jobs = args.jobs
    env_jobs = os.environ.get("DMLWB_JOBS")
    if env_jobs is not None:
        try:
            jobs = _positive_int(env_jobs)
        except ValueError as exc:
            raise UsageError(f"DMLWB_JOBS: {exc}") from exc
    doc = run_batch(cfg, jobs)
    out = args.out if args.out is not None else cfg.out
    counts: dict[str, int] = {}
    for item in doc["result"]:
        if item["error"] is not None:
            key = "error"
        else:
            key = item["dml"]["verdict"]
        counts[key] = counts.get(key, 0) + 1
    summary = [f"{len(doc['result'])} batch items"]
    for key in sorted(counts):
        summary.append(f"  {key}: {counts[key]}")
    return out, doc, summary


# -- parser wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmlwb",
        description="exact workbench for plane polynomial dynamics",
    )
    parser.add_argument(
        "--version", action="version", version=f"dmlwb {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrees", help="degree growth profile of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--horizon", type=_positive_int, default=8)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_degrees)

    p = sub.add_parser("height", help="height of an affine rational point")
    p.add_argument("--point", required=True, type=_point_arg)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_height)

    p = sub.add_parser("northcott", help="enumerate projective points of bounded height")
    p.add_argument("--bound", required=True, type=_positive_int)
    p.add_argument("--dim", required=True, type=_positive_int)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_northcott)

    p = sub.add_parser("product-check", help="verify the product formula for a rational")
    p.add_argument("--value", required=True, type=Fraction)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_product_check)

    p = sub.add_parser("basin", help="certified convergence toward a fixed point")
    p.add_argument("--map", required=True)
    p.add_argument("--model", default="fn:auto",
                   help="fn:auto, fn:<n>, or p2 (planar probe)")
    p.add_argument("--point", required=True, type=_point_arg)
    p.add_argument("--target", type=_point_arg,
                   help="fixed point for --model p2")
    p.add_argument("--place", default=Place.archimedean(), type=_place_arg)
    p.add_argument("--eps", default=DEFAULT_EPS, type=_eps_arg)
    p.add_argument("--horizon", type=_positive_int, default=50)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_basin)

    p = sub.add_parser("fn-model", help="ruled-surface extension of a triangular map")
    p.add_argument("--map", required=True)
    p.add_argument("--n", default="auto", help="auto (threshold) or an integer")
    p.add_argument("--report", dest="out")
    p.add_argument("--out", dest="out")
    p.set_defaults(handler=_cmd_fn_model)

    p = sub.add_parser("curve-period", help="least period of a curve under a map")
    p.add_argument("--map", required=True)
    p.add_argument("--curve", required=True, type=_curve_arg)
    p.add_argument("--max-period", type=_positive_int, default=DEFAULT_MAX_PERIOD)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_curve_period)

    p = sub.add_parser("intersect", help="local intersection multiplicity")
    p.add_argument("--c1", required=True, type=_curve_arg)
    p.add_argument("--c2", required=True, type=_curve_arg)
    p.add_argument("--at", required=True, type=_point_arg)
    p.add_argument("--all-points", action="store_true",
                   help="also list all rational intersection points")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_intersect)

    p = sub.add_parser("dml", help="dichotomy classification")
    dml_sub = p.add_subparsers(dest="dml_command", required=True)
    ps = dml_sub.add_parser("scan", help="classify one (map, curve, point) instance")
    ps.add_argument("--map", required=True)
    ps.add_argument("--curve", required=True, type=_curve_arg)
    ps.add_argument("--point", required=True, type=_point_arg)
    ps.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON)
    ps.add_argument("--max-period", type=_positive_int, default=DEFAULT_MAX_PERIOD)
    ps.add_argument("--bit-guard", type=_positive_int, default=DEFAULT_BIT_GUARD)
    ps.add_argument("--out")
    ps.set_defaults(handler=_cmd_dml_scan)

    p = sub.add_parser("batch", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", help="override the config's output path")
    p.set_defaults(handler=_cmd_batch)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.handler is _cmd_batch:
            out, doc, summary = _cmd_batch(args)
            _emit(doc, out, summary)
            return 0
        command = args.command
        if command == "dml":
            command = f"dml {args.dml_command}"
        config, result, summary = args.handler(args)
        _emit(_envelope(command, config, result), args.out, summary)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        # unreadable or malformed input files are usage problems
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DmlwbError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

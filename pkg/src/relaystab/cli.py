"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters or configuration, 3 a
simulation broke one of its own invariants.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import regions as rg
from .model import ArrivalPoint, DegenerateLinkError, InvalidParamsError, relay_capture_fraction, validate
from .regions import RegionKind
from .report import csv_text, fmt, overlay_svg, polyline_csv, write_text
from .scenario import PRESETS, Scenario, ScenarioError, parse_grid, parse_mode, parse_point, parse_regions
from .scenario import load, preset_params, with_overrides
from .sim import SimConfigError, classify_stability, empirical_rates, simulate

OUT_ENV = "RELAYSTAB_OUT"
ANALYTIC_CAP = 256 * 256
SIMULATED_CAP = 32 * 32
SUMMARY_REGIONS = (RegionKind.INNER, RegionKind.OUTER, RegionKind.NO_RELAY)


class InvariantError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# JSON schemas of the documented outputs

_CONDITION = {
    "type": "object",
    "required": ["label", "lhs", "threshold", "holds"],
    "properties": {
        "label": {"type": "string"},
        "lhs": {"type": "number"},
        "threshold": {"type": "number"},
        "holds": {"type": "boolean"},
    },
}
_VERDICT = {
    "type": "object",
    "required": ["inside", "binding", "conditions"],
    "properties": {
        "inside": {"type": "boolean"},
        "binding": {"type": "string"},
        "conditions": {"type": "array", "items": _CONDITION},
    },
}
_POINT = {
    "type": "object",
    "required": ["lambda1", "lambda2"],
    "properties": {"lambda1": {"type": "number"}, "lambda2": {"type": "number"}},
}
_ESTIMATE = {
    "type": "object",
    "required": ["value", "stderr", "n"],
    "properties": {
        "value": {"type": ["number", "null"]},
        "stderr": {"type": ["number", "null"]},
        "n": {"type": "integer", "minimum": 0},
    },
}
_QUEUE = {
    "type": "object",
    "required": ["status", "drift", "mean_length", "final_length"],
    "properties": {
        "status": {"enum": ["stable", "unstable", "indeterminate"]},
        "drift": {"type": "number"},
        "mean_length": {"type": "number"},
        "final_length": {"type": "number"},
    },
}

CLASSIFY_SCHEMA = {
    "type": "object",
    "required": ["point", "warnings", "regions"],
    "properties": {
        "point": _POINT,
        "warnings": {"type": "array", "items": {"type": "string"}},
        "regions": {
            "type": "object",
            "required": ["inner", "outer", "no-relay"],
            "additionalProperties": _VERDICT,
        },
    },
}

SIMULATE_SCHEMA = {
    "type": "object",
    "required": ["config", "stability", "empirical", "analytic", "counters", "final_queues"],
    "properties": {
        "config": {"type": "object"},
        "stability": {
            "type": "object",
            "required": ["source1", "source2", "relay"],
            "additionalProperties": _QUEUE,
        },
        "empirical": {"type": "object", "additionalProperties": _ESTIMATE},
        "analytic": {"type": "object"},
        "counters": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "final_queues": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    },
}

SWEEP_SCHEMA = {
    "type": "object",
    "required": ["grid", "extent", "points", "simulated", "agreements", "disagreements",
                 "indeterminates", "inside", "inner_not_outer", "no_relay_not_inner",
                 "violations", "csv"],
    "properties": {
        "grid": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "extent": {"type": "number"},
        "points": {"type": "integer"},
        "simulated": {"type": "boolean"},
        "agreements": {"type": "integer"},
        "disagreements": {"type": "integer"},
        "indeterminates": {"type": "integer"},
        "inside": {"type": "object", "additionalProperties": {"type": "integer"}},
        "inner_not_outer": {"type": "integer"},
        "no_relay_not_inner": {"type": "integer"},
        "violations": {"type": "array", "items": {"type": "object"}},
        "csv": {"type": "string"},
    },
}


# --------------------------------------------------------------------------
# helpers


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _verdict_json(v: rg.RegionVerdict) -> dict:
    return {
        "inside": v.inside,
        "binding": v.binding().label,
        "conditions": [
            {"label": c.label, "lhs": c.lhs, "threshold": c.threshold, "holds": c.holds}
            for c in v.condition_values
        ],
    }


def _point_json(p: ArrivalPoint) -> dict:
    return {"lambda1": p.lambda1, "lambda2": p.lambda2}


def _out_dir(args, scenario: Scenario) -> Path:
    if args.out:
        return Path(args.out)
    if scenario.out is not None:
        return scenario.out
    return Path(os.environ.get(OUT_ENV, "."))


def resolve_scenario(args) -> Scenario:
    if args.scenario and args.preset:
        raise ScenarioError("give either --scenario or --preset, not both")
    if args.scenario:
        scenario = load(args.scenario)
    elif args.preset:
        scenario = Scenario(params=preset_params(args.preset))
    else:
        raise ScenarioError("a --scenario file or a --preset is required")
    report = validate(scenario.params)
    if report.errors:
        raise InvalidParamsError("; ".join(report.errors))
    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return with_overrides(
        scenario,
        point=parse_point(args.point) if getattr(args, "point", None) else None,
        grid=parse_grid(args.grid) if getattr(args, "grid", None) else None,
        regions=parse_regions(args.regions) if getattr(args, "regions", None) else None,
        resolution=getattr(args, "resolution", None),
        horizon=getattr(args, "horizon", None),
        warmup=getattr(args, "warmup", None),
        seed=getattr(args, "seed", None),
        mode=parse_mode(args.mode) if getattr(args, "mode", None) else None,
        pessimistic_relay=True if getattr(args, "pessimistic_relay", False) else None,
        extent=getattr(args, "extent", None),
        max_points=getattr(args, "max_points", None),
    )


def _require_point(scenario: Scenario) -> ArrivalPoint:
    if scenario.point is None:
        raise ScenarioError("no arrival point given (lambda1/lambda2 or --point)")
    p = scenario.point
    if not (0.0 <= p.lambda1 <= 1.0 and 0.0 <= p.lambda2 <= 1.0):
        raise ScenarioError(f"arrival rates must lie in [0, 1], got ({p.lambda1}, {p.lambda2})")
    return p


def _intercepts(params, kinds) -> dict[str, float]:
    return {k.value: rg.axis_intercept(params, k, 1) for k in kinds}


# --------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    scenario = resolve_scenario(args)
    point = _require_point(scenario)
    verdicts = {k.value: rg.contains(scenario.params, point, k) for k in SUMMARY_REGIONS}
    if args.json:
        _emit({
            "point": _point_json(point),
            "warnings": validate(scenario.params).warnings,
            "regions": {name: _verdict_json(v) for name, v in verdicts.items()},
        })
        return 0
    print(f"point lambda1={fmt(point.lambda1)} lambda2={fmt(point.lambda2)}")
    for name, v in verdicts.items():
        print(f"{name}: {'inside' if v.inside else 'outside'} (binding {v.binding().label})")
        for c in v.condition_values:
            mark = "<" if c.holds else ">="
            print(f"  {c.label:<14} {fmt(c.lhs):>14} {mark:>2} {fmt(c.threshold)}")
    return 0


def cmd_region(args) -> int:
    scenario = resolve_scenario(args)
    if scenario.resolution < 2:
        raise ScenarioError("resolution must be at least 2")
    out = _out_dir(args, scenario)
    polys = [rg.boundary_polyline(scenario.params, k, scenario.resolution) for k in scenario.regions]
    files = []
    for poly in polys:
        files.append(str(write_text(out / f"{poly.region.value}.csv", polyline_csv(poly))))
    svg = write_text(out / "regions.svg", overlay_svg(polys))
    _emit({
        "csv": files,
        "svg": str(svg),
        "intercepts": {p.region.value: float(p.lambda1[-1]) for p in polys},
    })
    return 0


def _analytic_predictions(scenario: Scenario, point: ArrivalPoint) -> dict:
    params = scenario.params
    pred: dict = {
        "inner": rg.inner_contains(params, point).inside,
        "outer": rg.outer_contains(params, point).inside,
        "no_relay": rg.no_relay_contains(params, point).inside,
        "assumed_relay_service_rate": rg.assumed_relay_service_rate(params),
    }
    try:
        pred["capture_fraction_1"] = relay_capture_fraction(params.channel, 1)
        pred["capture_fraction_2"] = relay_capture_fraction(params.channel, 2)
        pred["lambda0"] = pred["capture_fraction_1"] * point.lambda1 + pred["capture_fraction_2"] * point.lambda2
    except DegenerateLinkError:
        pred["capture_fraction_1"] = pred["capture_fraction_2"] = pred["lambda0"] = None
        return pred
    try:
        pred["relay_busy"] = rg.relay_busy_probability(params, point)
    except rg.RelayUnstableError:
        pred["relay_busy"] = None
    if scenario.mode.value in ("dom1", "dom2"):
        try:
            rates = rg.dominant_service_rates(params, point, 1 if scenario.mode.value == "dom1" else 2)
            pred["dominant"] = {k: float(v) for k, v in vars(rates).items()}
        except (rg.RelayUnstableError, rg.SaturationError):
            pred["dominant"] = None
    if scenario.mode.value == "outer":
        pred["relay_service_rate"] = params.channel.p03
    return pred


def _config_json(config) -> dict:
    return {
        "point": _point_json(config.point),
        "mode": config.mode.value,
        "pessimistic_relay": config.pessimistic_relay,
        "horizon": config.horizon,
        "warmup": config.warmup,
        "seed": config.seed,
        "sample_stride": config.sample_stride,
        "channel": vars(config.params.channel),
        "access": vars(config.params.access),
    }


def cmd_simulate(args) -> int:
    scenario = resolve_scenario(args)
    point = _require_point(scenario)
    config = scenario.sim_config(point)
    result = simulate(config)
    broken = result.conservation_errors()
    if broken:
        raise InvariantError("; ".join(broken))
    verdict = classify_stability(result)
    _emit({
        "config": _config_json(config),
        "stability": {
            name: vars(q) for name, q in
            zip(("source1", "source2", "relay"), (verdict.source1, verdict.source2, verdict.relay))
        },
        "empirical": empirical_rates(result).as_dict(),
        "analytic": _analytic_predictions(scenario, point),
        "counters": result.totals.as_dict(),
        "final_queues": dict(zip(("source1", "source2", "relay"), result.final_queues)),
    })
    return 0


def _default_extent(params) -> float:
    reach = 0.0
    for k in SUMMARY_REGIONS:
        try:
            reach = max(reach, rg.axis_intercept(params, k, 1), rg.axis_intercept(params, k, 2))
        except rg.EmptyRegionError:
            continue
    return 1.1 * reach if reach > 0 else 1.0


def cmd_sweep(args) -> int:
    scenario = resolve_scenario(args)
    if scenario.grid is None:
        raise ScenarioError("sweep needs a grid (grid key or --grid NxM)")
    n, m = scenario.grid
    cap = scenario.max_points or (SIMULATED_CAP if args.simulate else ANALYTIC_CAP)
    if n * m > cap:
        raise ScenarioError(f"grid {n}x{m} exceeds the cap of {cap} points")
    params = scenario.params
    extent = scenario.extent if scenario.extent is not None else _default_extent(params)
    l1 = np.linspace(0.0, extent, n)
    l2 = np.linspace(0.0, extent, m)
    masks = {k: rg.region_mask(params, k, l1[:, None], l2[None, :]) for k in SUMMARY_REGIONS}

    header = ["lambda1", "lambda2", "inner", "outer", "no_relay", "binding"]
    if args.simulate:
        header += ["sim_source1", "sim_source2", "sim_relay", "sim_verdict", "agreement"]
    rows = []
    agree = disagree = indet = 0
    violations = []
    for i in range(n):
        for j in range(m):
            point = ArrivalPoint(float(l1[i]), float(l2[j]))
            inner = bool(masks[RegionKind.INNER][i, j])
            outer = bool(masks[RegionKind.OUTER][i, j])
            binding = rg.inner_contains(params, point).binding().label
            row = [point.lambda1, point.lambda2, int(inner), int(outer),
                   int(masks[RegionKind.NO_RELAY][i, j]), binding]
            if args.simulate:
                result = simulate(scenario.sim_config(point))
                if result.conservation_errors():
                    raise InvariantError(f"conservation broken at {point}")
                v = classify_stability(result)
                if v.any_unstable:
                    overall = "unstable"
                elif v.all_stable:
                    overall = "stable"
                else:
                    overall = "indeterminate"
                if overall == "indeterminate":
                    status = "indeterminate"
                    indet += 1
                elif (overall == "stable" and not outer) or (overall == "unstable" and inner):
                    status = "disagree"
                    disagree += 1
                    violations.append({**_point_json(point), "simulated": overall,
                                       "inner": inner, "outer": outer})
                else:
                    status = "agree"
                    agree += 1
                row += [*v.statuses(), overall, status]
            else:
                if inner and not outer:
                    disagree += 1
                    violations.append({**_point_json(point), "inner": inner, "outer": outer})
                else:
                    agree += 1
            rows.append(row)

    out = _out_dir(args, scenario)
    path = write_text(out / "sweep.csv", csv_text(header, rows))
    inner_m, outer_m, nor_m = (masks[k] for k in SUMMARY_REGIONS)
    _emit({
        "grid": [n, m],
        "extent": extent,
        "points": n * m,
        "simulated": bool(args.simulate),
        "agreements": agree,
        "disagreements": disagree,
        "indeterminates": indet,
        "inside": {k.value: int(masks[k].sum()) for k in SUMMARY_REGIONS},
        "inner_not_outer": int(np.sum(inner_m & ~outer_m)),
        "no_relay_not_inner": int(np.sum(nor_m & ~inner_m)),
        "violations": violations,
        "csv": str(path),
    })
    return 0


def figure(name: str, out: Path, resolution: int = 200) -> dict:
    """Write the three-region overlay for a built-in parameter set."""
    if name not in PRESETS:
        raise ScenarioError(f"unknown figure {name!r}; choose from {', '.join(PRESETS)}")
    params = PRESETS[name]
    polys = [rg.boundary_polyline(params, k, resolution) for k in SUMMARY_REGIONS]
    files = [str(write_text(out / f"{name}_{p.region.value}.csv", polyline_csv(p))) for p in polys]
    ch = params.channel
    title = f"p13={ch.p13:g}, p23={ch.p23:g}, p10={ch.p10:g}, p20={ch.p20:g}, p03={ch.p03:g}"
    svg = write_text(out / f"{name}.svg", overlay_svg(polys, title))
    intercepts = {p.region.value: float(p.lambda1[-1]) for p in polys}
    return {
        "figure": name,
        "csv": files,
        "svg": str(svg),
        "intercepts": intercepts,
        "inner_minus_no_relay": intercepts["inner"] - intercepts["no-relay"],
    }


def cmd_figure(args) -> int:
    out = Path(args.out) if args.out else Path(os.environ.get(OUT_ENV, "."))
    _emit(figure(args.name, out, args.resolution or 200))
    return 0


# --------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaystab",
        description="Stability-region bounds and simulation for a relay-assisted random-access network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, sim=False):
        p.add_argument("--scenario", help="scenario file (key = value lines)")
        p.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
        if sim:
            p.add_argument("--horizon", type=_positive_int, help="slots to simulate")
            p.add_argument("--warmup", type=_positive_int, help="slots discarded before estimating")
            p.add_argument("--seed", type=_positive_int, help="unsigned 64-bit seed")
            p.add_argument("--mode", choices=["original", "dom1", "dom2", "outer"])
            p.add_argument("--pessimistic-relay", action="store_true",
                           help="relay fails whenever a source coin fires (dom modes only)")

    p = sub.add_parser("classify", help="region membership of one point")
    common(p)
    p.add_argument("--point", help="lambda1,lambda2")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("region", help="boundary CSVs and an overlay SVG")
    common(p)
    p.add_argument("--regions", help="comma list, e.g. inner,outer,no-relay")
    p.add_argument("--resolution", type=int)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("simulate", help="simulate one point and compare with the analysis")
    common(p, sim=True)
    p.add_argument("--point", help="lambda1,lambda2")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="classify (and optionally simulate) a grid")
    common(p, sim=True)
    p.add_argument("--grid", help="NxM")
    p.add_argument("--extent", type=float, help="grid upper limit for both rates")
    p.add_argument("--max-points", type=int, help="cap on N*M")
    p.add_argument("--simulate", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="reproduce a built-in region figure")
    p.add_argument("name", help="fig2 or fig3")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--resolution", type=int)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return 3
    except (ScenarioError, SimConfigError, InvalidParamsError, DegenerateLinkError,
            rg.EmptyRegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Flat ``key = value`` scenario files and the built-in figure presets.

Lines are ``key = value``; blank lines and ``#`` comments are ignored.
Unknown keys are rejected.  Recognised keys and units:

=====================  ===========================================
p13 p23 p10 p20 p03    link success probabilities, per slot
q0 q1 q2               attempt probabilities of R, S1, S2
lambda1 lambda2        arrival rates, packets/slot
preset                 ``fig2`` or ``fig3``; other keys override it
grid                   ``<n>x<m>`` sweep grid (lambda1 x lambda2)
extent                 sweep upper limit for both rates, packets/slot
mode                   ``original``, ``dom1``, ``dom2`` or ``outer``
pessimistic_relay      ``true``/``false``
horizon warmup         slots
sample_stride          slots between trajectory snapshots
seed                   unsigned 64-bit integer
regions                comma list of region names
resolution             boundary samples per region
max_points             sweep cap on n*m
out                    output directory
=====================  ===========================================
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .model import AccessProbs, ArrivalPoint, ChannelParams, SystemParams
from .regions import RegionKind
from .sim import SimConfig, SimMode

PRESETS = {
    "fig2": SystemParams(ChannelParams(0.25, 0.25, 0.9, 0.9, 0.9), AccessProbs(0.45, 0.3, 0.3)),
    "fig3": SystemParams(ChannelParams(0.4, 0.4, 0.9, 0.9, 0.9), AccessProbs(0.45, 0.3, 0.3)),
}

PARAM_KEYS = ("p13", "p23", "p10", "p20", "p03", "q0", "q1", "q2")
OTHER_KEYS = (
    "preset", "lambda1", "lambda2", "grid", "extent", "mode", "pessimistic_relay",
    "horizon", "warmup", "sample_stride", "seed", "regions", "resolution",
    "max_points", "out",
)
DEFAULT_REGIONS = (RegionKind.INNER, RegionKind.OUTER, RegionKind.NO_RELAY)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    params: SystemParams
    point: ArrivalPoint | None = None
    grid: tuple[int, int] | None = None
    extent: float | None = None
    mode: SimMode = SimMode.ORIGINAL
    pessimistic_relay: bool = False
    horizon: int = 1_000_000
    warmup: int = 100_000
    sample_stride: int = 100
    seed: int = 0
    regions: tuple[RegionKind, ...] = DEFAULT_REGIONS
    resolution: int = 200
    max_points: int | None = None
    out: Path | None = None

    def sim_config(self, point: ArrivalPoint | None = None) -> SimConfig:
        point = point or self.point
        if point is None:
            raise ScenarioError("no arrival point given (lambda1/lambda2 or --point)")
        return SimConfig(
            params=self.params,
            point=point,
            mode=self.mode,
            pessimistic_relay=self.pessimistic_relay,
            horizon=self.horizon,
            warmup=self.warmup,
            seed=self.seed,
            sample_stride=self.sample_stride,
        )


def parse_point(text: str) -> ArrivalPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise ScenarioError(f"point must be 'lambda1,lambda2', got {text!r}")
    try:
        return ArrivalPoint(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ScenarioError(f"point must be two numbers, got {text!r}") from None


def parse_grid(text: str) -> tuple[int, int]:
    try:
        n, m = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ScenarioError(f"grid must look like '32x32', got {text!r}") from None
    if n < 1 or m < 1:
        raise ScenarioError(f"grid {text!r} is empty")
    return n, m


def parse_mode(text: str) -> SimMode:
    try:
        return SimMode(text.strip().lower())
    except ValueError:
        raise ScenarioError(
            f"mode must be one of original, dom1, dom2, outer; got {text!r}"
        ) from None


def parse_regions(text: str) -> tuple[RegionKind, ...]:
    try:
        kinds = tuple(RegionKind.parse(name) for name in text.split(",") if name.strip())
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    if not kinds:
        raise ScenarioError("no regions requested")
    return kinds


def _parse_bool(key: str, text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ScenarioError(f"{key} must be true or false, got {text!r}")


def _number(key: str, text: str, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ScenarioError(f"{key} must be a number, got {text!r}") from None


def parse_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PARAM_KEYS and key not in OTHER_KEYS:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def build(entries: dict[str, str]) -> Scenario:
    """Turn parsed key/value pairs into a :class:`Scenario`."""
    unknown = set(entries) - set(PARAM_KEYS) - set(OTHER_KEYS)
    if unknown:
        raise ScenarioError(f"unknown keys: {', '.join(sorted(unknown))}")

    values: dict[str, float] = {}
    if "preset" in entries:
        preset = preset_params(entries["preset"])
        values.update(vars(preset.channel))
        values.update(vars(preset.access))
    for key in PARAM_KEYS:
        if key in entries:
            values[key] = _number(key, entries[key])
    missing = [k for k in PARAM_KEYS if k not in values]
    if missing:
        raise ScenarioError(f"missing parameters: {', '.join(missing)}")
    params = SystemParams(
        ChannelParams(*(values[k] for k in PARAM_KEYS[:5])),
        AccessProbs(*(values[k] for k in PARAM_KEYS[5:])),
    )

    kw: dict = {}
    if ("lambda1" in entries) != ("lambda2" in entries):
        raise ScenarioError("lambda1 and lambda2 must be given together")
    if "lambda1" in entries:
        kw["point"] = ArrivalPoint(
            _number("lambda1", entries["lambda1"]), _number("lambda2", entries["lambda2"])
        )
    if "grid" in entries:
        kw["grid"] = parse_grid(entries["grid"])
    if "extent" in entries:
        kw["extent"] = _number("extent", entries["extent"])
    if "mode" in entries:
        kw["mode"] = parse_mode(entries["mode"])
    if "pessimistic_relay" in entries:
        kw["pessimistic_relay"] = _parse_bool("pessimistic_relay", entries["pessimistic_relay"])
    for key in ("horizon", "warmup", "sample_stride", "seed", "resolution", "max_points"):
        if key in entries:
            kw[key] = _number(key, entries[key], int)
    if "regions" in entries:
        kw["regions"] = parse_regions(entries["regions"])
    if "out" in entries:
        kw["out"] = Path(entries["out"])
    return Scenario(params=params, **kw)


def load(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc.strerror}") from None
    return build(parse_text(text))


def preset_params(name: str) -> SystemParams:
    try:
        return PRESETS[name.strip().lower()]
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def with_overrides(scenario: Scenario, **overrides) -> Scenario:
    """Copy ``scenario`` with every non-``None`` override applied."""
    return replace(scenario, **{k: v for k, v in overrides.items() if v is not None})

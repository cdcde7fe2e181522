"""Inner bound, outer bound and no-relay stability regions.

Every region here is a finite union/intersection of half-planes
``a * lambda1 + b * lambda2 < c`` with ``a, b >= 0``.  The condition builders
accept plain floats or numpy arrays for the arrival rates, so the same code
serves single-point verdicts and whole-grid masks.

All inequalities are strict: a point lying exactly on a boundary is outside.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import (
    ArrivalPoint,
    DerivedRates,
    SystemParams,
    departure_probability,
    relay_arrival_rate,
    relay_capture_fraction,
    validate,
)

ArrayLike = Union[float, np.ndarray]

BISECTION_TOL = 1e-6


class RelayUnstableError(ValueError):
    """The relay queue is not stable under the assumed service rate."""


class SaturationError(ValueError):
    """A source queue in a dominant system is saturated."""


class EmptyRegionError(ValueError):
    """The origin is not inside the requested region."""


class RegionKind(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    NO_RELAY = "no-relay"
    INNER_SUB1 = "inner-1"
    INNER_SUB2 = "inner-2"
    INNER_RELAY = "inner-relay"
    OUTER_SUB1 = "outer-1"
    OUTER_SUB2 = "outer-2"
    OUTER_RELAY = "outer-relay"

    @classmethod
    def parse(cls, name: str) -> RegionKind:
        key = name.strip().lower().replace("_", "-")
        aliases = {"norelay": "no-relay", "nor": "no-relay", "in": "inner", "out": "outer"}
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown region {name!r}")


@dataclass(frozen=True)
class Condition:
    label: str
    lhs: float
    threshold: float

    @property
    def holds(self) -> bool:
        return self.lhs < self.threshold


@dataclass(frozen=True)
class RegionVerdict:
    region: RegionKind
    inside: bool
    condition_values: list[Condition]

    def binding(self) -> Condition:
        """The inequality that decides membership.

        Conditions are scored by ``lhs / threshold``; an intersection takes
        its worst member, a union its best.
        """
        def ratio(c: Condition) -> float:
            if c.threshold > 0:
                return c.lhs / c.threshold
            return np.inf if c.lhs >= c.threshold else -np.inf

        by_suffix = {c.label.rsplit("-", 1)[1]: c for c in self.condition_values}
        if len(by_suffix) <= 2:
            return max(self.condition_values, key=ratio)
        sub1 = max(by_suffix["1a"], by_suffix["1b"], key=ratio)
        sub2 = max(by_suffix["2a"], by_suffix["2b"], key=ratio)
        either = min(sub1, sub2, key=ratio)
        if "R" not in by_suffix:
            return either
        return max(either, by_suffix["R"], key=ratio)


@dataclass(frozen=True)
class BoundaryPolyline:
    lambda1: np.ndarray
    lambda2_max: np.ndarray
    region: RegionKind
    resolution: int

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.lambda1.tolist(), self.lambda2_max.tolist()))


# --------------------------------------------------------------------------
# condition builders: label -> (lhs, threshold)


def _inner_conditions(params: SystemParams, l1: ArrayLike, l2: ArrayLike) -> dict:
    ch, acc = params.channel, params.access
    q0, q1, q2 = acc.q0, acc.q1, acc.q2
    p13, p23, p10, p20, p03 = ch.p13, ch.p23, ch.p10, ch.p20, ch.p03
    c1 = p13 + p10 * (1 - p13)
    c2 = p23 + p20 * (1 - p23)
    silent = (1 - q1) * (1 - q2) * p03

    # first dominant system (source 1 saturated)
    a1 = ((1 - q1) * (1 - q2) * p03 + q1 * p10 * (1 - p13)) / (q1 * silent * c1)
    b1 = ((1 - q2) * p03 + p20 * (1 - p23)) / (silent * c2)
    a1r = p10 * (1 - p13) / c1
    b1r = ((1 - q2) * p03 + q2 * p20 * (1 - p23)) / (q2 * c2)

    # second dominant system (source 2 saturated)
    a2 = ((1 - q1) * p03 + p10 * (1 - p13)) / (silent * c1)
    b2 = ((1 - q1) * (1 - q2) * p03 + q2 * p20 * (1 - p23)) / (q2 * silent * c2)
    a2r = (q1 * p10 * (1 - p13) + (1 - q1) * p03) / (q1 * c1)
    b2r = p20 * (1 - p23) / c2

    relay = p10 * (1 - p13) / c1 * l1 + p20 * (1 - p23) / c2 * l2
    return {
        "inner-1a": (a1 * l1 + b1 * l2, 1.0),
        "inner-1b": (a1r * l1 + b1r * l2, silent),
        "inner-2a": (a2 * l1 + b2 * l2, 1.0),
        "inner-2b": (a2r * l1 + b2r * l2, silent),
        "inner-R": (relay, q0 * silent),
    }


def _outer_conditions(params: SystemParams, l1: ArrayLike, l2: ArrayLike) -> dict:
    ch, acc = params.channel, params.access
    q1, q2 = acc.q1, acc.q2
    p13, p23, p10, p20, p03 = ch.p13, ch.p23, ch.p10, ch.p20, ch.p03
    c1 = p13 + p10 * (1 - p13)
    c2 = p23 + p20 * (1 - p23)
    relay = p10 * (1 - p13) / c1 * l1 + p20 * (1 - p23) / c2 * l2
    return {
        "outer-1a": (l1 / (q1 * c1) + l2 / ((1 - q1) * c2), 1.0),
        "outer-1b": (l2, q2 * (1 - q1) * c2),
        "outer-2a": (l2 / (q2 * c2) + l1 / ((1 - q2) * c1), 1.0),
        "outer-2b": (l1, q1 * (1 - q2) * c1),
        "outer-R": (relay, p03),
    }


def _no_relay_conditions(params: SystemParams, l1: ArrayLike, l2: ArrayLike) -> dict:
    ch, acc = params.channel, params.access
    q1, q2 = acc.q1, acc.q2
    p13, p23 = ch.p13, ch.p23
    return {
        "no-relay-1a": (l1 + q1 * p13 / ((1 - q1) * p23) * l2, q1 * p13),
        "no-relay-1b": (l2, q2 * (1 - q1) * p23),
        "no-relay-2a": (l2 + q2 * p23 / ((1 - q2) * p13) * l1, q2 * p23),
        "no-relay-2b": (l1, q1 * (1 - q2) * p13),
    }


_FAMILY = {
    RegionKind.INNER: ("inner", _inner_conditions),
    RegionKind.INNER_SUB1: ("inner", _inner_conditions),
    RegionKind.INNER_SUB2: ("inner", _inner_conditions),
    RegionKind.INNER_RELAY: ("inner", _inner_conditions),
    RegionKind.OUTER: ("outer", _outer_conditions),
    RegionKind.OUTER_SUB1: ("outer", _outer_conditions),
    RegionKind.OUTER_SUB2: ("outer", _outer_conditions),
    RegionKind.OUTER_RELAY: ("outer", _outer_conditions),
    RegionKind.NO_RELAY: ("no-relay", _no_relay_conditions),
}


def _labels(kind: RegionKind) -> tuple[str, ...]:
    prefix = _FAMILY[kind][0]
    if kind in (RegionKind.INNER_SUB1, RegionKind.OUTER_SUB1):
        return (f"{prefix}-1a", f"{prefix}-1b")
    if kind in (RegionKind.INNER_SUB2, RegionKind.OUTER_SUB2):
        return (f"{prefix}-2a", f"{prefix}-2b")
    if kind in (RegionKind.INNER_RELAY, RegionKind.OUTER_RELAY):
        return (f"{prefix}-R",)
    if kind is RegionKind.NO_RELAY:
        return (f"{prefix}-1a", f"{prefix}-1b", f"{prefix}-2a", f"{prefix}-2b")
    return (f"{prefix}-1a", f"{prefix}-1b", f"{prefix}-2a", f"{prefix}-2b", f"{prefix}-R")


def _compose(kind: RegionKind, conds: dict):
    """Apply the region algebra to per-condition truth values."""
    prefix = _FAMILY[kind][0]

    def ok(suffix):
        lhs, thr = conds[f"{prefix}-{suffix}"]
        return np.less(lhs, thr)

    sub1 = np.logical_and(ok("1a"), ok("1b"))
    sub2 = np.logical_and(ok("2a"), ok("2b"))
    if kind in (RegionKind.INNER_SUB1, RegionKind.OUTER_SUB1):
        return sub1
    if kind in (RegionKind.INNER_SUB2, RegionKind.OUTER_SUB2):
        return sub2
    if kind is RegionKind.NO_RELAY:
        return np.logical_or(sub1, sub2)
    relay = ok("R")
    if kind in (RegionKind.INNER_RELAY, RegionKind.OUTER_RELAY):
        return relay
    return np.logical_and(np.logical_or(sub1, sub2), relay)


def _checked(params: SystemParams) -> None:
    validate(params).raise_if_errors()
    # capture fractions must be defined for both sources
    relay_capture_fraction(params.channel, 1)
    relay_capture_fraction(params.channel, 2)


def contains(params: SystemParams, point: ArrivalPoint, kind: RegionKind) -> RegionVerdict:
    """Membership of ``point`` in region ``kind`` with every inequality reported."""
    _checked(params)
    builder = _FAMILY[kind][1]
    conds = builder(params, float(point.lambda1), float(point.lambda2))
    inside = bool(_compose(kind, conds))
    values = [Condition(label, float(conds[label][0]), float(conds[label][1])) for label in _labels(kind)]
    return RegionVerdict(kind, inside, values)


def inner_contains(params: SystemParams, point: ArrivalPoint) -> RegionVerdict:
    return contains(params, point, RegionKind.INNER)


def outer_contains(params: SystemParams, point: ArrivalPoint) -> RegionVerdict:
    return contains(params, point, RegionKind.OUTER)


def no_relay_contains(params: SystemParams, point: ArrivalPoint) -> RegionVerdict:
    return contains(params, point, RegionKind.NO_RELAY)


def region_mask(params: SystemParams, kind: RegionKind, lambda1, lambda2) -> np.ndarray:
    """Vectorized membership over broadcastable arrays of arrival rates."""
    _checked(params)
    l1 = np.asarray(lambda1, dtype=float)
    l2 = np.asarray(lambda2, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        conds = _FAMILY[kind][1](params, l1, l2)
        return np.asarray(_compose(kind, conds), dtype=bool)


def grid_membership(
    params: SystemParams, kind: RegionKind, n: int, extent: float = 1.0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Membership on an ``n x n`` grid over ``[0, extent]^2``.

    Returns ``(lambda1, lambda2, mask)`` with ``mask[i, j]`` for
    ``(lambda1[i], lambda2[j])``, so each row is a fixed-lambda1 column of
    the plane.
    """
    axis = np.linspace(0.0, extent, n)
    mask = region_mask(params, kind, axis[:, None], axis[None, :])
    return axis, axis, mask


# --------------------------------------------------------------------------
# relay occupancy and dominant-system rates


def assumed_relay_service_rate(params: SystemParams) -> float:
    """Relay service rate when both sources are taken to always contend."""
    acc = params.access
    return acc.q0 * (1 - acc.q1) * (1 - acc.q2) * params.channel.p03


def relay_busy_probability(params: SystemParams, point: ArrivalPoint) -> float:
    _checked(params)
    lam0 = relay_arrival_rate(params.channel, point)
    mu0 = assumed_relay_service_rate(params)
    if not lam0 < mu0:
        raise RelayUnstableError(
            f"relay arrival rate {lam0:.6g} >= assumed service rate {mu0:.6g}"
        )
    return lam0 / mu0


def _occupancy(lam: float, mu: float, which: str) -> float:
    if not lam < mu:
        raise SaturationError(f"{which}: arrival rate {lam:.6g} >= service rate {mu:.6g}")
    return lam / mu


def dominant_service_rates(
    params: SystemParams, point: ArrivalPoint, dominant: int
) -> DerivedRates:
    """Service rates and occupancies in the system where ``dominant`` never goes quiet.

    The saturated source keeps drawing its attempt coin while empty, sending
    dummy packets; the other source sees it as always backlogged.
    """
    if dominant == 2:
        r = dominant_service_rates(params.swapped(), point.swapped(), 1)
        return DerivedRates(
            lambda0=r.lambda0,
            mu0=r.mu0,
            mu1=r.mu2,
            mu2=r.mu1,
            relay_busy=r.relay_busy,
            source_busy_1=r.source_busy_2,
            source_busy_2=r.source_busy_1,
        )
    if dominant != 1:
        raise ValueError(f"dominant must be 1 or 2, got {dominant!r}")

    busy0 = relay_busy_probability(params, point)
    acc, ch = params.access, params.channel
    relay_quiet = 1 - acc.q0 * busy0
    mu2 = acc.q2 * (1 - acc.q1) * relay_quiet * departure_probability(ch, 2)
    busy2 = _occupancy(point.lambda2, mu2, "source 2")
    mu1 = acc.q1 * (1 - acc.q2 * busy2) * relay_quiet * departure_probability(ch, 1)
    busy1 = _occupancy(point.lambda1, mu1, "source 1")
    return DerivedRates(
        lambda0=relay_arrival_rate(ch, point),
        mu0=assumed_relay_service_rate(params),
        mu1=mu1,
        mu2=mu2,
        relay_busy=busy0,
        source_busy_1=busy1,
        source_busy_2=busy2,
    )


# --------------------------------------------------------------------------
# boundaries


def _bisect_sup(inside, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    """Largest value with ``inside`` true, given ``inside(lo)`` and not ``inside(hi)``."""
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        ok = inside(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def axis_intercept(params: SystemParams, kind: RegionKind, axis: int = 1,
                   tol: float = BISECTION_TOL) -> float:
    """Supremum of the region along the lambda1 (``axis=1``) or lambda2 axis."""
    if not region_mask(params, kind, 0.0, 0.0):
        raise EmptyRegionError(f"{kind.value} region does not contain the origin")
    if axis == 1:
        probe = lambda x: region_mask(params, kind, x, 0.0)
    elif axis == 2:
        probe = lambda x: region_mask(params, kind, 0.0, x)
    else:
        raise ValueError("axis must be 1 or 2")
    if probe(np.array(1.0)):
        return 1.0
    return float(_bisect_sup(probe, np.array(0.0), np.array(1.0), tol))


def boundary_polyline(
    params: SystemParams, kind: RegionKind, resolution: int, tol: float = BISECTION_TOL
) -> BoundaryPolyline:
    """Trace ``lambda2_max(lambda1)`` from the origin to the lambda1 intercept."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    x_max = axis_intercept(params, kind, 1, tol)
    xs = np.linspace(0.0, x_max, resolution)
    top = region_mask(params, kind, xs, 1.0)
    base = region_mask(params, kind, xs, 0.0)
    lo = np.zeros_like(xs)
    hi = np.ones_like(xs)
    ys = _bisect_sup(lambda y: region_mask(params, kind, xs, y), lo, hi, tol)
    ys = np.where(top, 1.0, np.where(base, ys, 0.0))
    return BoundaryPolyline(xs, ys, kind, resolution)

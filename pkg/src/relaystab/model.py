"""Parameter records and closed-form per-packet quantities.

Link indices follow the usual convention for this network: ``1`` and ``2``
are the sources, ``0`` is the relay and ``3`` is the destination, so ``p13``
is the per-slot success probability of the source-1 to destination link.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

PROB_FIELDS = ("p13", "p23", "p10", "p20", "p03")


class DegenerateLinkError(ValueError):
    """Raised when a source can never get a packet off its queue."""


class InvalidParamsError(ValueError):
    """Raised by analytic routines handed out-of-range probabilities."""


@dataclass(frozen=True)
class ChannelParams:
    p13: float
    p23: float
    p10: float
    p20: float
    p03: float

    def direct(self, source: int) -> float:
        return _pick(source, self.p13, self.p23)

    def overhear(self, source: int) -> float:
        return _pick(source, self.p10, self.p20)

    def swapped(self) -> ChannelParams:
        return ChannelParams(self.p23, self.p13, self.p20, self.p10, self.p03)


@dataclass(frozen=True)
class AccessProbs:
    q0: float
    q1: float
    q2: float

    def swapped(self) -> AccessProbs:
        return AccessProbs(self.q0, self.q2, self.q1)


@dataclass(frozen=True)
class ArrivalPoint:
    lambda1: float
    lambda2: float

    def swapped(self) -> ArrivalPoint:
        return ArrivalPoint(self.lambda2, self.lambda1)


@dataclass(frozen=True)
class SystemParams:
    channel: ChannelParams
    access: AccessProbs

    def swapped(self) -> SystemParams:
        """Relabel source 1 as source 2 and vice versa."""
        return SystemParams(self.channel.swapped(), self.access.swapped())


@dataclass(frozen=True)
class DerivedRates:
    """Rates (packets/slot) and queue occupancies for one operating point."""

    lambda0: float
    mu0: float
    mu1: float
    mu2: float
    relay_busy: float
    source_busy_1: float
    source_busy_2: float


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_if_errors(self) -> None:
        if self.errors:
            raise InvalidParamsError("; ".join(self.errors))


def _pick(source: int, first: float, second: float) -> float:
    if source == 1:
        return first
    if source == 2:
        return second
    raise ValueError(f"source index must be 1 or 2, got {source!r}")


def _check_unit(report: ValidationReport, record: object) -> None:
    for f in fields(record):
        value = getattr(record, f.name)
        # NaN fails both comparisons and is reported too.
        if not (0.0 <= value <= 1.0):
            report.errors.append(f"{f.name}={value!r} is outside [0, 1]")


def validate(params: SystemParams) -> ValidationReport:
    """Check every probability lies in [0, 1].

    A relay whose link to the destination is no better than a direct link
    is reported as a warning only; all formulas stay well defined.
    """
    report = ValidationReport()
    _check_unit(report, params.channel)
    _check_unit(report, params.access)
    ch = params.channel
    if not report.errors and ch.p03 <= max(ch.p13, ch.p23):
        report.warnings.append(
            f"relay advantage violated: p03={ch.p03!r} <= max(p13, p23)="
            f"{max(ch.p13, ch.p23)!r}"
        )
    return report


def validate_point(point: ArrivalPoint) -> ValidationReport:
    report = ValidationReport()
    _check_unit(report, point)
    return report


def departure_probability(channel: ChannelParams, source: int) -> float:
    """Probability that a lone transmission leaves the source queue.

    Either the destination decodes it, or the destination misses it and the
    relay picks it up.
    """
    p_d = channel.direct(source)
    p_r = channel.overhear(source)
    return p_d + p_r * (1.0 - p_d)


def relay_capture_fraction(channel: ChannelParams, source: int) -> float:
    """Fraction of packets leaving source ``source`` that end up at the relay."""
    p_d = channel.direct(source)
    p_r = channel.overhear(source)
    denom = p_d + p_r * (1.0 - p_d)
    if denom <= 0.0:
        raise DegenerateLinkError(
            f"source {source} has p{source}3 = p{source}0 = 0; no packet can depart"
        )
    return p_r * (1.0 - p_d) / denom


def relay_arrival_rate(channel: ChannelParams, point: ArrivalPoint) -> float:
    """Long-run packet arrival rate at the relay queue (packets/slot)."""
    return (
        relay_capture_fraction(channel, 1) * point.lambda1
        + relay_capture_fraction(channel, 2) * point.lambda2
    )

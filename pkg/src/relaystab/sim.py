"""Slot-level Monte Carlo simulation of the two-source, one-relay network.

Each slot consumes exactly eight uniforms from a PCG64 stream, whatever
happens in it, so a run is a pure function of its configuration::

    col 0, 1   Bernoulli arrivals at source 1, 2
    col 2, 3   attempt coins of source 1, 2 (drawn even when idle)
    col 4      attempt coin of the relay
    col 5      destination decodes the lone source packet
    col 6      relay decodes it (used only if the destination missed)
    col 7      destination decodes the relay packet

Packets arriving in slot ``t`` can first be sent in slot ``t + 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, replace

import numba
import numpy as np

from .model import ArrivalPoint, SystemParams, validate, validate_point

UNIFORMS_PER_SLOT = 8
CHUNK_SLOTS = 1 << 16

# queue columns in trajectories and in the kernel state
QUEUE_NAMES = ("source1", "source2", "relay")


class SimConfigError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


class SimMode(enum.Enum):
    ORIGINAL = "original"
    DOMINANT_S1 = "dom1"
    DOMINANT_S2 = "dom2"
    OUTER_MODIFIED = "outer"


_MODE_CODE = {
    SimMode.ORIGINAL: 0,
    SimMode.DOMINANT_S1: 1,
    SimMode.DOMINANT_S2: 2,
    SimMode.OUTER_MODIFIED: 3,
}


@dataclass(frozen=True)
class Counters:
    """Event counts over some window of slots."""

    arrivals_1: int = 0
    arrivals_2: int = 0
    direct_1: int = 0
    direct_2: int = 0
    captures_1: int = 0
    captures_2: int = 0
    relay_deliveries: int = 0
    collisions: int = 0
    busy_1: int = 0
    busy_2: int = 0
    busy_0: int = 0
    attempts_1: int = 0
    attempts_2: int = 0
    attempts_0: int = 0
    dummy_attempts_1: int = 0
    dummy_attempts_2: int = 0
    departures_1: int = 0
    departures_2: int = 0

    @classmethod
    def from_array(cls, values) -> Counters:
        return cls(*(int(v) for v in values))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


N_COUNTERS = len(fields(Counters))
(
    C_ARR1, C_ARR2, C_DIR1, C_DIR2, C_CAP1, C_CAP2, C_RDEL, C_COLL,
    C_BUSY1, C_BUSY2, C_BUSY0, C_ATT1, C_ATT2, C_ATT0, C_DUM1, C_DUM2,
    C_DEP1, C_DEP2,
) = range(N_COUNTERS)


@dataclass(frozen=True)
class SimConfig:
    params: SystemParams
    point: ArrivalPoint
    mode: SimMode = SimMode.ORIGINAL
    pessimistic_relay: bool = False
    horizon: int = 1_000_000
    warmup: int = 100_000
    seed: int = 0
    sample_stride: int = 100

    def check(self) -> None:
        """Raise :class:`SimConfigError` listing every problem found."""
        problems = list(validate(self.params).errors)
        problems += validate_point(self.point).errors
        if self.horizon < 10_000:
            problems.append(f"horizon={self.horizon} must be at least 10000 slots")
        if not 0 <= self.warmup < self.horizon:
            problems.append(f"warmup={self.warmup} must lie in [0, horizon)")
        if self.sample_stride < 1:
            problems.append("sample_stride must be >= 1")
        if self.seed < 0:
            problems.append("seed must be a nonnegative integer")
        if self.pessimistic_relay and self.mode not in (SimMode.DOMINANT_S1, SimMode.DOMINANT_S2):
            problems.append("pessimistic_relay is only valid with dom1/dom2 modes")
        if problems:
            raise SimConfigError("; ".join(problems))


@dataclass(eq=False)
class SimResult:
    config: SimConfig
    snapshot_slots: np.ndarray
    queues: np.ndarray  # (n_snapshots, 3), columns in QUEUE_NAMES order
    final_queues: tuple[int, int, int]
    totals: Counters
    window: Counters
    window_slots: int

    @property
    def rates(self) -> EmpiricalRates:
        return empirical_rates(self)

    def identical(self, other: SimResult) -> bool:
        return (
            self.config == other.config
            and np.array_equal(self.snapshot_slots, other.snapshot_slots)
            and np.array_equal(self.queues, other.queues)
            and self.final_queues == other.final_queues
            and self.totals == other.totals
            and self.window == other.window
        )

    def conservation_errors(self) -> list[str]:
        """Empty when every packet is accounted for."""
        t = self.totals
        q1, q2, q0 = self.final_queues
        out = []
        if t.arrivals_1 != t.direct_1 + t.captures_1 + q1:
            out.append("source 1 packets not conserved")
        if t.arrivals_2 != t.direct_2 + t.captures_2 + q2:
            out.append("source 2 packets not conserved")
        if t.captures_1 + t.captures_2 != t.relay_deliveries + q0:
            out.append("relay packets not conserved")
        if any(v < 0 for v in t.as_dict().values()):
            out.append("negative counter")
        return out


@numba.njit(cache=True)
def _bump(counters, k, in_window):
    counters[0, k] += 1
    if in_window:
        counters[1, k] += 1


@numba.njit(cache=True)
def _run_chunk(u, t0, warmup, stride, q, counters, snap_slots, snaps, n_snap,
               lam1, lam2, q0, q1, q2, p13, p23, p10, p20, p03, mode, pessimistic):
    for k in range(u.shape[0]):
        t = t0 + k
        w = t >= warmup
        if t % stride == 0:
            snap_slots[n_snap] = t
            snaps[n_snap, 0] = q[0]
            snaps[n_snap, 1] = q[1]
            snaps[n_snap, 2] = q[2]
            n_snap += 1
        if q[0] > 0:
            _bump(counters, C_BUSY1, w)
        if q[1] > 0:
            _bump(counters, C_BUSY2, w)
        if q[2] > 0:
            _bump(counters, C_BUSY0, w)

        coin1 = u[k, 2] < q1
        coin2 = u[k, 3] < q2
        tx1 = coin1 and (q[0] > 0 or mode == 1)
        tx2 = coin2 and (q[1] > 0 or mode == 2)
        if mode == 3:
            tx0 = q[2] > 0
        else:
            tx0 = u[k, 4] < q0 and q[2] > 0
        if tx1:
            _bump(counters, C_ATT1, w)
            if q[0] == 0:
                _bump(counters, C_DUM1, w)
        if tx2:
            _bump(counters, C_ATT2, w)
            if q[1] == 0:
                _bump(counters, C_DUM2, w)
        if tx0:
            _bump(counters, C_ATT0, w)

        # the relay shares the sources' channel except in the outer mode
        shared = int(tx1) + int(tx2)
        if mode != 3:
            shared += int(tx0)
        if shared >= 2:
            _bump(counters, C_COLL, w)

        captured = 0
        if shared == 1 and (tx1 or tx2):
            src = 0 if tx1 else 1
            if q[src] > 0:
                p_d = p13 if src == 0 else p23
                p_r = p10 if src == 0 else p20
                if u[k, 5] < p_d:
                    q[src] -= 1
                    _bump(counters, C_DIR1 + src, w)
                    _bump(counters, C_DEP1 + src, w)
                elif u[k, 6] < p_r:
                    # a lone source means the relay is silent, hence listening;
                    # in the outer mode it listens on the other channel anyway
                    q[src] -= 1
                    captured = 1
                    _bump(counters, C_CAP1 + src, w)
                    _bump(counters, C_DEP1 + src, w)

        if tx0 and (mode == 3 or shared == 1):
            blocked = pessimistic and (coin1 or coin2)
            if not blocked and u[k, 7] < p03:
                q[2] -= 1
                _bump(counters, C_RDEL, w)
        q[2] += captured

        if u[k, 0] < lam1:
            q[0] += 1
            _bump(counters, C_ARR1, w)
        if u[k, 1] < lam2:
            q[1] += 1
            _bump(counters, C_ARR2, w)
    return n_snap


def simulate(config: SimConfig) -> SimResult:
    """Run ``config.horizon`` slots and collect counters and trajectories."""
    config.check()
    ch, acc, pt = config.params.channel, config.params.access, config.point
    rng = np.random.Generator(np.random.PCG64(config.seed))

    q = np.zeros(3, dtype=np.int64)
    counters = np.zeros((2, N_COUNTERS), dtype=np.int64)
    n_total = -(-config.horizon // config.sample_stride)
    snap_slots = np.zeros(n_total, dtype=np.int64)
    snaps = np.zeros((n_total, 3), dtype=np.int64)
    n_snap = 0
    t0 = 0
    while t0 < config.horizon:
        n = min(CHUNK_SLOTS, config.horizon - t0)
        u = rng.random((n, UNIFORMS_PER_SLOT))
        n_snap = _run_chunk(
            u, t0, config.warmup, config.sample_stride, q, counters, snap_slots, snaps, n_snap,
            pt.lambda1, pt.lambda2, acc.q0, acc.q1, acc.q2,
            ch.p13, ch.p23, ch.p10, ch.p20, ch.p03,
            _MODE_CODE[config.mode], config.pessimistic_relay,
        )
        t0 += n

    return SimResult(
        config=config,
        snapshot_slots=snap_slots[:n_snap],
        queues=snaps[:n_snap],
        final_queues=(int(q[0]), int(q[1]), int(q[2])),
        totals=Counters.from_array(counters[0]),
        window=Counters.from_array(counters[1]),
        window_slots=config.horizon - config.warmup,
    )


def derive_seed(seed: int, index: int) -> int:
    """64-bit seed for replication ``index``.

    Mixing goes through ``numpy.random.SeedSequence(seed, spawn_key=(index,))``,
    which is specified bit-for-bit and independent of platform.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def replicate(config: SimConfig, replications: int) -> list[SimResult]:
    if replications < 1:
        raise ValueError("replications must be >= 1")
    return [simulate(replace(config, seed=derive_seed(config.seed, i))) for i in range(replications)]


# --------------------------------------------------------------------------
# stability classification


@dataclass(frozen=True)
class QueueStability:
    status: str  # "stable", "unstable" or "indeterminate"
    drift: float
    mean_length: float
    final_length: float


@dataclass(frozen=True)
class StabilityVerdict:
    source1: QueueStability
    source2: QueueStability
    relay: QueueStability

    def statuses(self) -> tuple[str, str, str]:
        return (self.source1.status, self.source2.status, self.relay.status)

    @property
    def all_stable(self) -> bool:
        return all(s == "stable" for s in self.statuses())

    @property
    def any_unstable(self) -> bool:
        return any(s == "unstable" for s in self.statuses())


MIN_SNAPSHOTS = 20


def classify_trajectory(slots, lengths, drift_epsilon: float = 1e-3,
                        mean_cap: float = 1e3) -> QueueStability:
    """Drift-plus-level test on one sampled queue trajectory.

    ``drift`` is the least-squares slope in packets per slot.
    """
    x = np.asarray(slots, dtype=float)
    y = np.asarray(lengths, dtype=float)
    if x.size < MIN_SNAPSHOTS:
        raise InsufficientDataError(
            f"need at least {MIN_SNAPSHOTS} snapshots, got {x.size}"
        )
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    mean = float(y.mean())
    final = float(y[-1])
    if slope > drift_epsilon and final > mean_cap:
        status = "unstable"
    elif slope <= drift_epsilon and mean <= mean_cap:
        status = "stable"
    else:
        status = "indeterminate"
    return QueueStability(status, slope, mean, final)


def classify_stability(result: SimResult, drift_epsilon: float = 1e-3,
                       mean_cap: float = 1e3) -> StabilityVerdict:
    keep = result.snapshot_slots >= result.config.warmup
    slots = result.snapshot_slots[keep]
    qs = result.queues[keep]
    per_queue = [classify_trajectory(slots, qs[:, j], drift_epsilon, mean_cap) for j in range(3)]
    return StabilityVerdict(*per_queue)


# --------------------------------------------------------------------------
# empirical rates


@dataclass(frozen=True)
class Estimate:
    """Binomial proportion with its standard error; ``nan`` when ``n == 0``."""

    value: float
    stderr: float
    n: int

    @classmethod
    def ratio(cls, hits: int, n: int) -> Estimate:
        if n <= 0:
            return cls(math.nan, math.nan, 0)
        p = hits / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n)

    @property
    def defined(self) -> bool:
        return self.n > 0

    def within(self, target: float, k: float = 3.0) -> bool:
        """True when ``target`` lies within ``k`` standard errors.

        A zero standard error (all hits or no hits) only matches exactly.
        """
        if not self.defined:
            return False
        return abs(self.value - target) <= k * self.stderr

    def as_dict(self) -> dict:
        return {
            "value": None if not self.defined else self.value,
            "stderr": None if not self.defined else self.stderr,
            "n": self.n,
        }


@dataclass(frozen=True)
class EmpiricalRates:
    lambda0: Estimate
    capture_fraction_1: Estimate
    capture_fraction_2: Estimate
    mu0: Estimate
    mu1: Estimate
    mu2: Estimate
    relay_busy: Estimate
    source_busy_1: Estimate
    source_busy_2: Estimate
    departure_rate_1: Estimate
    departure_rate_2: Estimate
    attempt_rate_0: Estimate
    attempt_rate_1: Estimate
    attempt_rate_2: Estimate
    relay_attempt_success: Estimate

    def as_dict(self) -> dict[str, dict]:
        return {f.name: getattr(self, f.name).as_dict() for f in fields(self)}


def empirical_rates(result: SimResult) -> EmpiricalRates:
    """Post-warmup estimates of the analytic rates.

    Per-slot rates are treated as binomial proportions over the window; the
    standard error ignores slot-to-slot correlation.
    """
    c, n = result.window, result.window_slots
    if n <= 0:
        raise InsufficientDataError("empty post-warmup window")
    ratio = Estimate.ratio
    return EmpiricalRates(
        lambda0=ratio(c.captures_1 + c.captures_2, n),
        capture_fraction_1=ratio(c.captures_1, c.departures_1),
        capture_fraction_2=ratio(c.captures_2, c.departures_2),
        mu0=ratio(c.relay_deliveries, c.busy_0),
        mu1=ratio(c.departures_1, c.busy_1),
        mu2=ratio(c.departures_2, c.busy_2),
        relay_busy=ratio(c.busy_0, n),
        source_busy_1=ratio(c.busy_1, n),
        source_busy_2=ratio(c.busy_2, n),
        departure_rate_1=ratio(c.departures_1, n),
        departure_rate_2=ratio(c.departures_2, n),
        attempt_rate_0=ratio(c.attempts_0, n),
        attempt_rate_1=ratio(c.attempts_1, n),
        attempt_rate_2=ratio(c.attempts_2, n),
        relay_attempt_success=ratio(c.relay_deliveries, c.attempts_0),
    )

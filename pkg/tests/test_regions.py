from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from relaystab.model import AccessProbs, ArrivalPoint, ChannelParams, SystemParams
from relaystab.regions import (
    EmptyRegionError,
    RegionKind,
    RelayUnstableError,
    SaturationError,
    assumed_relay_service_rate,
    axis_intercept,
    boundary_polyline,
    contains,
    dominant_service_rates,
    inner_contains,
    no_relay_contains,
    outer_contains,
    region_mask,
    relay_busy_probability,
)

# Frozen from tests/oracle.py (exact rational arithmetic).
FIG2_INNER_INTERCEPT = 5439 / 28600  # 0.190174825...
FIG2_OUTER_INTERCEPT = 0.2775
FIG2_NO_RELAY_INTERCEPT = 0.075
FIG2_LAMBDA0_AT_008 = 0.11675675675675676
FIG2_RELAY_BUSY_AT_008 = 0.5883434454863026

p = st.floats(0.05, 0.95)
SYSTEMS = st.builds(
    lambda p13, p23, p10, p20, p03, q0, q1, q2: SystemParams(
        ChannelParams(p13, p23, p10, p20, p03), AccessProbs(q0, q1, q2)
    ),
    p, p, p, p, p, p, p, p,
)
RATES = st.floats(0.0, 0.6)
KINDS = st.sampled_from(list(RegionKind))


def test_oracle_agrees_with_frozen_values():
    assert float(oracle.sup(lambda x: oracle.inner(oracle.FIG2, x, 0))) == pytest.approx(
        FIG2_INNER_INTERCEPT, abs=1e-12
    )
    assert float(oracle.sup(lambda x: oracle.outer(oracle.FIG2, x, 0))) == pytest.approx(
        FIG2_OUTER_INTERCEPT, abs=1e-12
    )


@pytest.mark.parametrize(
    "point, inside",
    [((0.0, 0.0), True), ((0.08, 0.08), True), ((0.20, 0.05), False)],
)
def test_inner_examples(fig2, point, inside):
    v = inner_contains(fig2, ArrivalPoint(*point))
    assert v.inside is inside
    assert len(v.condition_values) == 5


def test_inner_failing_conditions(fig2):
    v = inner_contains(fig2, ArrivalPoint(0.20, 0.05))
    failed = {c.label for c in v.condition_values if not c.holds}
    assert {"inner-1a", "inner-2b"} <= failed


def test_outer_examples(fig2):
    assert outer_contains(fig2, ArrivalPoint(0, 0)).inside
    v = outer_contains(fig2, ArrivalPoint(0.20, 0.05))
    assert v.inside
    cond = {c.label: c for c in v.condition_values}
    assert cond["outer-1a"].lhs == pytest.approx(0.20 / 0.2775 + 0.05 / 0.6475)
    assert cond["outer-1b"].threshold == pytest.approx(0.19425)
    assert not outer_contains(fig2, ArrivalPoint(0.25, 0.25)).inside


def test_no_relay_examples(fig2):
    assert no_relay_contains(fig2, ArrivalPoint(0, 0)).inside
    assert no_relay_contains(fig2, ArrivalPoint(0.074, 0)).inside
    assert not no_relay_contains(fig2, ArrivalPoint(0.076, 0)).inside
    assert not no_relay_contains(fig2, ArrivalPoint(0.08, 0.08)).inside
    assert inner_contains(fig2, ArrivalPoint(0.08, 0.08)).inside


@pytest.mark.parametrize("which", ["fig2", "fig3"])
def test_masks_match_exact_oracle_on_grid(request, which):
    params = request.getfixturevalue(which)
    P = getattr(oracle, which.upper())
    axis = [Fraction(i, 100) for i in range(0, 32, 1)]
    for kind, fn in (
        (RegionKind.INNER, oracle.inner),
        (RegionKind.OUTER, oracle.outer),
        (RegionKind.NO_RELAY, oracle.no_relay),
    ):
        for a in axis:
            for b in axis:
                want = fn(P, a, b)
                got = contains(params, ArrivalPoint(float(a), float(b)), kind).inside
                if got != want:
                    # float rounding can only flip points sitting on a boundary
                    assert min(abs(c.lhs - c.threshold) for c in contains(
                        params, ArrivalPoint(float(a), float(b)), kind).condition_values) < 1e-12


def test_relay_service_rate(fig2):
    assert assumed_relay_service_rate(fig2) == pytest.approx(0.19845, abs=1e-15)
    zero_q0 = SystemParams(fig2.channel, AccessProbs(0.0, 0.3, 0.3))
    assert assumed_relay_service_rate(zero_q0) == 0.0
    lone = SystemParams(fig2.channel, AccessProbs(1.0, 0.0, 0.0))
    assert assumed_relay_service_rate(lone) == fig2.channel.p03


def test_relay_busy(fig2):
    assert relay_busy_probability(fig2, ArrivalPoint(0.08, 0.08)) == pytest.approx(
        FIG2_RELAY_BUSY_AT_008, rel=1e-12
    )
    assert relay_busy_probability(fig2, ArrivalPoint(0, 0)) == 0.0
    with pytest.raises(RelayUnstableError):
        relay_busy_probability(fig2, ArrivalPoint(0.2, 0.2))


def test_dominant_rates_fig2(fig2):
    r = dominant_service_rates(fig2, ArrivalPoint(0.08, 0.08), 1)
    mu2 = 0.3 * 0.7 * (1 - 0.45 * FIG2_RELAY_BUSY_AT_008) * 0.925
    assert r.mu2 == pytest.approx(mu2, rel=1e-12)
    assert r.mu2 == pytest.approx(0.1428, abs=1e-4)
    assert r.source_busy_2 == pytest.approx(0.08 / mu2, rel=1e-12)
    assert r.source_busy_2 == pytest.approx(0.560, abs=1e-3)
    assert r.lambda0 == pytest.approx(FIG2_LAMBDA0_AT_008)

    empty = dominant_service_rates(fig2, ArrivalPoint(0, 0), 1)
    assert empty.mu2 == pytest.approx(0.19425, abs=1e-15)
    assert empty.source_busy_2 == 0.0


def test_dominant_rates_mirror(fig2):
    asym = SystemParams(ChannelParams(0.2, 0.3, 0.8, 0.7, 0.9), AccessProbs(0.4, 0.25, 0.35))
    a = dominant_service_rates(asym, ArrivalPoint(0.03, 0.05), 1)
    b = dominant_service_rates(asym.swapped(), ArrivalPoint(0.05, 0.03), 2)
    assert b.mu1 == pytest.approx(a.mu2) and b.mu2 == pytest.approx(a.mu1)
    assert b.source_busy_1 == pytest.approx(a.source_busy_2)


def test_dominant_rates_saturation(fig2):
    with pytest.raises(SaturationError):
        dominant_service_rates(fig2, ArrivalPoint(0.0, 0.19), 1)


def test_intercepts_fig2(fig2):
    assert axis_intercept(fig2, RegionKind.INNER) == pytest.approx(FIG2_INNER_INTERCEPT, abs=1e-6)
    assert axis_intercept(fig2, RegionKind.OUTER) == pytest.approx(FIG2_OUTER_INTERCEPT, abs=1e-6)
    assert axis_intercept(fig2, RegionKind.NO_RELAY) == pytest.approx(FIG2_NO_RELAY_INTERCEPT, abs=1e-6)


def test_polyline_starts_on_lambda2_axis(fig2):
    poly = boundary_polyline(fig2, RegionKind.INNER, 50)
    assert poly.lambda1[0] == 0.0
    assert poly.lambda2_max[0] == pytest.approx(FIG2_INNER_INTERCEPT, abs=1e-6)
    assert np.all(np.diff(poly.lambda2_max) <= 1e-6)


def test_polyline_two_samples(fig2):
    poly = boundary_polyline(fig2, RegionKind.OUTER, 2)
    assert len(poly.points()) == 2
    assert poly.lambda1[-1] == pytest.approx(FIG2_OUTER_INTERCEPT, abs=1e-6)


def test_polyline_bracket(fig2):
    for kind in (RegionKind.INNER, RegionKind.OUTER, RegionKind.NO_RELAY):
        poly = boundary_polyline(fig2, kind, 60)
        for x, y in poly.points():
            if y > 1e-5:
                assert contains(fig2, ArrivalPoint(x, y - 1e-5), kind).inside
            assert not contains(fig2, ArrivalPoint(x, y + 1e-5), kind).inside


def test_polyline_reflection_symmetric(fig2):
    # the reflected sample sits on the same boundary: a tiny radial step
    # inward is inside, outward is outside
    poly = boundary_polyline(fig2, RegionKind.INNER, 80)
    for x, y in poly.points()[:-1]:
        r = np.hypot(x, y)
        step = 1e-5 / r
        assert contains(fig2, ArrivalPoint(y * (1 - step), x * (1 - step)), RegionKind.INNER).inside
        assert not contains(fig2, ArrivalPoint(y * (1 + step), x * (1 + step)), RegionKind.INNER).inside


def test_empty_region():
    params = SystemParams(ChannelParams(0.25, 0.25, 0.9, 0.9, 0.9), AccessProbs(0.0, 0.3, 0.3))
    with pytest.raises(EmptyRegionError):
        boundary_polyline(params, RegionKind.INNER, 10)


def test_verdict_algebra_single_point(fig2):
    pt = ArrivalPoint(0.1, 0.05)
    sub = {k: contains(fig2, pt, k).inside for k in RegionKind}
    assert sub[RegionKind.INNER] == (
        (sub[RegionKind.INNER_SUB1] or sub[RegionKind.INNER_SUB2]) and sub[RegionKind.INNER_RELAY]
    )
    assert sub[RegionKind.OUTER] == (
        (sub[RegionKind.OUTER_SUB1] or sub[RegionKind.OUTER_SUB2]) and sub[RegionKind.OUTER_RELAY]
    )


@settings(max_examples=200, deadline=None)
@given(SYSTEMS, RATES, RATES, KINDS)
def test_region_algebra(params, a, b, kind):
    pt = ArrivalPoint(a, b)
    inside = contains(params, pt, kind).inside
    if kind is RegionKind.INNER:
        assert inside == (
            (contains(params, pt, RegionKind.INNER_SUB1).inside
             or contains(params, pt, RegionKind.INNER_SUB2).inside)
            and contains(params, pt, RegionKind.INNER_RELAY).inside
        )
    if kind is RegionKind.OUTER:
        assert inside == (
            (contains(params, pt, RegionKind.OUTER_SUB1).inside
             or contains(params, pt, RegionKind.OUTER_SUB2).inside)
            and contains(params, pt, RegionKind.OUTER_RELAY).inside
        )
    assert region_mask(params, kind, a, b) == inside


@settings(max_examples=200, deadline=None)
@given(SYSTEMS, RATES, RATES, st.floats(0, 1), st.floats(0, 1), KINDS)
def test_downward_closed(params, a, b, sa, sb, kind):
    if contains(params, ArrivalPoint(a, b), kind).inside:
        assert contains(params, ArrivalPoint(a * sa, b * sb), kind).inside


@settings(max_examples=200, deadline=None)
@given(SYSTEMS, RATES, RATES)
def test_index_symmetry(params, a, b):
    sw = params.swapped()
    for fn in (inner_contains, outer_contains, no_relay_contains):
        assert fn(params, ArrivalPoint(a, b)).inside == fn(sw, ArrivalPoint(b, a)).inside


@settings(max_examples=200, deadline=None)
@given(SYSTEMS, RATES, RATES)
def test_inner_implies_relay_condition(params, a, b):
    pt = ArrivalPoint(a, b)
    v = inner_contains(params, pt)
    relay = next(c for c in v.condition_values if c.label == "inner-R")
    if v.inside:
        assert relay.holds
    try:
        busy = relay_busy_probability(params, pt)
    except RelayUnstableError:
        assert not relay.holds
    else:
        assert relay.holds and 0.0 <= busy < 1.0


@settings(max_examples=200, deadline=None)
@given(SYSTEMS, RATES, RATES, st.sampled_from([1, 2]))
def test_dominant_rates_agree_with_subregion(params, a, b, dom):
    # the expanded inequalities and the service-rate route must agree
    pt = ArrivalPoint(a, b)
    kind = RegionKind.INNER_SUB1 if dom == 1 else RegionKind.INNER_SUB2
    v = contains(params, pt, kind)
    relay = contains(params, pt, RegionKind.INNER_RELAY)
    margins = [abs(c.lhs - c.threshold) for c in v.condition_values + relay.condition_values]
    if min(margins) < 1e-9:
        return
    try:
        dominant_service_rates(params, pt, dom)
        ok = True
    except (RelayUnstableError, SaturationError):
        ok = False
    assert ok == (v.inside and relay.inside)


@pytest.mark.parametrize("which", ["fig2", "fig3"])
def test_inner_within_outer_on_grid(request, which):
    params = request.getfixturevalue(which)
    axis = np.linspace(0, 1, 200)
    inner = region_mask(params, RegionKind.INNER, axis[:, None], axis[None, :])
    outer = region_mask(params, RegionKind.OUTER, axis[:, None], axis[None, :])
    assert not np.any(inner & ~outer)

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relaystab.model import (
    AccessProbs,
    ArrivalPoint,
    ChannelParams,
    DegenerateLinkError,
    SystemParams,
    relay_arrival_rate,
    relay_capture_fraction,
    validate,
)

prob = st.floats(0.0, 1.0)
positive = st.floats(0.01, 1.0)


def system(p13=0.4, p23=0.4, p10=0.5, p20=0.5, p03=0.5, q0=0.5, q1=0.5, q2=0.5):
    return SystemParams(ChannelParams(p13, p23, p10, p20, p03), AccessProbs(q0, q1, q2))


def test_validate_clean():
    report = validate(system())
    assert report.errors == [] and report.warnings == []


def test_validate_out_of_range_names_field():
    report = validate(system(p13=1.2))
    assert len(report.errors) == 1
    assert "p13" in report.errors[0]


def test_validate_relay_advantage_is_a_warning():
    report = validate(system(p13=0.25, p03=0.2))
    assert report.errors == []
    assert len(report.warnings) == 1


def test_validate_nan_is_an_error():
    assert not validate(system(q1=float("nan"))).ok


def test_capture_fraction_fig2(fig2):
    # 0.9 * 0.75 / (0.25 + 0.9 * 0.75)
    assert relay_capture_fraction(fig2.channel, 1) == pytest.approx(0.675 / 0.925, abs=1e-12)
    assert relay_capture_fraction(fig2.channel, 1) == pytest.approx(0.72973, abs=1e-5)


def test_capture_fraction_edges():
    assert relay_capture_fraction(ChannelParams(0.3, 0.3, 0.0, 0.5, 0.9), 1) == 0.0
    assert relay_capture_fraction(ChannelParams(0.0, 0.3, 0.9, 0.5, 0.9), 1) == 1.0


def test_capture_fraction_degenerate():
    with pytest.raises(DegenerateLinkError):
        relay_capture_fraction(ChannelParams(0.0, 0.3, 0.0, 0.5, 0.9), 1)


def test_relay_arrival_rate_fig2(fig2):
    assert relay_arrival_rate(fig2.channel, ArrivalPoint(0.08, 0.08)) == pytest.approx(
        0.11675675675675676, rel=1e-12
    )
    assert relay_arrival_rate(fig2.channel, ArrivalPoint(0.0, 0.0)) == 0.0


@given(st.floats(0, 1), st.floats(0, 1), prob, prob)
def test_no_overhearing_means_no_relay_traffic(l1, l2, p13, p23):
    ch = ChannelParams(max(p13, 0.01), max(p23, 0.01), 0.0, 0.0, 0.9)
    assert relay_arrival_rate(ch, ArrivalPoint(l1, l2)) == 0.0


@given(positive, positive, prob, prob, st.floats(0, 1), st.floats(0, 1))
def test_relay_rate_additive(p13, p23, p10, p20, a, b):
    ch = ChannelParams(p13, p23, p10, p20, 0.9)
    both = relay_arrival_rate(ch, ArrivalPoint(a, b))
    apart = relay_arrival_rate(ch, ArrivalPoint(a, 0)) + relay_arrival_rate(ch, ArrivalPoint(0, b))
    assert both == pytest.approx(apart, abs=1e-15)


@given(positive, prob, positive, prob)
def test_index_symmetry(p13, p10, p23, p20):
    ch = ChannelParams(p13, p23, p10, p20, 0.9)
    sw = ch.swapped()
    assert relay_capture_fraction(sw, 1) == relay_capture_fraction(ch, 2)
    assert relay_capture_fraction(sw, 2) == relay_capture_fraction(ch, 1)


def test_capture_fraction_monotone_on_grid():
    grid = np.linspace(0.05, 0.95, 19)
    for p_d in grid:
        vals = [relay_capture_fraction(ChannelParams(p_d, 0.5, p_r, 0.5, 0.9), 1) for p_r in grid]
        assert np.all(np.diff(vals) > 0)
    for p_r in grid:
        vals = [relay_capture_fraction(ChannelParams(p_d, 0.5, p_r, 0.5, 0.9), 1) for p_d in grid]
        assert np.all(np.diff(vals) <= 0)

"""Stability-region bounds for a two-source, one-relay random-access network.

Modules
-------
model       parameter records, validation, relay capture fractions
regions     inner/outer/no-relay membership, relay occupancy, boundaries
sim         seeded slot-level simulator, stability classifier, estimators
scenario    flat key = value scenario files and the fig2/fig3 presets
report      CSV and SVG writers
cli         ``relaystab`` command line
"""

from .model import (
    AccessProbs,
    ArrivalPoint,
    ChannelParams,
    DegenerateLinkError,
    DerivedRates,
    InvalidParamsError,
    SystemParams,
    ValidationReport,
    relay_arrival_rate,
    relay_capture_fraction,
    validate,
)
from .regions import (
    BoundaryPolyline,
    EmptyRegionError,
    RegionKind,
    RegionVerdict,
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
from .sim import (
    EmpiricalRates,
    Estimate,
    SimConfig,
    SimMode,
    SimResult,
    StabilityVerdict,
    classify_stability,
    empirical_rates,
    replicate,
    simulate,
)

__version__ = "0.1.0"

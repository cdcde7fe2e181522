"""
Inner bound, outer bound and the no-relay region
================================================

Classify a few arrival-rate pairs against the three regions, look at which
inequality decides each verdict, and write the overlay figures for the two
built-in parameter sets.
"""

from pathlib import Path

import numpy as np

from relaystab import ArrivalPoint, RegionKind, axis_intercept, contains, region_mask
from relaystab.cli import figure
from relaystab.scenario import PRESETS

params = PRESETS["fig2"]
print(params)

# %%
# Membership of a handful of points. The relay lets (0.08, 0.08) through
# even under the conservative inner bound, while the two-user collision
# channel without the relay cannot carry it.
for pt in [(0.0, 0.0), (0.08, 0.08), (0.20, 0.05), (0.25, 0.25)]:
    point = ArrivalPoint(*pt)
    row = []
    for kind in (RegionKind.INNER, RegionKind.OUTER, RegionKind.NO_RELAY):
        v = contains(params, point, kind)
        row.append(f"{kind.value}={'in ' if v.inside else 'out'} ({v.binding().label})")
    print(pt, "  ".join(row))

# %%
# Every region is cut out by strict linear inequalities, so the axis
# intercepts have closed forms. Compare bisection with hand arithmetic.
q1 = params.access.q1
ch = params.channel
leave = ch.p13 + ch.p10 * (1 - ch.p13)
print("outer  ", axis_intercept(params, RegionKind.OUTER), "closed form", q1 * leave)
print("no relay", axis_intercept(params, RegionKind.NO_RELAY), "closed form", q1 * ch.p13)
print("inner  ", axis_intercept(params, RegionKind.INNER))

# %%
# Figures: one CSV per region plus an SVG overlay for each parameter set.
out = Path("figures")
for name in ("fig2", "fig3"):
    info = figure(name, out)
    print(name, info["svg"], "inner - no-relay intercept gap:", round(info["inner_minus_no_relay"], 4))

# %%
# Grid areas on [0, 1]^2 give a rough measure of the relay gain.
axis = np.linspace(0, 1, 200)
for name, p in PRESETS.items():
    areas = {k.value: int(region_mask(p, k, axis[:, None], axis[None, :]).sum())
             for k in (RegionKind.INNER, RegionKind.OUTER, RegionKind.NO_RELAY)}
    print(name, areas, "inner / no-relay = %.2f" % (areas["inner"] / areas["no-relay"]))

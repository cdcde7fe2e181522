"""
Checking the bounds with the slot-level simulator
=================================================

Simulate the original protocol at one point inside the inner bound and one
point outside the outer bound, then compare the measured relay traffic and
queue behaviour against the analysis.
"""

from relaystab import (
    ArrivalPoint,
    SimConfig,
    classify_stability,
    empirical_rates,
    inner_contains,
    outer_contains,
    relay_arrival_rate,
    simulate,
)
from relaystab.scenario import PRESETS

params = PRESETS["fig2"]

for pt in [ArrivalPoint(0.08, 0.08), ArrivalPoint(0.25, 0.25)]:
    result = simulate(SimConfig(params, pt, horizon=1_000_000, seed=1))
    verdict = classify_stability(result)
    rates = empirical_rates(result)
    print(f"point {pt}: inner={inner_contains(params, pt).inside} outer={outer_contains(params, pt).inside}")
    for name, q in zip(("S1", "S2", "R"), (verdict.source1, verdict.source2, verdict.relay)):
        print(f"  {name}: {q.status:13s} drift={q.drift:+.2e} mean length={q.mean_length:.1f}")
    lam0 = relay_arrival_rate(params.channel, pt)
    print(f"  relay arrivals {rates.lambda0.value:.5f} +- {rates.lambda0.stderr:.5f} (analysis {lam0:.5f})")
    print(f"  capture fraction S1 {rates.capture_fraction_1.value:.4f} +- {rates.capture_fraction_1.stderr:.4f}")
    print(f"  conservation: {result.conservation_errors() or 'ok'}")

# %%
# The queue trajectories are sampled every ``sample_stride`` slots.
result = simulate(SimConfig(params, ArrivalPoint(0.25, 0.25), horizon=200_000, seed=3))
print(result.snapshot_slots[::400])
print(result.queues[::400])

"""
Dominant systems and the pessimistic relay
==========================================

In the first dominant system source 1 keeps transmitting dummy packets when
it has nothing to send. With the pessimistic relay switch the relay also
loses a slot whenever either source's attempt coin fires, which makes its
service rate exactly q0 (1 - q1) (1 - q2) p03. The relay occupancy then
follows lambda0 / mu0, and source 2 follows Little's law.
"""

from relaystab import (
    ArrivalPoint,
    SimConfig,
    SimMode,
    dominant_service_rates,
    empirical_rates,
    replicate,
)
from relaystab.scenario import PRESETS

params = PRESETS["fig2"]
pt = ArrivalPoint(0.08, 0.08)
analytic = dominant_service_rates(params, pt, 1)
print(analytic)

config = SimConfig(params, pt, SimMode.DOMINANT_S1, pessimistic_relay=True, seed=5)
for k, result in enumerate(replicate(config, 3)):
    e = empirical_rates(result)
    print(
        f"rep {k}: relay busy {e.relay_busy.value:.4f} (analysis {analytic.relay_busy:.4f}), "
        f"S2 busy {e.source_busy_2.value:.4f} (analysis {analytic.source_busy_2:.4f}), "
        f"S1 attempt rate {e.attempt_rate_1.value:.4f}, dummies {result.window.dummy_attempts_1}"
    )

# %%
# Dummy packets never reach the relay or the destination: with no traffic
# at source 1 its departure counters stay at zero.
quiet = replicate(SimConfig(params, ArrivalPoint(0.0, 0.08), SimMode.DOMINANT_S1, seed=6), 1)[0]
print(quiet.totals.departures_1, quiet.totals.captures_1, quiet.totals.dummy_attempts_1)

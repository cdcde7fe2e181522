"""
The modified system behind the outer bound
==========================================

The relay gets its own channel and sends whenever it is backlogged, so it
serves at rate p03. Points inside the outer bound keep every queue stable
in this system.
"""

from relaystab import ArrivalPoint, SimConfig, SimMode, classify_stability, empirical_rates, outer_contains, simulate
from relaystab.scenario import PRESETS

params = PRESETS["fig2"]
for pt in [ArrivalPoint(0.1, 0.1), ArrivalPoint(0.18, 0.045), ArrivalPoint(0.045, 0.18)]:
    result = simulate(SimConfig(params, pt, SimMode.OUTER_MODIFIED, seed=4))
    e = empirical_rates(result)
    print(
        pt,
        "outer bound:", outer_contains(params, pt).inside,
        "verdict:", classify_stability(result).statuses(),
        f"relay service {e.mu0.value:.4f} +- {e.mu0.stderr:.4f}",
    )

"""
How small a signal can a full run see?
======================================

Local noise (depolarizing, damping, readout errors, ZZ crosstalk) never
makes one party's marginal depend on the other's setting.  A deliberate
readout injection of size eps does, and at N trials per setting it shows
up once eps is a few times sqrt(0.5 / N).
"""

import numpy as np

from nosig.plan import make_plan
from nosig.simulator import Injection, NoiseConfig, setting_distributions, simulate_plan
from nosig.stats import nosig_report

noisy = NoiseConfig(
    depolarizing={"A": 0.01, "S": 0.02, "B": 0.01},
    damping={"A": 0.005, "B": 0.007},
    readout={"A": [[0.98, 0.02], [0.04, 0.96]], "B": [[0.97, 0.03], [0.05, 0.95]]},
    zz_phase=0.2,
)
d = setting_distributions("a", noisy)
print("P(A=+) per setting:", {s: round(x.p_a_plus, 15) for s, x in d.items()})

plan = make_plan("c", repetitions=25, shots=20000, jobs=60, seed=1)
n = plan.trials_per_setting
print(f"\n{n:.3g} trials per setting, sigma = {np.sqrt(0.5 / n):.3g}, "
      f"threshold eps ~ {np.sqrt(12.5 / n):.2g}")

for eps in (0.0, 3e-4, 7e-4, 1e-3):
    noise = NoiseConfig(injections=(Injection(eps, target="B"),))
    zs = []
    for seed in range(10):
        tables = simulate_plan(plan, noise, seed=seed)
        zs.append(nosig_report(sum(tables[1:], tables[0])).z[3])
    zs = np.array(zs)
    print(f"eps={eps:.0e}: z(dP_*1) mean {zs.mean():+.2f}, detected {np.sum(np.abs(zs) > 5)}/10")

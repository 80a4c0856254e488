"""
Checking the bounds by simulation
=================================

Draw samples from scenarios with known risks, count how often the
normalized deviation exceeds each threshold, and compare with the bound.
"""

import json
from pathlib import Path

from relbounds.io import load_config
from relbounds.montecarlo import merge_reports, run_experiment, symmetrization_ratio_check

here = Path(__file__).parent / "configs"

# Each config names a scenario, a statistic and an epsilon grid.
for name in ("thresholds_one_sided.json", "thresholds_realizable.json", "pareto_alpha2.json",
             "pareto_alpha225.json"):
    config = load_config(here / name)
    report = run_experiment(config)
    print(name)
    print(report.to_csv())

# Rows marked "vacuous" have a bound of at least 1 and cannot be falsified.
# A "fail" would need the lower confidence limit of the frequency above the
# bound.

# Trials can be split and the counts summed.
config = load_config(here / "thresholds_one_sided.json")
halves = [run_experiment(config, (0, 1000)), run_experiment(config, (1000, config.trials))]
print("merged counts equal:", merge_reports(halves).counts() == run_experiment(config).counts())

# The symmetrization step: one-sample probability at most 4 times the
# two-sample one.
sym = symmetrization_ratio_check(config)
print(json.dumps(sym.to_dict(), indent=1)[:800])

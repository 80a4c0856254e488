"""
Importance-weighted losses
==========================

Reweighting the zero-one loss by ``target(x) / source(x)`` gives an
unbiased estimate of the target error but an unbounded-looking loss. Its
second moment controls the deviation.
"""

import numpy as np

from relbounds.montecarlo import ExperimentConfig, run_experiment
from relbounds.scenarios import scenario_from_dict

scenario = {
    "kind": "unbounded_loss",
    "model": "importance_weighted",
    "source": [0.4, 0.3, 0.2, 0.1],
    "target": [0.1, 0.2, 0.3, 0.4],
    "hypotheses": [[0, 0, 1, 1], [0, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0, 1]],
    "labels": [0, 0, 1, 1],
}
sc = scenario_from_dict(scenario)

# True target errors, and the weighted losses' moments under the source.
print("target errors:", sc.true_risks)
print("second moments:", sc.moments(2.0))
print("largest weight:", np.max(np.array(scenario["target"]) / np.array(scenario["source"])))

for stat in ("one_sided_true_minus_emp", "one_sided_emp_minus_true"):
    config = ExperimentConfig(scenario=scenario, statistic=stat, epsilon_grid=[0.2, 0.4, 0.6, 0.8, 1.0],
                              m=500, trials=2000, alpha=2.0, tau=1e-6)
    print(stat)
    print(run_experiment(config).to_csv())

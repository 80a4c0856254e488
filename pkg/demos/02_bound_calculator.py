"""
Evaluating relative deviation bounds
====================================

How many samples make a relative deviation bound non-trivial, and what
rate does the solved form give?
"""

import numpy as np

from relbounds import bounds
from relbounds.bounds import BoundParams, CapacityDescriptor

# Capacity from a VC dimension goes through (en/d)^d at n = 2m.
cap = CapacityDescriptor(bounds.VC_DIMENSION, 5)

# Probability bound as a function of m at fixed epsilon.
for m in (10 ** 3, 10 ** 4, 10 ** 5):
    b = bounds.relative_deviation_rhs(BoundParams(alpha=2, epsilon=0.1, m=m), cap)
    print(f"m={m:>6}: rhs={b.value:.3e} vacuous={b.vacuous}")

# alpha below 2 trades rate for weaker moment requirements.
for alpha in (1.25, 1.5, 2.0):
    r = bounds.relative_deviation_radius(BoundParams(alpha=alpha, delta=0.05, m=10 ** 4), cap)
    print(f"alpha={alpha}: radius coefficient {r:.4f}")

# The solved bound interpolates between 1/m (zero empirical error) and
# 1/sqrt(m) (large empirical error).
params = BoundParams(delta=0.05, m=10 ** 4)
for rate in (0.0, 0.01, 0.1, 0.3):
    print(f"empirical rate {rate}: true risk <= {bounds.solved_bound(rate, params, cap):.4f}")

# The same evaluators are reachable by identifier (as on the command line).
print(bounds.evaluate("cor7", m=1000, epsilon=0.1, shatter=8))
print(bounds.evaluate("thm5", m=1000, epsilon=0.5, nu=0.1, shatter=10))
print(np.round([bounds.kappa(t) for t in (0, 1e-4, 1e-2, 1)], 6))

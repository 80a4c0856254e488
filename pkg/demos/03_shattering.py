"""
Shattering finite classes
=========================

Brute-force growth functions and VC dimensions, compared with the Sauer
bound.
"""

import numpy as np

from relbounds.bounds import sauer_growth_upper
from relbounds.capacity import Budget, HypothesisTable, LossTable, growth_function, pseudo_dimension, vc_dimension

# Thresholds on a line: m + 1 patterns on m points, dimension 1.
th = HypothesisTable.thresholds(10)
print("thresholds:", [growth_function(th, m) for m in range(1, 11)], "VC =", vc_dimension(th))

# Intervals on a line: dimension 2, growth quadratic in m.
n = 12
intervals = HypothesisTable([[int(a <= i < b) for i in range(n)] for a in range(n + 1) for b in range(a, n + 1)])
d = vc_dimension(intervals)
print("intervals: VC =", d)
for m in range(2, 9):
    print(f"  m={m}: growth={growth_function(intervals, m):3d}  sauer={sauer_growth_upper(d, m):8.1f}")

# A random class and its dimension.
rng = np.random.default_rng(0)
random_class = HypothesisTable(rng.integers(0, 2, size=(40, 10)))
print("random 40 x 10 class: VC =", vc_dimension(random_class))

# Pseudo-dimension of real-valued losses: constants have dimension 1,
# and a family of lines through the origin evaluated at positive points too.
print("constants:", pseudo_dimension(LossTable([[c] * 4 for c in np.linspace(0, 2, 5)])))
xs = np.array([0.5, 1.0, 2.0, 3.0])
# (the thresholded domain has 4 x 7 pairs, above the default budget of 24)
lines = LossTable([c * xs for c in np.linspace(0.1, 2, 8)])
print("lines c*x:", pseudo_dimension(lines, "auto", Budget(max_domain=40)))

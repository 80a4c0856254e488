"""
The binomial quarter
====================

A binomial variable lands at or above its mean with probability more than
1/4 once ``p > 1/m``. We scan the whole grid and look at where the minimum
sits.
"""

from relbounds.binomial import BinomialSpec, certify_lemma, tail_geq_mean, tail_leq_mean

# A single evaluation. At integer ``mp`` the term ``k = mp`` is included.
print("Pr[X >= mp], m=10, p=0.3:", tail_geq_mean(BinomialSpec(10, 0.3)))
print("Pr[X <= mp], m=10, p=0.3:", tail_leq_mean(BinomialSpec(10, 0.3)))

# The exhaustive scan over m in [2, 200] and p on a 1e-3 grid.
scan = certify_lemma("geq_mean", m_max=200, p_resolution=1e-3)
print(scan.summary())

# The infimum is approached at m = 2 just above p = 1/2, where
# Pr[X = 2] = p^2 tends to 1/4.
for p in (0.6, 0.51, 0.501, 0.5001):
    print(f"m=2, p={p}: {tail_geq_mean(BinomialSpec(2, p)):.6f}")

# With a larger offset k the lower constant is still above 1/4.
print(certify_lemma("geq_mean", m_max=50, p_resolution=1e-3, k=2, keep_rows=False).summary())

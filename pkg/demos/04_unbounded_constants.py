"""
Constants for unbounded losses
==============================

The constants that turn a bounded relative deviation bound into one for
losses with a finite alpha-moment.
"""

import warnings

import numpy as np

from relbounds import analytic, bounds
from relbounds.errors import PreconditionWarning
from relbounds.models import ParetoLoss

# Gamma(2, eps, tau) grows like sqrt(log(1/eps)) as eps shrinks; the
# product Gamma * eps stays below kappa * eps^(3/4).
with warnings.catch_warnings():
    warnings.simplefilter("ignore", PreconditionWarning)
    for eps in (1.0, 0.1, 0.01, 1e-4):
        g = bounds.gamma(2, eps, 0.0)
        print(f"eps={eps:g}: Gamma={g:.4f}  Gamma*eps={g * eps:.3e}  1.5*eps^0.75={1.5 * eps ** 0.75:.3e}")

# The 3/4 exponent cannot be raised: at beta = 0.76 the inequality
# breaks near eps = 1.
print(analytic.approx_check(0.99, 0.75), analytic.approx_check(0.99, 0.76))

# Psi(alpha) decreases to 1; Lambda adds a tau-dependent term.
for alpha in (2.5, 3, 4, 10, 100):
    print(f"alpha={alpha}: Psi={bounds.psi(alpha):.6f}  Lambda(tau=1e-2)={bounds.lambda_const(alpha, 1e-2):.6f}")

# The key integral inequality behind Psi, on Pareto tails.
for a, alpha in ((5, 4), (4, 3), (3, 2.5), (2.2, 2.1)):
    model = ParetoLoss(a)
    print(f"Pareto a={a}, alpha={alpha}:", analytic.sqrt_tail_dominance(model.tail, model.moment(alpha), alpha, [1.0]))

# Deviation terms as m grows: m^(-3/8) for alpha = 2, m^(-1/2) above.
for m in (10 ** 4, 10 ** 6, 10 ** 8):
    cap = bounds.CapacityDescriptor.log_shatter(5.0)
    print(m, bounds.unbounded_bound_alpha2(1.0, cap, 0.05, m), bounds.unbounded_bound_large_alpha(5, 4, 3, m, 0.05))
print(np.round([analytic.tail_integral_moment(ParetoLoss(3).tail, k, [1.0]) for k in (1, 2, 2.5)], 8))

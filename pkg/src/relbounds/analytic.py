"""Numerical checks of analytic facts used by the unbounded-loss bounds.

* monotonicity of ``F(x, y) = (x - y) / (c (x + y + eta))^{1/alpha}``;
* the ``eps^{3/4}`` envelope of ``eps sqrt(1 + log(1/eps)/2)``;
* layer-cake moment integrals ``int a t^{a-1} Pr[L > t] dt`` and the
  ``int sqrt(Pr[L > t]) dt <= Psi(a) L_a^{1/a}`` inequality.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .bounds import psi
from .errors import DivergenceError, DomainError

HALVED = "halved"  # denominator (x + y + eta) / 2
PLAIN = "plain"  # denominator x + y + eta


@dataclass(frozen=True)
class FParams:
    alpha: float
    eta: float

    def __post_init__(self):
        if not 1.0 < self.alpha <= 2.0:
            raise DomainError(f"alpha must lie in (1, 2], got {self.alpha!r}")
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta!r}")


def f_value(params: FParams, x, y, variant: str = HALVED):
    """``(x - y) / (c (x + y + eta))^{1/alpha}`` with c = 1/2 or 1."""
    if variant == HALVED:
        c = 0.5
    elif variant == PLAIN:
        c = 1.0
    else:
        raise DomainError(f"unknown variant {variant!r}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = (x - y) / (c * (x + y + params.eta)) ** (1.0 / params.alpha)
    return out if out.ndim else float(out)


class ProbeReport(NamedTuple):
    violations: int
    min_margin: float
    samples: int


def monotonicity_probe(params: FParams, samples: int, seed: int,
                       variant: str = HALVED, x=None, y=None) -> ProbeReport:
    """Random probes of ``F(x + d, y) > F(x, y)`` and ``F(x, y + d) < F(x, y)``.

    ``x``/``y`` pin the probe location (broadcast to ``samples``); otherwise
    both are log-uniform on ``[1e-3, 10]``. Steps are relative, ``d = u x``
    with ``u`` log-uniform on ``[1e-3, 1]``, so margins stay above rounding.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    xs = np.full(samples, x, float) if x is not None else 10 ** rng.uniform(-3, 1, samples)
    ys = np.full(samples, y, float) if y is not None else 10 ** rng.uniform(-3, 1, samples)
    if (xs <= 0).any() or (ys <= 0).any():
        raise DomainError("x and y must be positive")
    ux = 10 ** rng.uniform(-3, 0, samples)
    uy = 10 ** rng.uniform(-3, 0, samples)
    base = f_value(params, xs, ys, variant)
    up_x = f_value(params, xs + ux * xs, ys, variant) - base
    down_y = base - f_value(params, xs, ys + uy * ys, variant)
    margins = np.minimum(up_x, down_y)
    return ProbeReport(int((margins <= 0).sum()), float(margins.min()), samples)


class ApproxCheck(NamedTuple):
    holds: bool
    lhs: float
    rhs: float


def approx_check(epsilon: float, beta: float = 0.75) -> ApproxCheck:
    """Compare ``eps sqrt(1 + log(1/eps)/2)`` with ``eps^beta``."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    lhs = epsilon * math.sqrt(1.0 + 0.5 * math.log(1.0 / epsilon))
    rhs = epsilon ** beta
    return ApproxCheck(lhs <= rhs, lhs, rhs)


def approx_grid(epsilons: Sequence[float], beta: float = 0.75) -> list[tuple[float, float, float]]:
    return [(float(e), *approx_check(float(e), beta)[1:]) for e in epsilons]


def default_approx_epsilons(points_per_decade: int = 100) -> np.ndarray:
    return np.logspace(-6, 0, 6 * points_per_decade + 1)


def approx_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["epsilon", "lhs", "rhs"])
    for e, lhs, rhs in rows:
        w.writerow([repr(e), repr(lhs), repr(rhs)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# half-line quadrature


@dataclass(frozen=True)
class QuadratureBudget:
    rel_tol: float = 1e-10
    remainder_tol: float = 1e-10
    max_horizon: float = 1e12
    limit: int = 200


def _find_horizon(tail: Callable[[float], float], start: float, budget: QuadratureBudget):
    """Double ``T`` until the tail vanishes or the horizon budget is reached."""
    t = max(start, 1.0)
    while t < budget.max_horizon:
        if tail(t) == 0.0:
            return t, True
        t *= 2.0
    return t, tail(t) == 0.0


def _decay_exponent(tail, t: float) -> float:
    hi, lo = tail(t), tail(2.0 * t)
    if lo <= 0.0:
        return math.inf
    return math.log(hi / lo) / math.log(2.0)


def _integrate_pieces(g: Callable[[float], float], upper: float, breakpoints, budget):
    # geometric pieces keep each quad call on a scale where g varies mildly
    edges = {0.0, upper}
    t = upper
    while t > 1e-8:
        t /= 2.0
        edges.add(t)
    edges.update(b for b in breakpoints if 0.0 < b < upper)
    edges = sorted(edges)
    total = 0.0
    pieces = []
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(g, a, b, epsrel=budget.rel_tol, epsabs=0.0, limit=budget.limit)
        pieces.append(val)
    total = math.fsum(pieces)
    return total


def half_line_integral(tail: Callable[[float], float], weight_power: float,
                       tail_power: float, breakpoints: Sequence[float] = (),
                       budget: QuadratureBudget = QuadratureBudget()) -> float:
    """``int_0^inf t^weight_power tail(t)^tail_power dt``.

    Past the horizon the tail is treated as a pure power law
    ``tail(T) (T / t)^a`` with ``a`` read off from ``tail(T) / tail(2T)``,
    and the remainder is added in closed form.
    """
    g = lambda t: (t ** weight_power if weight_power else 1.0) * tail(t) ** tail_power  # noqa: E731
    start = max([1.0, *breakpoints])
    horizon, bounded = _find_horizon(tail, start, budget)
    if bounded:
        return _integrate_pieces(g, horizon, breakpoints, budget)

    a = _decay_exponent(tail, horizon)
    decay = a * tail_power - weight_power  # integrand ~ t^{-decay}
    if decay <= 1.0:
        raise DivergenceError(
            f"integrand decays like t^-{decay:.4g}; the integral diverges")

    def remainder(T):
        return T ** (weight_power + 1.0) * tail(T) ** tail_power / (decay - 1.0)

    # push the horizon until the closed-form remainder is negligible
    T = horizon
    head = _integrate_pieces(g, T, breakpoints, budget)
    while remainder(T) > budget.remainder_tol * max(head, 1e-300) and T < 1e30:
        nxt = T * 16.0
        head += integrate.quad(g, T, nxt, epsrel=budget.rel_tol, epsabs=0.0, limit=budget.limit)[0]
        T = nxt
    return head + remainder(T)


def tail_integral_moment(tail: Callable[[float], float], alpha: float = 1.0,
                         breakpoints: Sequence[float] = (),
                         budget: QuadratureBudget = QuadratureBudget()) -> float:
    """``E[L^alpha] = int_0^inf alpha t^{alpha-1} Pr[L > t] dt`` by quadrature.

    ``breakpoints`` lists known kinks or jumps of the tail (e.g. the Pareto
    scale or the support of a Bernoulli loss).
    """
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    if tail(0.0) > 1.0:
        raise DomainError("tail(0) must be a probability")
    return alpha * half_line_integral(tail, alpha - 1.0, 1.0, breakpoints, budget)


def sqrt_tail_integral(tail: Callable[[float], float], breakpoints: Sequence[float] = (),
                       budget: QuadratureBudget = QuadratureBudget()) -> float:
    """``int_0^inf sqrt(Pr[L > t]) dt``."""
    return half_line_integral(tail, 0.0, 0.5, breakpoints, budget)


class DominanceCheck(NamedTuple):
    lhs: float
    rhs: float
    slack: float
    holds: bool


def sqrt_tail_dominance(tail: Callable[[float], float], moment_alpha: float, alpha: float,
                        breakpoints: Sequence[float] = ()) -> DominanceCheck:
    """Check ``int sqrt(Pr[L > t]) dt <= Psi(alpha) L_alpha^{1/alpha}``.

    ``moment_alpha`` must come from an independent source (closed form), not
    from :func:`tail_integral_moment` on the same tail.
    """
    lhs = sqrt_tail_integral(tail, breakpoints)
    rhs = psi(alpha) * moment_alpha ** (1.0 / alpha)
    return DominanceCheck(lhs, rhs, rhs - lhs, lhs <= rhs)

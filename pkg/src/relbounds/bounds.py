"""Closed-form right-hand sides and constants of the relative deviation bounds.

Probability bounds return a :class:`Bound` holding the clipped value, the
unclipped log-value and a vacuousness flag. Constants return plain floats.
Everything is evaluated in log-space so that large capacities such as
``(2em/d)^d`` never overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import DomainError, PreconditionWarning

EXPECTED_SHATTER = "ExpectedShatter"
GROWTH_FUNCTION = "GrowthFunction"
VC_DIMENSION = "VCDimension"
PSEUDO_DIMENSION = "PseudoDimension"
_KINDS = (EXPECTED_SHATTER, GROWTH_FUNCTION, VC_DIMENSION, PSEUDO_DIMENSION)

TRUE_MINUS_EMP = "true_minus_emp"
EMP_MINUS_TRUE = "emp_minus_true"
UPPER_ON_TRUE = "upper_on_true"
UPPER_ON_EMP = "upper_on_emp"


@dataclass(frozen=True)
class CapacityDescriptor:
    """Complexity term of a bound.

    For ``ExpectedShatter`` and ``GrowthFunction`` the value is the shatter
    count on 2m points (or an upper bound on it); for the dimension kinds it
    is the integer dimension, converted through Sauer's lemma at n = 2m.
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown capacity kind {self.kind!r}")
        if not self.value >= 1:
            raise DomainError(f"capacity value must be >= 1, got {self.value!r}")
        if self.kind in (VC_DIMENSION, PSEUDO_DIMENSION) and int(self.value) != self.value:
            raise DomainError("dimension capacities must be integers")

    @classmethod
    def shatter(cls, value: float) -> "CapacityDescriptor":
        return cls(EXPECTED_SHATTER, value)

    @classmethod
    def log_shatter(cls, log_value: float) -> "CapacityDescriptor":
        return cls(EXPECTED_SHATTER, math.exp(log_value))

    def log_value(self, m: int) -> float:
        """Log of the shatter term on a double sample of size 2m."""
        if self.kind in (VC_DIMENSION, PSEUDO_DIMENSION):
            return log_sauer_growth_upper(int(self.value), 2 * m)
        return math.log(self.value)


@dataclass(frozen=True)
class BoundParams:
    """Parameter bundle; each evaluator validates only the fields it reads."""

    alpha: float = 2.0
    epsilon: float = 0.1
    tau: float = 0.0
    nu: float = 1.0
    v: float = 1.0
    delta: float = 0.05
    m: int = 1000


class Bound(NamedTuple):
    value: float
    log_raw: float
    vacuous: bool

    @property
    def raw(self) -> float:
        return math.exp(self.log_raw) if self.log_raw < 700 else math.inf


def _prob_bound(log_raw: float) -> Bound:
    vacuous = log_raw >= 0.0
    return Bound(1.0 if vacuous else math.exp(log_raw), log_raw, vacuous)


def _check_m(m):
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")


def _check_alpha_le2(alpha):
    if not 1.0 < alpha <= 2.0:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha!r}")


def _check_alpha_gt2(alpha):
    if not alpha > 2.0:
        raise DomainError(f"alpha must exceed 2, got {alpha!r}")


def log_sauer_growth_upper(d: int, n: int) -> float:
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if d > n:
        raise DomainError(f"Sauer bound requires d <= n (d={d}, n={n})")
    return d * (1.0 + math.log(n / d))


def sauer_growth_upper(d: int, n: int) -> float:
    """``(e n / d)^d``, the Sauer bound on the growth function at n points."""
    return math.exp(log_sauer_growth_upper(d, n))


# ---------------------------------------------------------------------------
# binary classification


def _relative_exponent(alpha: float, m: int) -> tuple[float, float]:
    # m^{2(alpha-1)/alpha} and 2^{(alpha+2)/alpha}
    return m ** (2.0 * (alpha - 1.0) / alpha), 2.0 ** ((alpha + 2.0) / alpha)


def relative_deviation_rhs(params: BoundParams, cap: CapacityDescriptor) -> Bound:
    """``4 E[S_H(x^2m)] exp(-m^{2(a-1)/a} eps^2 / 2^{(a+2)/a})``.

    Serves both one-sided relative deviation bounds for ``1 < alpha <= 2``;
    at alpha = 2 the exponent is ``-m eps^2 / 4``.
    """
    _check_alpha_le2(params.alpha)
    _check_m(params.m)
    if params.epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    scale, denom = _relative_exponent(params.alpha, params.m)
    log_raw = math.log(4.0) + cap.log_value(params.m) - scale * params.epsilon ** 2 / denom
    return _prob_bound(log_raw)


def _log_confidence_term(cap: CapacityDescriptor, m: int, delta: float) -> float:
    return cap.log_value(m) + math.log(4.0 / delta)


def relative_deviation_radius(params: BoundParams, cap: CapacityDescriptor,
                              side: str = TRUE_MINUS_EMP) -> float:
    """Coefficient multiplying ``R(h)^{1/alpha}`` (or the empirical analogue).

    Holds with probability ``1 - delta``; ``side`` only documents which risk
    the caller feeds into the root, the coefficient is the same.
    """
    if side not in (TRUE_MINUS_EMP, EMP_MINUS_TRUE):
        raise DomainError(f"unknown side {side!r}")
    _check_alpha_le2(params.alpha)
    _check_delta(params.delta)
    _check_m(params.m)
    scale, denom = _relative_exponent(params.alpha, params.m)
    return math.sqrt(denom) * math.sqrt(_log_confidence_term(cap, params.m, params.delta) / scale)


def confidence_u(cap: CapacityDescriptor, delta: float, m: int) -> float:
    """``(log E[S_H] + log(4/delta)) / m``."""
    _check_delta(delta)
    _check_m(m)
    return _log_confidence_term(cap, m, delta) / m


def solved_bound(rate: float, params: BoundParams, cap: CapacityDescriptor,
                 direction: str = UPPER_ON_TRUE) -> float:
    """``rate + 2 sqrt(rate u) + 4u``.

    With ``direction="upper_on_true"`` the rate is the empirical error and the
    result bounds the true error; ``"upper_on_emp"`` swaps the roles.
    """
    if direction not in (UPPER_ON_TRUE, UPPER_ON_EMP):
        raise DomainError(f"unknown direction {direction!r}")
    if not 0.0 <= rate <= 1.0:
        raise DomainError(f"rate must lie in [0, 1], got {rate!r}")
    u = confidence_u(cap, params.delta, params.m)
    return solved_bound_from_u(rate, u)


def solved_bound_from_u(rate: float, u: float) -> float:
    if u < 0:
        raise DomainError("u must be nonnegative")
    return rate + 2.0 * math.sqrt(rate * u) + 4.0 * u


def interpolated_rhs(params: BoundParams, cap: CapacityDescriptor) -> Bound:
    """``4 E[S_H] exp(-m nu eps^2 / (2 (1 - eps^2)))`` for the ratio with
    denominator ``R(h) + R_hat(h) + nu``."""
    eps = params.epsilon
    if not 0.0 < eps < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {eps!r}")
    if not params.nu > 0:
        raise DomainError("nu must be positive")
    _check_m(params.m)
    log_raw = (math.log(4.0) + cap.log_value(params.m)
               - params.m * params.nu * eps ** 2 / (2.0 * (1.0 - eps ** 2)))
    return _prob_bound(log_raw)


def fast_rate_rhs(params: BoundParams, cap: CapacityDescriptor,
                  realizable: bool = False) -> Bound:
    """Fast-rate bounds.

    General form ``4 E[S_H] exp(-m v eps / (4 (1 + v)))`` for
    ``sup_h R(h) - (1 + v) R_hat(h) > eps``; ``realizable=True`` gives the
    ``v -> inf`` limit ``4 E[S_H] exp(-m eps / 4)`` for consistent hypotheses.
    """
    if not params.epsilon > 0:
        raise DomainError("epsilon must be positive")
    _check_m(params.m)
    if realizable:
        rate = 0.25
    else:
        if not params.v > 0:
            raise DomainError("v must be positive")
        rate = params.v / (4.0 * (1.0 + params.v))
    log_raw = math.log(4.0) + cap.log_value(params.m) - params.m * rate * params.epsilon
    return _prob_bound(log_raw)


# ---------------------------------------------------------------------------
# unbounded losses, 1 < alpha <= 2


def gamma_precondition_holds(alpha: float, epsilon: float, tau: float) -> bool:
    """``0 < tau^{(a-1)/a} < eps^{a/(a-1)}``."""
    return 0.0 < tau ** ((alpha - 1.0) / alpha) < epsilon ** (alpha / (alpha - 1.0))


def gamma(alpha: float, epsilon: float, tau: float = 0.0) -> float:
    """Multiplier ``Gamma(alpha, eps)`` of the unbounded-loss threshold.

    Emits :class:`PreconditionWarning` when ``tau`` and ``epsilon`` violate
    ``0 < tau^{(a-1)/a} < eps^{a/(a-1)}``; the value is returned regardless.
    """
    _check_alpha_le2(alpha)
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if not gamma_precondition_holds(alpha, epsilon, tau):
        warnings.warn(
            f"gamma: tau={tau!r}, epsilon={epsilon!r} outside 0 < tau^((a-1)/a) < eps^(a/(a-1))",
            PreconditionWarning, stacklevel=2)
    a = alpha
    b = a / (a - 1.0)  # conjugate exponent
    first = (1.0 / b) * (1.0 + tau) ** (1.0 / a)
    inner = (1.0 + (1.0 / b) ** a * tau ** (1.0 / a)) ** (1.0 / a)
    log_term = (1.0 + math.log(1.0 / epsilon) / b ** (a - 1.0)) ** ((a - 1.0) / a)
    return first + (1.0 / a) * b ** (a - 1.0) * inner * log_term


def gamma2_closed_form(epsilon: float, tau: float = 0.0) -> float:
    """``sqrt(1+tau)/2 + sqrt(1 + sqrt(tau)/4) sqrt(1 + log(1/eps)/2)``."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    return (math.sqrt(1.0 + tau) / 2.0
            + math.sqrt(1.0 + 0.25 * math.sqrt(tau)) * math.sqrt(1.0 + 0.5 * math.log(1.0 / epsilon)))


def kappa(tau: float = 0.0) -> float:
    """Constant with ``Gamma(2, eps) eps <= kappa * eps^{3/4}``."""
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    return math.sqrt(1.0 + tau) / 2.0 + math.sqrt(1.0 + 0.25 * math.sqrt(tau))


def _check_moment(x, name="moment"):
    if not x >= 0 or math.isinf(x):
        raise DomainError(f"{name} must be finite and nonnegative, got {x!r}")


def unbounded_bound_alpha2(moment2: float, cap: CapacityDescriptor, delta: float,
                           m: int, direction: str = TRUE_MINUS_EMP) -> float:
    """Additive deviation ``(3 sqrt(L2) / 4) (4 (log E[S_Q] + log 1/delta) / m)^{3/8}``.

    ``moment2`` is the true second moment for ``true_minus_emp`` and the
    empirical one for ``emp_minus_true``. The 3/4 coefficient is taken as
    printed; :func:`unbounded_bound_alpha2_kappa` is the conservative variant.
    """
    return 0.75 * _alpha2_scale(moment2, cap, delta, m, direction)


def unbounded_bound_alpha2_kappa(moment2: float, cap: CapacityDescriptor, delta: float,
                                 m: int, direction: str = TRUE_MINUS_EMP,
                                 tau: float = 0.0) -> float:
    """Same deviation with the coefficient ``kappa_tau`` (1.5 at tau = 0)."""
    return kappa(tau) * _alpha2_scale(moment2, cap, delta, m, direction)


def _alpha2_scale(moment2, cap, delta, m, direction):
    if direction not in (TRUE_MINUS_EMP, EMP_MINUS_TRUE):
        raise DomainError(f"unknown direction {direction!r}")
    _check_moment(moment2, "moment2")
    _check_delta(delta)
    _check_m(m)
    x = 4.0 * (cap.log_value(m) + math.log(1.0 / delta)) / m
    return math.sqrt(moment2) * x ** 0.375


# ---------------------------------------------------------------------------
# unbounded losses, alpha > 2


def psi(alpha: float) -> float:
    """``(1/2)^{2/a} (a/(a-2))^{(a-1)/a}``; diverges as alpha -> 2."""
    _check_alpha_gt2(alpha)
    a = alpha
    return math.exp((2.0 / a) * math.log(0.5) + ((a - 1.0) / a) * math.log(a / (a - 2.0)))


def lambda_const(alpha: float, tau: float = 0.0, epsilon: float | None = None) -> float:
    """``Psi(alpha) + a/(a-1) tau^{(a-2)/(2a)}``.

    When ``epsilon`` is given and ``tau > epsilon^2`` a
    :class:`PreconditionWarning` is emitted.
    """
    _check_alpha_gt2(alpha)
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if epsilon is not None and not (0.0 < tau <= epsilon ** 2):
        warnings.warn(f"lambda: tau={tau!r} outside 0 < tau <= epsilon^2 = {epsilon ** 2!r}",
                      PreconditionWarning, stacklevel=2)
    a = alpha
    return psi(a) + (a / (a - 1.0)) * tau ** ((a - 2.0) / (2.0 * a))


def unbounded_bound_large_alpha(moment_alpha: float, alpha: float, d: int, m: int,
                                delta: float, direction: str = TRUE_MINUS_EMP) -> float:
    """``2 Psi(a) L_a^{1/a} sqrt((d log(2em/d) + log(4/delta)) / m)``; d is the
    pseudo-dimension of the loss class."""
    if direction not in (TRUE_MINUS_EMP, EMP_MINUS_TRUE):
        raise DomainError(f"unknown direction {direction!r}")
    _check_moment(moment_alpha, "moment_alpha")
    _check_delta(delta)
    _check_m(m)
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    if d > 2 * m:
        raise DomainError(f"requires d <= 2m (d={d}, m={m})")
    log_cap = d * math.log(2.0 * math.e * m / d)
    return (2.0 * psi(alpha) * moment_alpha ** (1.0 / alpha)
            * math.sqrt((log_cap + math.log(4.0 / delta)) / m))


# ---------------------------------------------------------------------------
# identifier registry


def _cap_from(kw) -> CapacityDescriptor:
    for key, kind in (("shatter", EXPECTED_SHATTER), ("growth", GROWTH_FUNCTION),
                      ("vc_dim", VC_DIMENSION), ("pdim", PSEUDO_DIMENSION)):
        if kw.get(key) is not None:
            return CapacityDescriptor(kind, kw[key])
    if kw.get("log_shatter") is not None:
        return CapacityDescriptor.log_shatter(kw["log_shatter"])
    raise DomainError("a capacity is required (shatter, growth, vc_dim, pdim or log_shatter)")


def _params_from(kw) -> BoundParams:
    fields = {k: kw[k] for k in ("alpha", "epsilon", "tau", "nu", "v", "delta", "m")
              if kw.get(k) is not None}
    return BoundParams(**fields)


def _bound_dict(b: Bound) -> dict:
    return {"rhs": b.value, "vacuous": b.vacuous, "log_rhs_unclipped": b.log_raw}


def _need(kw, *names):
    missing = [n for n in names if kw.get(n) is None]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join(missing)}")


def _thm3(kw):
    _need(kw, "epsilon", "m")
    return _bound_dict(relative_deviation_rhs(_params_from(kw), _cap_from(kw)))


def _cor4(kw):
    _need(kw, "m", "delta")
    coef = relative_deviation_radius(_params_from(kw), _cap_from(kw),
                                     kw.get("direction") or TRUE_MINUS_EMP)
    out = {"coefficient": coef}
    if kw.get("rate") is not None:
        out["deviation"] = coef * kw["rate"] ** (1.0 / _params_from(kw).alpha)
    return out


def _cor5(kw):
    _need(kw, "rate", "m", "delta")
    return {"bound": solved_bound(kw["rate"], _params_from(kw), _cap_from(kw),
                                  kw.get("direction") or UPPER_ON_TRUE)}


def _thm5(kw):
    _need(kw, "epsilon", "nu", "m")
    return _bound_dict(interpolated_rhs(_params_from(kw), _cap_from(kw)))


def _cor6(kw):
    _need(kw, "epsilon", "v", "m")
    return _bound_dict(fast_rate_rhs(_params_from(kw), _cap_from(kw), realizable=False))


def _cor7(kw):
    _need(kw, "epsilon", "m")
    return _bound_dict(fast_rate_rhs(_params_from(kw), _cap_from(kw), realizable=True))


def _gamma(kw):
    _need(kw, "alpha", "epsilon")
    tau = kw.get("tau") or 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PreconditionWarning)
        g = gamma(kw["alpha"], kw["epsilon"], tau)
    return {"gamma": g, "threshold": g * kw["epsilon"],
            "warnings": [str(w.message) for w in caught]}


def _cor9(kw):
    out = _thm3(kw)
    if kw.get("alpha") is not None and kw.get("epsilon", 0) > 0:
        out.update(_gamma(kw))
    return out


def _cor10(kw):
    _need(kw, "epsilon")
    return {"gamma": gamma2_closed_form(kw["epsilon"], kw.get("tau") or 0.0)}


def _kappa(kw):
    return {"kappa": kappa(kw.get("tau") or 0.0)}


def _cor11(kw):
    _need(kw, "moment", "delta", "m")
    return {"deviation": unbounded_bound_alpha2(kw["moment"], _cap_from(kw), kw["delta"], kw["m"],
                                                kw.get("direction") or TRUE_MINUS_EMP)}


def _cor11_kappa(kw):
    _need(kw, "moment", "delta", "m")
    return {"deviation": unbounded_bound_alpha2_kappa(kw["moment"], _cap_from(kw), kw["delta"],
                                                      kw["m"], kw.get("direction") or TRUE_MINUS_EMP,
                                                      kw.get("tau") or 0.0)}


def _psi(kw):
    _need(kw, "alpha")
    return {"psi": psi(kw["alpha"])}


def _lambda(kw):
    _need(kw, "alpha")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PreconditionWarning)
        lam = lambda_const(kw["alpha"], kw.get("tau") or 0.0, kw.get("epsilon"))
    out = {"lambda": lam, "warnings": [str(w.message) for w in caught]}
    if kw.get("epsilon") is not None:
        out["threshold"] = lam * kw["epsilon"]
    return out


def _cor15(kw):
    return _thm3({**kw, "alpha": 2.0})


def _thm14(kw):
    _need(kw, "alpha", "epsilon", "m")
    out = _cor15(kw)
    out.update(_lambda(kw))
    return out


def _cor16(kw):
    _need(kw, "moment", "alpha", "m", "delta")
    d = kw.get("pdim") if kw.get("pdim") is not None else kw.get("vc_dim")
    if d is None:
        raise DomainError("missing parameter: pdim")
    return {"deviation": unbounded_bound_large_alpha(kw["moment"], kw["alpha"], int(d), kw["m"],
                                                     kw["delta"], kw.get("direction") or TRUE_MINUS_EMP)}


def _sauer(kw):
    _need(kw, "vc_dim", "n")
    return {"growth_upper": sauer_growth_upper(int(kw["vc_dim"]), int(kw["n"]))}


BOUNDS: dict[str, tuple[Callable[[dict], dict], str]] = {
    "thm3": (_thm3, "relative deviation bound, 1 < alpha <= 2 (either side)"),
    "cor4": (_cor4, "deviation coefficient at confidence 1 - delta"),
    "cor5": (_cor5, "solved second-degree bound rate + 2 sqrt(rate u) + 4u"),
    "thm5": (_thm5, "bound for ratio with denominator R + R_hat + nu"),
    "cor6": (_cor6, "fast rate with slack factor (1 + v)"),
    "cor7": (_cor7, "realizable fast rate"),
    "thm8": (_gamma, "Gamma(alpha, eps) and threshold Gamma * eps"),
    "cor9": (_cor9, "unbounded loss, 1 < alpha <= 2, threshold-class capacity"),
    "cor10": (_cor10, "Gamma(2, eps) closed form"),
    "kappa": (_kappa, "kappa_tau with Gamma(2, eps) eps <= kappa eps^(3/4)"),
    "cor11": (_cor11, "unbounded loss, alpha = 2 deviation (coefficient 3/4)"),
    "cor11_kappa": (_cor11_kappa, "unbounded loss, alpha = 2 deviation (coefficient kappa_tau)"),
    "prop13": (_psi, "Psi(alpha)"),
    "psi": (_psi, "Psi(alpha)"),
    "thm14": (_thm14, "Lambda(alpha, tau) threshold with the alpha = 2 rhs"),
    "lambda": (_lambda, "Lambda(alpha, tau)"),
    "cor15": (_cor15, "unbounded loss, alpha > 2 probability bound"),
    "cor16": (_cor16, "unbounded loss, alpha > 2 deviation via pseudo-dimension"),
    "sauer": (_sauer, "Sauer bound (e n / d)^d"),
}


def evaluate(bound_id: str, **kwargs) -> dict:
    """Evaluate a registered bound by identifier; returns a JSON-ready dict."""
    try:
        fn, _ = BOUNDS[bound_id]
    except KeyError:
        raise DomainError(f"unknown bound identifier {bound_id!r}; "
                          f"known: {', '.join(sorted(BOUNDS))}") from None
    return fn(kwargs)


def symmetrized_rhs(params: BoundParams, cap: CapacityDescriptor) -> Bound:
    """``E[S_H(x^2m)] exp(-m^{2(a-1)/a} eps^2 / 2^{(a+2)/a})``: the two-sample
    probability before the factor 4 of the symmetrization step."""
    b = relative_deviation_rhs(params, cap)
    return _prob_bound(b.log_raw - math.log(4.0))

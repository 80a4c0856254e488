"""Exact binomial tail probabilities and grid certificates for the 1/4 lemmas.

Two facts about ``X ~ B(m, p)`` are needed by the symmetrization arguments:

* ``Pr[X >= mp] > 1/4`` whenever ``p > 1/m``;
* ``Pr[X <= mp] > 1/4`` whenever ``p < 1 - 1/m``.

Both are certified here by exhaustive evaluation over an (m, p) grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

GEQ_MEAN = "geq_mean"
LEQ_MEAN = "leq_mean"

# |mp - round(mp)| below this counts as an integer mean
_INTEGER_MEAN_TOL = 1e-9


@dataclass(frozen=True)
class BinomialSpec:
    m: int
    p: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")

    @property
    def mean(self) -> float:
        return self.m * self.p


_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirlerr(n: np.ndarray) -> np.ndarray:
    """``log(n!) - log(sqrt(2 pi n) (n/e)^n)`` for integer ``n >= 1``."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    out = np.empty_like(n)
    small = n <= 15
    ns = n[small]
    out[small] = gammaln(ns + 1.0) - (ns + 0.5) * np.log(ns) + ns - _LOG_SQRT_2PI
    nl = n[~small]
    nn = nl * nl
    out[~small] = (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - (1 / 1188) / nn) / nn) / nn) / nn) / nl
    return out


def _bd0(x: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Deviance ``x log(x/mu) + mu - x`` without cancellation near ``x = mu``."""
    x, mu = np.broadcast_arrays(np.asarray(x, float), np.asarray(mu, float))
    out = np.empty(x.shape)
    near = np.abs(x - mu) < 0.1 * (x + mu)
    xf, mf = x[~near], mu[~near]
    out[~near] = xf * np.log(xf / mf) + mf - xf
    xn, mn = x[near], mu[near]
    v = (xn - mn) / (xn + mn)
    s = (xn - mn) * v
    ej = 2.0 * xn * v
    v2 = v * v
    for j in range(1, 20):  # |v| < 1/10 bounds the series length
        ej = ej * v2
        term = ej / (2 * j + 1)
        s = s + term
        if not np.any(np.abs(term) > 1e-17 * np.abs(s)):
            break
    out[near] = s
    return out


def _log_pmf(m: int, p, k):
    """Log-pmf by Loader's saddle-point decomposition.

    Accurate to a few ulps of the pmf even for m ~ 1e4, where a plain
    log-gamma difference loses ~1e-11.
    """
    shape = np.broadcast_shapes(np.shape(p), np.shape(k))
    k = np.asarray(k, float)
    # Stirling corrections depend on k only: evaluate before broadcasting over p
    kc = np.clip(k, 1, max(m - 1, 1))
    stir = _stirlerr(np.array([m]))[0] - _stirlerr(kc) - _stirlerr(np.maximum(m - kc, 1))
    root = 0.5 * np.log(m / (kc * np.maximum(m - kc, 1))) - _LOG_SQRT_2PI
    p, k, stir, root = np.broadcast_arrays(np.asarray(p, float), k, stir, root)
    q = 1.0 - p
    out = np.empty(p.shape)
    lo, hi = k == 0, k == m
    out[lo] = m * np.log1p(-p[lo])
    out[hi] = m * np.log(p[hi])
    mid = ~(lo | hi)
    km = k[mid]
    out[mid] = (stir[mid] + root[mid]
                - _bd0(km, m * p[mid]) - _bd0(m - km, m * q[mid]))
    out = out.reshape(shape)
    return out if out.ndim else float(out)


def pmf(spec: BinomialSpec, k: int) -> float:
    """Probability that ``B(m, p)`` equals ``k``, computed in log-space."""
    if int(k) != k or not 0 <= k <= spec.m:
        raise DomainError(f"k must be an integer in [0, {spec.m}], got {k!r}")
    return float(np.exp(_log_pmf(spec.m, spec.p, k)))


def pmf_vector(spec: BinomialSpec) -> np.ndarray:
    k = np.arange(spec.m + 1)
    return np.exp(_log_pmf(spec.m, spec.p, k))


def _mean_cut(m: int, p: float) -> tuple[int, bool]:
    """Return (floor-or-exact index of mp, whether mp is an integer)."""
    mp = m * p
    r = round(mp)
    if abs(mp - r) <= _INTEGER_MEAN_TOL * max(1.0, mp):
        return int(r), True
    return math.floor(mp), False


def _sum_small_first(values: np.ndarray) -> float:
    return math.fsum(np.sort(values))


def tail_geq_mean(spec: BinomialSpec) -> float:
    """``Pr[X >= mp]``; the term ``k = mp`` is included when mp is an integer."""
    cut, exact = _mean_cut(spec.m, spec.p)
    lo = cut if exact else cut + 1
    return _sum_small_first(pmf_vector(spec)[lo:])


def tail_leq_mean(spec: BinomialSpec) -> float:
    """``Pr[X <= mp]``, inclusive at integer mp."""
    cut, _ = _mean_cut(spec.m, spec.p)
    return _sum_small_first(pmf_vector(spec)[: cut + 1])


@dataclass
class ScanResult:
    which: str
    m_max: int
    p_resolution: float
    k: int
    min_value: float
    argmin: tuple[int, float]
    all_above_quarter: bool
    skipped_m: list[int] = field(default_factory=list)
    rows: list[tuple[int, float, float]] = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "which": self.which,
            "m_max": self.m_max,
            "p_resolution": self.p_resolution,
            "k": self.k,
            "min_value": self.min_value,
            "argmin": {"m": self.argmin[0], "p": self.argmin[1]},
            "all_above_quarter": self.all_above_quarter,
            "skipped_m": list(self.skipped_m),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "p", "tail_probability"])
        for m, p, v in self.rows:
            w.writerow([m, repr(p), repr(v)])
        return buf.getvalue()


def _grid_steps(p_resolution: float) -> int:
    steps = round(1.0 / p_resolution)
    if abs(steps * p_resolution - 1.0) > 1e-9:
        raise DomainError("p_resolution must divide 1 evenly (e.g. 1e-3, 0.005)")
    return steps


def _tails_for_m(m: int, j: np.ndarray, steps: int, which: str) -> np.ndarray:
    # integer arithmetic on the grid index avoids float ambiguity at integer mp
    p = j / steps
    k = np.arange(m + 1)
    probs = np.exp(_log_pmf(m, p[:, None], k[None, :]))
    num = m * j  # mp = num / steps
    if which == GEQ_MEAN:
        lo = -(-num // steps)  # ceil(mp)
        mask = k[None, :] >= lo[:, None]
    else:
        hi = num // steps  # floor(mp)
        mask = k[None, :] <= hi[:, None]
    # ascending order within a row is smallest-first on each side of the mode;
    # np.sum uses pairwise summation, ample for m <= 1e3 at 1e-12
    return np.where(mask, probs, 0.0).sum(axis=1)


def certify_lemma(which: str = GEQ_MEAN, m_max: int = 200,
                  p_resolution: float = 1e-3, k: int = 1,
                  keep_rows: bool = True) -> ScanResult:
    """Exhaustively scan the lemma's precondition region.

    ``which="geq_mean"`` scans ``p > k/m``; ``which="leq_mean"`` scans
    ``p < 1 - k/m``. m runs over ``[2, m_max]`` and p over multiples of
    ``p_resolution`` strictly inside (0, 1).
    """
    if which not in (GEQ_MEAN, LEQ_MEAN):
        raise DomainError(f"unknown lemma {which!r}")
    if m_max < 2:
        raise DomainError("m_max must be at least 2")
    if not 0.0 < p_resolution <= 0.01:
        raise DomainError("p_resolution must lie in (0, 0.01]")
    steps = _grid_steps(p_resolution)
    j_all = np.arange(1, steps)

    best = (math.inf, (0, 0.0))
    skipped = []
    rows = []
    for m in range(2, m_max + 1):
        # p > k/m  <=>  j*m > k*steps ;  p < 1 - k/m  <=>  j*m < (m-k)*steps
        if which == GEQ_MEAN:
            j = j_all[j_all * m > k * steps]
        else:
            j = j_all[j_all * m < (m - k) * steps]
        if j.size == 0:
            skipped.append(m)
            continue
        tails = _tails_for_m(m, j, steps, which)
        i = int(np.argmin(tails))
        if tails[i] < best[0]:
            best = (float(tails[i]), (m, float(Fraction(int(j[i]), steps))))
        if keep_rows:
            rows.extend(zip([m] * j.size, (j / steps).tolist(), tails.tolist()))

    if math.isinf(best[0]):
        raise DomainError("scan grid is empty for every m")
    return ScanResult(
        which=which, m_max=m_max, p_resolution=p_resolution, k=k,
        min_value=best[0], argmin=best[1], all_above_quarter=best[0] > 0.25,
        skipped_m=skipped, rows=rows,
    )

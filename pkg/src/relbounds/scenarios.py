"""Sampling scenarios whose true risks and moments are known exactly.

Three families are provided:

* :class:`BinaryScenario` -- a finite distribution over points and a table of
  0/1 errors per hypothesis;
* :class:`FiniteLossScenario` -- a finite distribution with real losses
  (includes the importance-weighted zero-one loss);
* :class:`ParetoScaleScenario` -- ``L(h, z) = c_h Z`` with ``Z`` Pareto.

Each scenario round-trips through a plain dict (:meth:`to_dict` and
:func:`scenario_from_dict`).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .capacity import HypothesisTable, LossTable, growth_function, threshold_class
from .errors import ConfigError, DomainError
from .models import ParetoLoss

BINARY = "binary_classification"
UNBOUNDED = "unbounded_loss"

_PROB_TOL = 1e-12


def _probabilities(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or (p < 0).any():
        raise DomainError("probabilities must be a nonempty nonnegative vector")
    if abs(math.fsum(p) - 1.0) > _PROB_TOL:
        raise DomainError(f"probabilities sum to {math.fsum(p)!r}, not 1")
    return p


def _check_declared(declared, computed, what):
    if declared is None:
        return
    declared = np.asarray(declared, dtype=float)
    if declared.shape != computed.shape or not np.allclose(declared, computed, rtol=1e-9, atol=1e-12):
        raise DomainError(f"declared {what} disagree with the model: {declared} vs {computed}")


class BinaryScenario:
    kind = BINARY

    def __init__(self, probabilities, errors: HypothesisTable, spec: dict | None = None):
        self.probabilities = _probabilities(probabilities)
        if errors.domain_size != self.probabilities.size:
            raise DomainError("error table and distribution have different domains")
        self.errors = errors
        self._err = errors.labels.astype(float)
        self.true_risks = self._err @ self.probabilities
        self._spec = spec

    @property
    def n_hypotheses(self) -> int:
        return len(self.errors)

    def sample_counts(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return rng.multinomial(m, self.probabilities)

    def empirical_risks(self, counts: np.ndarray) -> np.ndarray:
        return self._err @ counts / counts.sum()

    def log_capacity(self, m: int) -> float:
        """Log of the growth function of the error class on 2m points.

        Upper-bounds the expected shatter count on a double sample.
        """
        return math.log(_growth_cached(self.errors.labels.tobytes(), self.errors.labels.shape, 2 * m))

    @classmethod
    def thresholds(cls, n: int = 16, count: int = 16, target_cut: int | None = None,
                   flips=(), probabilities=None) -> "BinaryScenario":
        """Threshold class ``x -> 1[x >= k]`` on ``n`` points.

        The target is the threshold at ``target_cut`` (realizable) with the
        listed points' labels flipped (agnostic when nonempty).
        """
        table = HypothesisTable.thresholds(n, count)
        target = np.zeros(n, dtype=np.uint8)
        if target_cut is not None:
            target = (np.arange(n) >= target_cut).astype(np.uint8)
        for i in flips:
            target[i] ^= 1
        p = np.full(n, 1.0 / n) if probabilities is None else probabilities
        spec = {"kind": BINARY, "preset": "thresholds", "n": n, "count": count,
                "target_cut": target_cut, "flips": list(flips)}
        if probabilities is not None:
            spec["probabilities"] = list(map(float, probabilities))
        return cls(p, table.xor(target), spec)

    def to_dict(self) -> dict:
        if self._spec is not None:
            return dict(self._spec)
        return {"kind": BINARY, "probabilities": self.probabilities.tolist(),
                "hypotheses": self.errors.labels.tolist()}


@lru_cache(maxsize=64)
def _growth_cached(raw: bytes, shape, n: int) -> int:
    labels = np.frombuffer(raw, dtype=np.uint8).reshape(shape)
    return growth_function(HypothesisTable(labels), n)


class FiniteLossScenario:
    kind = UNBOUNDED

    def __init__(self, probabilities, losses: LossTable, spec: dict | None = None):
        self.probabilities = _probabilities(probabilities)
        if losses.domain_size != self.probabilities.size:
            raise DomainError("loss table and distribution have different domains")
        self.losses = losses
        self.true_risks = losses.values @ self.probabilities
        self._spec = spec

    @property
    def n_hypotheses(self) -> int:
        return len(self.losses)

    def moments(self, alpha: float) -> np.ndarray:
        return self.losses.values ** alpha @ self.probabilities

    def draw(self, rng, m):
        return rng.multinomial(m, self.probabilities)

    def empirical(self, sample, alpha: float):
        counts = sample
        w = counts / counts.sum()
        return self.losses.values @ w, self.losses.values ** alpha @ w

    def log_capacity(self, m: int) -> float:
        """Log growth of the threshold class ``{z -> 1[L(h, z) > t]}`` on 2m points."""
        cuts = np.concatenate([[-1.0], np.unique(self.losses.values)])
        q = threshold_class(self.losses, cuts)
        return math.log(_growth_cached(q.labels.tobytes(), q.labels.shape, 2 * m))

    @classmethod
    def importance_weighted(cls, source, target, hypotheses, labels) -> "FiniteLossScenario":
        """Zero-one loss reweighted by ``target(x) / source(x)``, sampled from ``source``.

        The expected loss under the source equals the target-domain error.
        """
        src = _probabilities(source)
        tgt = _probabilities(target)
        if (src <= 0).any():
            raise DomainError("source distribution must have full support")
        err = HypothesisTable(hypotheses).xor(labels).labels.astype(float)
        weights = tgt / src
        spec = {"kind": UNBOUNDED, "model": "importance_weighted", "source": src.tolist(),
                "target": tgt.tolist(), "hypotheses": [list(map(int, h)) for h in hypotheses],
                "labels": list(map(int, labels))}
        return cls(src, LossTable(err * weights), spec)

    def to_dict(self) -> dict:
        if self._spec is not None:
            return dict(self._spec)
        return {"kind": UNBOUNDED, "model": "finite", "probabilities": self.probabilities.tolist(),
                "losses": self.losses.values.tolist()}


class ParetoScaleScenario:
    """``L(h, z) = c_h Z`` with ``Z ~ Pareto(shape, scale)``."""

    kind = UNBOUNDED

    def __init__(self, shape: float, scale: float = 1.0, scale_factors=(1.0,)):
        self.model = ParetoLoss(shape, scale)
        self.scale_factors = np.asarray(scale_factors, dtype=float)
        if self.scale_factors.ndim != 1 or self.scale_factors.size == 0 or (self.scale_factors <= 0).any():
            raise DomainError("scale factors must be a nonempty positive vector")
        self.true_risks = self.scale_factors * self.model.mean

    @property
    def n_hypotheses(self) -> int:
        return self.scale_factors.size

    def moments(self, alpha: float) -> np.ndarray:
        return self.scale_factors ** alpha * self.model.moment(alpha)

    def draw(self, rng, m):
        return self.model.sample(rng, m)

    def empirical(self, sample, alpha: float):
        return self.scale_factors * sample.mean(), self.scale_factors ** alpha * (sample ** alpha).mean()

    def log_capacity(self, m: int) -> float:
        # every c_h Z thresholds the same variable: distinct points give the
        # 2m + 1 "top-k" dichotomies
        return math.log(2 * m + 1)

    def to_dict(self) -> dict:
        return {"kind": UNBOUNDED, "model": "pareto", "shape": self.model.shape,
                "scale": self.model.scale, "scale_factors": self.scale_factors.tolist()}


_BINARY_KEYS = {"kind", "preset", "n", "count", "target_cut", "flips", "probabilities",
                "hypotheses", "target", "true_risks"}
_UNBOUNDED_KEYS = {"kind", "model", "shape", "scale", "scale_factors", "probabilities",
                   "losses", "source", "target", "hypotheses", "labels", "true_risks"}


def scenario_from_dict(d: dict):
    """Build a scenario from its dict form (strict: unknown keys rejected)."""
    if not isinstance(d, dict):
        raise ConfigError("scenario must be an object")
    kind = d.get("kind")
    if kind == BINARY:
        _reject_unknown(d, _BINARY_KEYS)
        if d.get("preset") == "thresholds":
            sc = BinaryScenario.thresholds(d.get("n", 16), d.get("count", 16), d.get("target_cut"),
                                           d.get("flips", ()), d.get("probabilities"))
        elif d.get("preset") is None:
            table = HypothesisTable(_require(d, "hypotheses"))
            if d.get("target") is not None:
                table = table.xor(d["target"])
            sc = BinaryScenario(_require(d, "probabilities"), table,
                                {k: v for k, v in d.items() if k != "true_risks"})
        else:
            raise ConfigError(f"unknown preset {d['preset']!r}")
    elif kind == UNBOUNDED:
        _reject_unknown(d, _UNBOUNDED_KEYS)
        model = d.get("model")
        if model == "pareto":
            sc = ParetoScaleScenario(_require(d, "shape"), d.get("scale", 1.0),
                                     d.get("scale_factors", [1.0]))
        elif model == "finite":
            sc = FiniteLossScenario(_require(d, "probabilities"), LossTable(_require(d, "losses")),
                                    {k: v for k, v in d.items() if k != "true_risks"})
        elif model == "importance_weighted":
            sc = FiniteLossScenario.importance_weighted(
                _require(d, "source"), _require(d, "target"), _require(d, "hypotheses"),
                _require(d, "labels"))
        else:
            raise ConfigError(f"unknown unbounded model {model!r}")
    else:
        raise ConfigError(f"unknown scenario kind {kind!r}")
    _check_declared(d.get("true_risks"), sc.true_risks, "true risks")
    return sc


def _reject_unknown(d, allowed):
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown scenario keys: {sorted(extra)}")


def _require(d, key):
    if d.get(key) is None:
        raise ConfigError(f"scenario is missing {key!r}")
    return d[key]

"""Brute-force shatter coefficients, growth functions and dimensions.

These routines are exact oracles for small finite classes, not scalable
estimators. Enumeration is guarded by an explicit :class:`Budget`; exceeding
it raises :class:`~relbounds.errors.BudgetError` instead of truncating.

Table file format (CSV): one row per hypothesis, one column per domain
point; blank lines and lines starting with ``#`` are ignored. Binary tables
hold 0/1 labels, loss tables hold nonnegative reals.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetError, DomainError


@dataclass(frozen=True)
class Budget:
    max_domain: int = 24
    max_subset: int = 20


DEFAULT_BUDGET = Budget()


def _dedupe_rows(rows: np.ndarray) -> np.ndarray:
    _, first = np.unique(rows, axis=0, return_index=True)
    return rows[np.sort(first)]


def _as_matrix(rows, dtype) -> np.ndarray:
    if not isinstance(rows, np.ndarray):
        rows = [list(r) for r in rows]
        if len({len(r) for r in rows}) > 1:
            raise DomainError("all rows must have the same length")
    return np.asarray(rows, dtype=dtype)


class HypothesisTable:
    """Finite binary class given by its label vectors on a finite domain.

    Duplicate label vectors are dropped on construction (first occurrence
    kept), so ``len(table)`` is the number of distinct hypotheses.
    """

    def __init__(self, hypotheses: Iterable[Sequence[int]], domain_size: int | None = None):
        rows = _as_matrix(hypotheses, np.int64)
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise DomainError("a hypothesis table needs at least one label vector")
        if domain_size is not None and rows.shape[1] != domain_size:
            raise DomainError(f"label vectors must have length {domain_size}")
        if rows.shape[1] == 0:
            raise DomainError("domain must be nonempty")
        if not np.isin(rows, (0, 1)).all():
            raise DomainError("labels must be 0 or 1")
        self.labels = _dedupe_rows(rows.astype(np.uint8))
        self.labels.setflags(write=False)

    @property
    def domain_size(self) -> int:
        return self.labels.shape[1]

    def __len__(self):
        return self.labels.shape[0]

    def __repr__(self):
        return f"HypothesisTable(n={self.domain_size}, |H|={len(self)})"

    def permuted(self, perm: Sequence[int]) -> "HypothesisTable":
        return HypothesisTable(self.labels[:, list(perm)])

    def xor(self, target: Sequence[int]) -> "HypothesisTable":
        """Error indicators ``1[h(x) != target(x)]``."""
        t = np.asarray(target, dtype=np.uint8)
        if t.shape != (self.domain_size,):
            raise DomainError("target must label every domain point")
        return HypothesisTable(self.labels ^ t)

    @classmethod
    def thresholds(cls, n: int, count: int | None = None) -> "HypothesisTable":
        """Threshold functions ``x -> 1[x >= k]`` on the points ``0..n-1``.

        ``count`` defaults to ``n + 1`` (every cut, including all-ones and
        all-zeros); smaller counts keep cuts ``k = 0..count-1``.
        """
        count = n + 1 if count is None else count
        x = np.arange(n)
        return cls([(x >= k).astype(int) for k in range(count)])

    @classmethod
    def full(cls, n: int) -> "HypothesisTable":
        return cls(list(itertools.product((0, 1), repeat=n)))

    @classmethod
    def from_csv(cls, path) -> "HypothesisTable":
        return cls([[int(float(v)) for v in row] for row in _read_rows(path)])

    def to_csv(self) -> str:
        return "".join(",".join(map(str, r)) + "\n" for r in self.labels.tolist())


class LossTable:
    """Loss values ``L(h, z_i)`` of finitely many hypotheses on a finite sample."""

    def __init__(self, hypotheses: Iterable[Sequence[float]], domain_size: int | None = None):
        values = _as_matrix(hypotheses, float)
        if values.ndim != 2 or values.shape[0] == 0 or values.shape[1] == 0:
            raise DomainError("a loss table needs at least one nonempty row")
        if domain_size is not None and values.shape[1] != domain_size:
            raise DomainError(f"loss vectors must have length {domain_size}")
        if not np.isfinite(values).all() or (values < 0).any():
            raise DomainError("losses must be finite and nonnegative")
        self.values = values.copy()
        self.values.setflags(write=False)

    @property
    def domain_size(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.values.shape[0]

    def __repr__(self):
        return f"LossTable(n={self.domain_size}, |H|={len(self)})"

    @classmethod
    def from_csv(cls, path) -> "LossTable":
        return cls([[float(v) for v in row] for row in _read_rows(path)])


def _read_rows(path) -> list[list[str]]:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return [[c.strip() for c in row] for row in csv.reader(lines)]


def _count_patterns(block: np.ndarray) -> int:
    # rows of `block` are restrictions; pack to bytes for hashing
    packed = np.packbits(block, axis=1)
    return len({r.tobytes() for r in packed})


def shatter_count(table: HypothesisTable, sample: Sequence[int]) -> int:
    """Number of distinct restrictions ``(h(x_1), ..., h(x_m))`` over ``h``."""
    idx = np.asarray(sample, dtype=np.int64)
    if idx.size == 0:
        raise DomainError("sample must be nonempty")
    if idx.min() < 0 or idx.max() >= table.domain_size:
        raise DomainError(f"sample indices must lie in [0, {table.domain_size})")
    # repeats duplicate a coordinate and never create new patterns
    return _count_patterns(table.labels[:, np.unique(idx)])


def _check_budget(n: int, k: int, budget: Budget):
    if n > budget.max_domain:
        raise BudgetError(f"domain size {n} exceeds budget {budget.max_domain}")
    if k > budget.max_subset:
        raise BudgetError(f"subset size {k} exceeds budget {budget.max_subset}")


def growth_function(table: HypothesisTable, m: int, budget: Budget = DEFAULT_BUDGET) -> int:
    """``max`` of :func:`shatter_count` over samples of size ``m``.

    Samples are tuples, but repeated points cannot add patterns, so the max
    over subsets of size ``min(m, n)`` is the same quantity.
    """
    if int(m) != m or m < 1:
        raise DomainError("m must be a positive integer")
    n = table.domain_size
    k = min(m, n)
    if k == n:
        return len(table)
    _check_budget(n, k, budget)
    cap = min(2 ** k, len(table))
    best = 0
    for subset in itertools.combinations(range(n), k):
        best = max(best, _count_patterns(table.labels[:, subset]))
        if best == cap:
            break
    return best


def is_shattered(table: HypothesisTable, subset: Sequence[int]) -> bool:
    return _count_patterns(table.labels[:, list(subset)]) == 2 ** len(subset)


def vc_dimension(table: HypothesisTable, budget: Budget = DEFAULT_BUDGET) -> int:
    """Size of the largest shattered subset of the domain (0 if none)."""
    n = table.domain_size
    if n > budget.max_domain:
        raise BudgetError(f"domain size {n} exceeds budget {budget.max_domain}")
    # shattering k points needs 2^k distinct hypotheses
    k_max = min(n, int(math.floor(math.log2(len(table)))))
    d = 0
    for k in range(1, k_max + 1):
        _check_budget(n, k, budget)
        if any(is_shattered(table, s) for s in itertools.combinations(range(n), k)):
            d = k
        else:
            break  # subsets of shattered sets are shattered
    return d


def threshold_class(losses: LossTable, thresholds: Sequence[float]) -> HypothesisTable:
    """Binary class ``{z -> 1[L(h, z) > t]}``: one row per (h, t), deduplicated."""
    t = np.asarray(thresholds, dtype=float)
    if t.size == 0:
        raise DomainError("thresholds must be nonempty")
    rows = (losses.values[:, None, :] > t[None, :, None]).reshape(-1, losses.domain_size)
    return HypothesisTable(rows.astype(np.uint8))


def auto_thresholds(column: np.ndarray) -> np.ndarray:
    """Midpoints between consecutive distinct values."""
    u = np.unique(column)
    return (u[:-1] + u[1:]) / 2.0


def subgraph_table(losses: LossTable, threshold_grid="auto") -> tuple[HypothesisTable, list[tuple[int, float]]]:
    """Thresholded class ``(z_i, t) -> 1[L(h, z_i) > t]`` over the product domain.

    Returns the table and the list of ``(point, threshold)`` pairs indexing
    its columns.
    """
    pairs: list[tuple[int, float]] = []
    for i in range(losses.domain_size):
        if isinstance(threshold_grid, str):
            if threshold_grid != "auto":
                raise DomainError(f"unknown threshold grid {threshold_grid!r}")
            ts = auto_thresholds(losses.values[:, i])
        else:
            ts = np.asarray(threshold_grid, dtype=float)
        pairs.extend((i, float(t)) for t in ts)
    if not pairs:
        # every hypothesis has the same loss at every point: nothing to shatter
        return HypothesisTable(np.zeros((1, 1), dtype=np.uint8)), pairs
    pi = np.array([p[0] for p in pairs])
    pt = np.array([p[1] for p in pairs])
    return HypothesisTable((losses.values[:, pi] > pt[None, :]).astype(np.uint8)), pairs


def pseudo_dimension(losses: LossTable, threshold_grid="auto",
                     budget: Budget = DEFAULT_BUDGET) -> int:
    """VC-dimension of the thresholded loss class over (point, threshold) pairs."""
    table, pairs = subgraph_table(losses, threshold_grid)
    if not pairs:
        return 0
    return vc_dimension(table, budget)

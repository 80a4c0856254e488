"""Monte Carlo estimation of bound left-hand sides against their closed forms.

Seeding rule: trial ``i`` of an experiment with master seed ``s`` draws from
``numpy.random.default_rng(SeedSequence([s, i]))``. Trials are therefore
independent of execution order, and any partition of ``range(trials)`` merges
to the counts of a single run.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import bounds
from .bounds import BoundParams, CapacityDescriptor
from .errors import ConfigError, DenominatorZeroError, DomainError
from .scenarios import BINARY, UNBOUNDED, scenario_from_dict
from .stats import frequency_lower, frequency_upper

ONE_SIDED_TRUE_MINUS_EMP = "one_sided_true_minus_emp"
ONE_SIDED_EMP_MINUS_TRUE = "one_sided_emp_minus_true"
SYMMETRIZED = "symmetrized_two_sample"
FAST_RATE_REALIZABLE = "fast_rate_realizable"
FAST_RATE = "fast_rate"
INTERPOLATED = "interpolated"

BINARY_STATISTICS = (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE, SYMMETRIZED,
                     FAST_RATE_REALIZABLE, FAST_RATE, INTERPOLATED)
UNBOUNDED_STATISTICS = (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE)

PASS, VACUOUS, FAIL = "pass", "vacuous", "fail"

MIN_TRIALS = 100


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: dict
    statistic: str
    epsilon_grid: tuple
    m: int
    trials: int
    master_seed: int = 0
    alpha: float = 2.0
    tau: float = 0.0
    confidence: float = 0.99
    v: float | None = None
    nu: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "epsilon_grid", tuple(float(e) for e in self.epsilon_grid))
        self.validate()

    def validate(self):
        sc = self.build_scenario()
        if self.trials < MIN_TRIALS:
            raise ConfigError(f"trials must satisfy trials >= {MIN_TRIALS} (got {self.trials})")
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError("m must be a positive integer")
        if int(self.master_seed) != self.master_seed or self.master_seed < 0:
            raise ConfigError("master_seed must be a nonnegative integer")
        grid = self.epsilon_grid
        if not grid:
            raise ConfigError("epsilon_grid must be nonempty")
        if list(grid) != sorted(grid) or grid[0] <= 0:
            raise ConfigError("epsilon_grid must be sorted and positive")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError("confidence must lie in (0, 1)")
        if self.tau < 0:
            raise ConfigError("tau must be nonnegative")
        allowed = BINARY_STATISTICS if sc.kind == BINARY else UNBOUNDED_STATISTICS
        if self.statistic not in allowed:
            raise ConfigError(f"statistic {self.statistic!r} not available for {sc.kind}")
        if sc.kind == BINARY and self.statistic in (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE, SYMMETRIZED):
            if not 1.0 < self.alpha <= 2.0:
                raise ConfigError("binary relative deviation statistics need 1 < alpha <= 2")
        if sc.kind == UNBOUNDED:
            if not self.alpha > 1.0:
                raise ConfigError("unbounded statistics need alpha > 1")
            sc.moments(self.alpha)  # raises DomainError when infinite
            if grid[-1] > 1.0:
                raise ConfigError("unbounded-loss epsilon grid must lie in (0, 1]")
        if self.statistic == FAST_RATE and not (self.v and self.v > 0):
            raise ConfigError("fast_rate needs v > 0")
        if self.statistic == INTERPOLATED:
            if not (self.nu and self.nu > 0):
                raise ConfigError("interpolated needs nu > 0")
            if grid[-1] >= 1.0:
                raise ConfigError("interpolated epsilon grid must lie in (0, 1)")

    def build_scenario(self):
        return scenario_from_dict(self.scenario)

    def to_dict(self) -> dict:
        out = {"scenario": self.scenario, "statistic": self.statistic,
               "epsilon_grid": list(self.epsilon_grid), "m": self.m, "trials": self.trials,
               "master_seed": self.master_seed, "alpha": self.alpha, "tau": self.tau,
               "confidence": self.confidence}
        if self.v is not None:
            out["v"] = self.v
        if self.nu is not None:
            out["nu"] = self.nu
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = {"scenario", "statistic", "epsilon_grid", "m", "trials", "master_seed", "alpha",
                 "tau", "confidence", "v", "nu"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        missing = {"scenario", "statistic", "epsilon_grid", "m", "trials"} - set(d)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        return cls(**d)


# ---------------------------------------------------------------------------
# statistics


def _root(x, alpha):
    if (x <= 0).any():
        raise DenominatorZeroError("zero denominator in deviation ratio; use tau > 0")
    return x ** (1.0 / alpha)


def _max(values) -> float:
    return float(np.max(values))


def binary_statistic(statistic: str, true_risks, emp, emp2=None, *, alpha=2.0, tau=0.0,
                     m=None, v=None, nu=None) -> float:
    """Supremum over hypotheses of the requested deviation for 0/1 losses.

    ``emp`` holds empirical risks on S; ``emp2`` those on the ghost sample S'
    (symmetrized statistic only). The realizable statistic returns the largest
    true risk among hypotheses consistent with S (0 if none).
    """
    r = np.asarray(true_risks, dtype=float)
    e = np.asarray(emp, dtype=float)
    if statistic == ONE_SIDED_TRUE_MINUS_EMP:
        return _max((r - e) / _root(r + tau, alpha))
    if statistic == ONE_SIDED_EMP_MINUS_TRUE:
        return _max((e - r) / _root(e + tau, alpha))
    if statistic == SYMMETRIZED:
        e2 = np.asarray(emp2, dtype=float)
        return _max((e2 - e) / _root(0.5 * (e + e2 + 1.0 / m), alpha))
    if statistic == FAST_RATE:
        return _max(r - (1.0 + v) * e)
    if statistic == FAST_RATE_REALIZABLE:
        consistent = r[e == 0.0]
        return float(consistent.max()) if consistent.size else 0.0
    if statistic == INTERPOLATED:
        return _max((r - e) / (r + e + nu))
    raise DomainError(f"unknown statistic {statistic!r}")


def unbounded_statistic(statistic: str, true_loss, true_moment, emp_loss, emp_moment, *,
                        alpha: float, tau: float) -> float:
    """``sup_h (L - L_hat) / (L_alpha + tau)^{1/alpha}`` or the reverse with
    the empirical moment in the denominator."""
    L, La = np.asarray(true_loss), np.asarray(true_moment)
    E, Ea = np.asarray(emp_loss), np.asarray(emp_moment)
    if statistic == ONE_SIDED_TRUE_MINUS_EMP:
        return _max((L - E) / _root(La + tau, alpha))
    if statistic == ONE_SIDED_EMP_MINUS_TRUE:
        return _max((E - L) / _root(Ea + tau, alpha))
    raise DomainError(f"unknown statistic {statistic!r}")


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial]))


def sup_deviation(config: ExperimentConfig, scenario, rng: np.random.Generator) -> float:
    """Draw one sample (two for the symmetrized statistic) and evaluate the statistic."""
    m = config.m
    if scenario.kind == BINARY:
        counts = scenario.sample_counts(rng, m)
        emp = scenario.empirical_risks(counts)
        emp2 = None
        if config.statistic == SYMMETRIZED:
            emp2 = scenario.empirical_risks(scenario.sample_counts(rng, m))
        return binary_statistic(config.statistic, scenario.true_risks, emp, emp2,
                                alpha=config.alpha, tau=config.tau, m=m, v=config.v, nu=config.nu)
    sample = scenario.draw(rng, m)
    emp_loss, emp_moment = scenario.empirical(sample, config.alpha)
    return unbounded_statistic(config.statistic, scenario.true_risks, scenario.moments(config.alpha),
                               emp_loss, emp_moment, alpha=config.alpha, tau=config.tau)


# ---------------------------------------------------------------------------
# thresholds and right-hand sides


def deviation_threshold(config: ExperimentConfig, kind: str, epsilon: float) -> tuple[float, bool]:
    """Level the statistic is compared to, and whether the theorem's
    precondition on (epsilon, tau) holds there."""
    if kind == BINARY:
        return epsilon, True
    a, tau = config.alpha, config.tau
    if a <= 2.0:
        ok = bounds.gamma_precondition_holds(a, epsilon, tau)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return bounds.gamma(a, epsilon, tau) * epsilon, ok
    ok = 0.0 < tau <= epsilon ** 2
    return bounds.lambda_const(a, tau) * epsilon, ok


def theorem_rhs(config: ExperimentConfig, log_capacity: float, epsilon: float) -> bounds.Bound:
    cap = CapacityDescriptor.log_shatter(log_capacity)
    p = BoundParams(alpha=min(config.alpha, 2.0), epsilon=epsilon, tau=config.tau,
                    m=config.m, v=config.v or 1.0, nu=config.nu or 1.0)
    st = config.statistic
    if st == FAST_RATE:
        return bounds.fast_rate_rhs(p, cap, realizable=False)
    if st == FAST_RATE_REALIZABLE:
        return bounds.fast_rate_rhs(p, cap, realizable=True)
    if st == INTERPOLATED:
        return bounds.interpolated_rhs(p, cap)
    if st == SYMMETRIZED:
        return bounds.symmetrized_rhs(p, cap)
    # one-sided binary, or unbounded via the threshold class (alpha > 2 uses the alpha = 2 form)
    return bounds.relative_deviation_rhs(p, cap)


# ---------------------------------------------------------------------------
# reports


@dataclass
class ReportRow:
    epsilon: float
    threshold: float
    exceedance_count: int
    trials: int
    theorem_rhs: float
    vacuous: bool
    precondition_ok: bool
    confidence: float
    empirical_frequency: float = field(init=False)
    frequency_lower_ci: float = field(init=False)
    frequency_upper_ci: float = field(init=False)
    verdict: str = field(init=False)

    def __post_init__(self):
        if not 0 <= self.exceedance_count <= self.trials:
            raise DomainError("exceedance_count must lie in [0, trials]")
        k, n = self.exceedance_count, self.trials
        self.empirical_frequency = k / n
        self.frequency_lower_ci = frequency_lower(k, n, self.confidence)
        self.frequency_upper_ci = frequency_upper(k, n, self.confidence)
        if self.vacuous:
            self.verdict = VACUOUS
        elif self.frequency_lower_ci > self.theorem_rhs:
            self.verdict = FAIL
        else:
            self.verdict = PASS

    @property
    def certified(self) -> bool:
        """Upper confidence bound on the frequency lies below the rhs."""
        return not self.vacuous and self.frequency_upper_ci <= self.theorem_rhs

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "threshold": self.threshold,
                "exceedance_count": self.exceedance_count, "trials": self.trials,
                "empirical_frequency": self.empirical_frequency,
                "frequency_lower_ci": self.frequency_lower_ci,
                "frequency_upper_ci": self.frequency_upper_ci,
                "theorem_rhs": self.theorem_rhs, "vacuous": self.vacuous,
                "certified": self.certified, "precondition_ok": self.precondition_ok,
                "verdict": self.verdict}


CSV_COLUMNS = ("epsilon", "frequency", "ci_upper", "rhs", "verdict")


@dataclass
class TrialReport:
    config: ExperimentConfig
    rows: list
    trial_range: tuple

    @property
    def any_fail(self) -> bool:
        return any(r.verdict == FAIL for r in self.rows)

    def counts(self) -> list[int]:
        return [r.exceedance_count for r in self.rows]

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "trial_range": list(self.trial_range),
                "rows": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([repr(r.epsilon), repr(r.empirical_frequency), repr(r.frequency_upper_ci),
                        repr(r.theorem_rhs), r.verdict])
        return buf.getvalue()


def _build_rows(config, scenario, counts, n_trials):
    log_cap = scenario.log_capacity(config.m)
    rows = []
    for eps, k in zip(config.epsilon_grid, counts):
        thr, ok = deviation_threshold(config, scenario.kind, eps)
        rhs = theorem_rhs(config, log_cap, eps)
        rows.append(ReportRow(eps, thr, int(k), n_trials, rhs.value, rhs.vacuous, ok,
                              config.confidence))
    return rows


def trial_statistics(config: ExperimentConfig, start: int = 0, stop: int | None = None,
                     scenario=None) -> np.ndarray:
    scenario = scenario or config.build_scenario()
    stop = config.trials if stop is None else stop
    return np.array([sup_deviation(config, scenario, trial_rng(config.master_seed, i))
                     for i in range(start, stop)])


def run_experiment(config: ExperimentConfig, trial_range: tuple | None = None,
                   records=None) -> TrialReport:
    """Estimate exceedance frequencies over the epsilon grid.

    ``trial_range=(start, stop)`` runs a slice of the trials (for parallel
    execution, see :func:`merge_reports`). ``records``, if given, is a
    writable text stream receiving one JSON line per trial.
    """
    scenario = config.build_scenario()
    start, stop = trial_range or (0, config.trials)
    if not 0 <= start < stop <= config.trials:
        raise DomainError(f"trial range must lie in [0, {config.trials}]")
    stats = trial_statistics(config, start, stop, scenario)
    thresholds = np.array([deviation_threshold(config, scenario.kind, e)[0]
                           for e in config.epsilon_grid])
    exceed = stats[:, None] > thresholds[None, :]
    if records is not None:
        for i, (s, row) in enumerate(zip(stats, exceed), start):
            records.write(json.dumps({"trial": i, "statistic": float(s),
                                      "exceeds": row.astype(int).tolist()}) + "\n")
    counts = exceed.sum(axis=0)
    return TrialReport(config, _build_rows(config, scenario, counts, stop - start), (start, stop))


def merge_reports(reports: Sequence[TrialReport]) -> TrialReport:
    """Sum exceedance counts of reports covering disjoint trial ranges."""
    if not reports:
        raise DomainError("nothing to merge")
    config = reports[0].config
    if any(r.config != config for r in reports):
        raise DomainError("cannot merge reports from different configs")
    ranges = sorted(r.trial_range for r in reports)
    for (a0, a1), (b0, b1) in zip(ranges, ranges[1:]):
        if b0 < a1:
            raise DomainError("trial ranges overlap")
    counts = np.sum([r.counts() for r in reports], axis=0)
    n = sum(b - a for a, b in ranges)
    span = (ranges[0][0], ranges[-1][1]) if n == ranges[-1][1] - ranges[0][0] else tuple(ranges[0])
    return TrialReport(config, _build_rows(config, config.build_scenario(), counts, n), span)


# ---------------------------------------------------------------------------
# exact enumeration (small binary scenarios)


def exact_exceedance(config: ExperimentConfig, epsilon: float, max_samples: int = 10 ** 6) -> float:
    """Exact ``Pr[statistic > threshold]`` by enumerating all ordered samples.

    Only for binary scenarios with one-sample statistics and ``n^m`` small.
    """
    sc = config.build_scenario()
    if sc.kind != BINARY or config.statistic == SYMMETRIZED:
        raise DomainError("exact enumeration supports one-sample binary statistics only")
    n, m = sc.probabilities.size, config.m
    if n ** m > max_samples:
        raise DomainError(f"{n}^{m} samples exceed the enumeration budget")
    terms = []
    for sample in itertools.product(range(n), repeat=m):
        counts = np.bincount(sample, minlength=n)
        emp = sc.empirical_risks(counts)
        s = binary_statistic(config.statistic, sc.true_risks, emp, alpha=config.alpha,
                             tau=config.tau, m=m, v=config.v, nu=config.nu)
        if s > epsilon:
            terms.append(math.prod(sc.probabilities[i] for i in sample))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# symmetrization factor


@dataclass
class SymmetrizationRow:
    epsilon: float
    lhs_one_sample: float
    lhs_symmetrized: float
    one_sample_ci: tuple
    symmetrized_ci: tuple
    precondition_ok: bool
    status: str  # pass | inconclusive | violation

    @property
    def factor_ok(self) -> bool:
        return self.status != "violation"

    def to_dict(self):
        return {"epsilon": self.epsilon, "lhs_one_sample": self.lhs_one_sample,
                "lhs_symmetrized": self.lhs_symmetrized,
                "one_sample_ci": list(self.one_sample_ci),
                "symmetrized_ci": list(self.symmetrized_ci),
                "precondition_ok": self.precondition_ok, "status": self.status,
                "factor_ok": self.factor_ok}


@dataclass
class SymmetrizationReport:
    rows: list

    @property
    def factor_ok(self) -> bool:
        return all(r.factor_ok for r in self.rows)

    def to_dict(self):
        return {"factor_ok": self.factor_ok, "rows": [r.to_dict() for r in self.rows]}


def symmetrization_ratio_check(config: ExperimentConfig) -> SymmetrizationReport:
    """Compare the one-sample probability with 4x the two-sample one.

    ``config.statistic`` selects the one-sample side; the symmetrized run
    reuses every other setting. A row is a violation only when the one-sample
    lower confidence bound exceeds four times the symmetrized upper bound.
    """
    if config.statistic not in (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE):
        raise DomainError("symmetrization check needs a one-sided statistic")
    one = run_experiment(config)
    sym = run_experiment(replace(config, statistic=SYMMETRIZED))
    rows = []
    a = config.alpha
    for r1, r2 in zip(one.rows, sym.rows):
        lo1, hi1 = r1.frequency_lower_ci, r1.frequency_upper_ci
        lo2, hi2 = r2.frequency_lower_ci, r2.frequency_upper_ci
        if lo1 > 4.0 * hi2:
            status = "violation"
        elif hi1 <= 4.0 * lo2:
            status = "pass"
        else:
            status = "inconclusive"
        ok = config.m * r1.epsilon ** (a / (a - 1.0)) > 1.0
        rows.append(SymmetrizationRow(r1.epsilon, r1.empirical_frequency, r2.empirical_frequency,
                                      (lo1, hi1), (lo2, hi2), ok, status))
    return SymmetrizationReport(rows)

"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible under
``pytest -v`` or ``-s``).
"""

import math
import time
import warnings
from contextlib import contextmanager

import numpy as np
import pytest
from conftest import PARETO_25, SINGLE_HALF, THRESHOLDS_16, THRESHOLDS_16_REALIZABLE

from relbounds import analytic, binomial, bounds
from relbounds.binomial import BinomialSpec, certify_lemma, tail_geq_mean
from relbounds.capacity import HypothesisTable, LossTable, growth_function, pseudo_dimension, vc_dimension
from relbounds.errors import PreconditionWarning
from relbounds.models import ParetoLoss
from relbounds.montecarlo import (
    FAIL,
    FAST_RATE,
    FAST_RATE_REALIZABLE,
    ONE_SIDED_EMP_MINUS_TRUE,
    ONE_SIDED_TRUE_MINUS_EMP,
    PASS,
    ExperimentConfig,
    exact_exceedance,
    merge_reports,
    run_experiment,
    symmetrization_ratio_check,
)
from relbounds.stats import frequency_lower, frequency_upper


@contextmanager
def criterion(capsys, number, title):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\ncriterion {number}: FAIL  {title}")
        raise
    with capsys.disabled():
        print(f"\ncriterion {number}: PASS  {title}")


@pytest.fixture(scope="module")
def geq_scan():
    t0 = time.perf_counter()
    res = certify_lemma(binomial.GEQ_MEAN, m_max=200, p_resolution=1e-3)
    return res, time.perf_counter() - t0


def test_criterion_01_upper_tail_certificate(capsys, geq_scan):
    with criterion(capsys, 1, "Pr[X >= mp] > 1/4 on m in [2,200], p > 1/m, step 1e-3"):
        res, elapsed = geq_scan
        assert res.all_above_quarter and res.min_value > 0.25
        assert res.argmin[0] == 2
        assert res.argmin[1] == pytest.approx(0.501, abs=1e-12)
        assert tail_geq_mean(BinomialSpec(2, 0.5 + 1e-4)) - 0.25 < 1.1e-4
        assert elapsed < 10.0
        # every grid point with p > 1/m is covered
        expected = sum(sum(1 for j in range(1, 1000) if j * m > 1000) for m in range(2, 201))
        assert len(res.rows) == expected


def test_criterion_02_lower_tail_certificate(capsys, geq_scan):
    with criterion(capsys, 2, "Pr[X <= mp] > 1/4 on p < 1 - 1/m, mirror identity within 1e-12"):
        res = certify_lemma(binomial.LEQ_MEAN, m_max=200, p_resolution=1e-3)
        assert res.all_above_quarter and res.min_value > 0.25
        geq = {(m, round(p * 1000)): v for m, p, v in geq_scan[0].rows}
        leq = {(m, 1000 - round(p * 1000)): v for m, p, v in res.rows}
        assert geq.keys() == leq.keys()
        worst = max(abs(geq[key] - leq[key]) for key in geq)
        assert worst < 1e-12


def test_criterion_03_approximation(capsys):
    with criterion(capsys, 3, "eps sqrt(1 + ln(1/eps)/2) <= eps^(3/4) on [1e-6, 1]; beta = 0.76 fails"):
        rows = analytic.approx_grid(analytic.default_approx_epsilons(), 0.75)
        assert rows[0][0] == pytest.approx(1e-6) and rows[-1][0] == 1.0
        for eps, lhs, rhs in rows:
            assert lhs <= rhs
            assert (lhs == rhs) == (eps == 1.0)
        tight = analytic.approx_check(0.99, 0.76)
        assert not tight.holds and tight.lhs > tight.rhs
        assert tight.lhs == pytest.approx(0.99 * math.sqrt(1 + 0.5 * math.log(1 / 0.99)), rel=1e-15)
        assert tight.lhs == pytest.approx(0.992484, abs=1e-6)
        assert tight.rhs == pytest.approx(0.992390, abs=1e-6)


def test_criterion_04_constants(capsys):
    with criterion(capsys, 4, "general Gamma at alpha=2 matches closed form; Gamma, Psi, Lambda values"):
        grid = [(e, t) for e in np.linspace(0.01, 1.0, 100) for t in (0.0, 1e-4, 1e-2)]
        assert len(grid) == 300
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PreconditionWarning)
            worst = max(abs(bounds.gamma(2, e, t) - bounds.gamma2_closed_form(e, t)) for e, t in grid)
            assert worst < 1e-12
            assert bounds.gamma(2, 1, 0) == 1.5
        assert bounds.psi(4) == pytest.approx(2 ** 0.25, rel=1e-15)
        assert bounds.lambda_const(4, 0) == bounds.psi(4)


@pytest.mark.parametrize("a,alpha", [(5, 4), (4, 3), (3, 2.5)])
def test_criterion_05_sqrt_tail_dominance(capsys, a, alpha):
    with criterion(capsys, 5, f"int sqrt(tail) <= Psi(alpha) L_alpha^(1/alpha), Pareto a={a}, alpha={alpha}"):
        model = ParetoLoss(a)
        check = analytic.sqrt_tail_dominance(model.tail, model.moment(alpha), alpha, [1.0])
        assert check.holds and check.slack > 0
        # independent paths: quadrature against closed forms
        assert check.lhs == pytest.approx(a / (a - 2), rel=1e-6)
        quad_moment = analytic.tail_integral_moment(model.tail, alpha, [1.0])
        assert quad_moment == pytest.approx(a / (a - alpha), rel=1e-6)
        with capsys.disabled():
            print(f"  slack = {check.slack:.6f} (lhs {check.lhs:.6f}, rhs {check.rhs:.6f})", end="")


def _suite():
    binary = []
    for m in (100, 200):
        grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0]
        for stat in (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE):
            binary.append(("thm3 " + stat, dict(scenario=THRESHOLDS_16, statistic=stat, m=m, alpha=2.0,
                                                tau=0.01, epsilon_grid=grid)))
        binary.append(("cor6", dict(scenario=THRESHOLDS_16, statistic=FAST_RATE, m=m, v=1.0,
                                    epsilon_grid=[0.05, 0.1, 0.2, 0.3, 0.4])))
        binary.append(("cor7", dict(scenario=THRESHOLDS_16_REALIZABLE, statistic=FAST_RATE_REALIZABLE,
                                    m=m, epsilon_grid=[0.02, 0.05, 0.1, 0.15, 0.2])))
    heavy = []
    for stat in (ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE):
        heavy.append(("thm8 " + stat, dict(scenario=PARETO_25, statistic=stat, m=200, alpha=2.0, tau=1e-8,
                                           epsilon_grid=[0.1, 0.2, 0.4, 0.6, 0.8, 1.0])))
        # Lambda needs alpha > 2 and a finite alpha-moment, so 2 < alpha < 2.5
        heavy.append(("thm14 " + stat, dict(scenario=PARETO_25, statistic=stat, m=200, alpha=2.25,
                                            tau=1e-4, epsilon_grid=[0.1, 0.2, 0.4, 0.6, 0.8, 1.0])))
    return binary + heavy


def test_criterion_06_dominance_suite(capsys):
    with criterion(capsys, 6, "no 'fail' verdict over the standard scenarios (2000 trials, 99%)"):
        t0 = time.perf_counter()
        summary = []
        for name, kw in _suite():
            report = run_experiment(ExperimentConfig(trials=2000, confidence=0.99, master_seed=2024, **kw))
            verdicts = [r.verdict for r in report.rows]
            assert FAIL not in verdicts, (name, report.to_dict())
            assert all(r.precondition_ok for r in report.rows if r.verdict == PASS)
            summary.append((name, kw["m"], verdicts.count(PASS), len(verdicts)))
        elapsed = time.perf_counter() - t0
        assert elapsed < 300
        # every bound is exercised with at least one non-vacuous row
        for name in ("thm3", "thm8", "thm14", "cor6", "cor7"):
            assert any(n.startswith(name) and k > 0 for n, _, k, _ in summary), name
        with capsys.disabled():
            print(f"  {len(summary)} reports in {elapsed:.1f} s", end="")


def test_criterion_07_exact_oracle(capsys):
    with criterion(capsys, 7, "single hypothesis R=0.5, m=2: exact 0.25, Monte Carlo within 99% band"):
        cfg = ExperimentConfig(scenario=SINGLE_HALF, statistic=ONE_SIDED_TRUE_MINUS_EMP, epsilon_grid=[0.3],
                               m=2, trials=10 ** 4, alpha=2.0, tau=0.5, master_seed=0)
        assert exact_exceedance(cfg, 0.3) == 0.25
        row = run_experiment(cfg).rows[0]
        k, n = row.exceedance_count, row.trials
        assert frequency_lower(k, n, 0.99) <= 0.25 <= frequency_upper(k, n, 0.99)
        # and the count sits inside the 99% band of Binomial(1e4, 0.25)
        assert abs(k / n - 0.25) <= 2.5758 * math.sqrt(0.25 * 0.75 / n)


@pytest.mark.parametrize("stat", [ONE_SIDED_TRUE_MINUS_EMP, ONE_SIDED_EMP_MINUS_TRUE])
def test_criterion_08_symmetrization(capsys, stat):
    with criterion(capsys, 8, f"one-sample <= 4 x symmetrized ({stat})"):
        cfg = ExperimentConfig(scenario=THRESHOLDS_16, statistic=stat, epsilon_grid=[0.15, 0.2, 0.25, 0.3, 0.4],
                               m=100, trials=2000, alpha=2.0, tau=0.01, master_seed=11)
        rep = symmetrization_ratio_check(cfg)
        assert all(r.precondition_ok for r in rep.rows)
        assert all(r.status in ("pass", "inconclusive") for r in rep.rows)
        assert rep.factor_ok


def test_criterion_09_combinatorics(capsys):
    with criterion(capsys, 9, "growth/VC/Sauer/pseudo-dimension oracles"):
        th = HypothesisTable.thresholds(10)
        assert [growth_function(th, m) for m in range(1, 11)] == [m + 1 for m in range(1, 11)]
        assert vc_dimension(th) == 1
        full = HypothesisTable.full(4)
        assert vc_dimension(full) == 4
        assert [growth_function(full, m) for m in range(1, 5)] == [2, 4, 8, 16]
        rng = np.random.default_rng(9)
        classes = [th, full, HypothesisTable.thresholds(12, 5)]
        classes += [HypothesisTable(rng.integers(0, 2, size=(int(rng.integers(2, 30)), 8))) for _ in range(20)]
        for table in classes:
            d = vc_dimension(table)
            for m in range(max(d, 1), table.domain_size + 1):
                assert growth_function(table, m) <= bounds.sauer_growth_upper(max(d, 1), m)
        constant = LossTable([[c] * 4 for c in (0.0, 0.5, 1.0, 1.5, 2.0)])
        assert pseudo_dimension(constant) == 1


def test_criterion_10_determinism_and_merge(capsys):
    with criterion(capsys, 10, "byte-identical reports; partitioned runs merge to single-run counts"):
        cfg = ExperimentConfig(scenario=THRESHOLDS_16, statistic=ONE_SIDED_TRUE_MINUS_EMP,
                               epsilon_grid=[0.1, 0.2, 0.4], m=100, trials=600, tau=0.01, master_seed=99)
        a, b = run_experiment(cfg), run_experiment(cfg)
        assert a.to_json() == b.to_json() and a.to_csv() == b.to_csv()
        parts = [run_experiment(cfg, r) for r in ((400, 600), (0, 123), (123, 400))]
        merged = merge_reports(parts)
        assert merged.counts() == a.counts()
        assert merged.to_json() == a.to_json()

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relbounds.bounds import sauer_growth_upper
from relbounds.capacity import (
    Budget,
    HypothesisTable,
    LossTable,
    growth_function,
    is_shattered,
    pseudo_dimension,
    shatter_count,
    threshold_class,
    vc_dimension,
)
from relbounds.errors import BudgetError, DomainError


def tuple_growth(table, m):
    """Growth function by enumerating every m-tuple with repetition."""
    n = table.domain_size
    return max(len({tuple(row[list(s)]) for row in table.labels})
               for s in itertools.product(range(n), repeat=m))


def brute_vc(table):
    n = table.domain_size
    best = 0
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            if len({tuple(row[list(s)]) for row in table.labels}) == 2 ** k:
                best = k
    return best


tables = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=1, max_size=12)
).map(HypothesisTable)


class TestHypothesisTable:
    def test_dedup_keeps_order(self):
        t = HypothesisTable([[1, 0], [0, 0], [1, 0]])
        assert t.labels.tolist() == [[1, 0], [0, 0]]
        assert len(t) == 2 and t.domain_size == 2

    def test_read_only(self):
        t = HypothesisTable([[1, 0]])
        with pytest.raises(ValueError):
            t.labels[0, 0] = 0

    @pytest.mark.parametrize("rows", [[], [[1, 2]], [[1, 0], [1]]])
    def test_invalid(self, rows):
        with pytest.raises(DomainError):
            HypothesisTable(rows)

    def test_thresholds(self):
        t = HypothesisTable.thresholds(3)
        assert t.labels.tolist() == [[1, 1, 1], [0, 1, 1], [0, 0, 1], [0, 0, 0]]

    def test_csv_round_trip(self, tmp_path):
        t = HypothesisTable.thresholds(5)
        path = tmp_path / "h.csv"
        path.write_text("# thresholds\n" + t.to_csv())
        assert np.array_equal(HypothesisTable.from_csv(path).labels, t.labels)

    def test_loss_table(self, tmp_path):
        path = tmp_path / "l.csv"
        path.write_text("0.5,1,2\n# comment\n0,0,3.25\n")
        lt = LossTable.from_csv(path)
        assert lt.values.tolist() == [[0.5, 1, 2], [0, 0, 3.25]]
        with pytest.raises(DomainError):
            LossTable([[-1.0, 0.0]])
        with pytest.raises(DomainError):
            LossTable([[np.inf]])


class TestShatterCount:
    def test_examples(self):
        assert shatter_count(HypothesisTable.thresholds(3), [0, 1, 2]) == 4
        assert shatter_count(HypothesisTable.full(5), [0, 2, 4]) == 8
        assert shatter_count(HypothesisTable([[0] * 6]), [1, 1, 5]) == 1

    def test_repeats_do_not_count(self):
        t = HypothesisTable.full(3)
        assert shatter_count(t, [0, 0, 0, 1]) == 4

    @pytest.mark.parametrize("sample", [[], [3], [-1]])
    def test_invalid(self, sample):
        with pytest.raises(DomainError):
            shatter_count(HypothesisTable.full(3), sample)

    @settings(max_examples=80, deadline=None)
    @given(table=tables, data=st.data())
    def test_upper_bound(self, table, data):
        sample = data.draw(st.lists(st.integers(0, table.domain_size - 1), min_size=1, max_size=8))
        assert shatter_count(table, sample) <= min(2 ** len(sample), len(table))


class TestGrowthFunction:
    def test_examples(self):
        assert growth_function(HypothesisTable.thresholds(10), 5) == 6
        assert growth_function(HypothesisTable.full(4), 3) == 8
        assert growth_function(HypothesisTable([[0, 1, 1, 0, 1, 0, 0]]), 7) == 1

    @settings(max_examples=60, deadline=None)
    @given(table=tables, m=st.integers(1, 4))
    def test_matches_tuple_oracle(self, table, m):
        assert growth_function(table, m) == tuple_growth(table, m)

    @settings(max_examples=60, deadline=None)
    @given(table=tables)
    def test_monotone_and_constant(self, table):
        n = table.domain_size
        vals = [growth_function(table, m) for m in range(1, n + 4)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[n - 1:] == [len(table)] * 4

    @settings(max_examples=60, deadline=None)
    @given(table=tables)
    def test_sauer(self, table):
        d = vc_dimension(table)
        for m in range(max(d, 1), table.domain_size + 1):
            assert growth_function(table, m) <= sauer_growth_upper(max(d, 1), m) * (1 + 1e-12)

    def test_budget(self):
        with pytest.raises(BudgetError):
            growth_function(HypothesisTable.thresholds(30), 3)
        with pytest.raises(BudgetError):
            growth_function(HypothesisTable.thresholds(12), 5, Budget(max_subset=4))
        assert growth_function(HypothesisTable.thresholds(30), 3, Budget(max_domain=30)) == 4

    def test_m_domain(self):
        with pytest.raises(DomainError):
            growth_function(HypothesisTable.full(2), 0)


class TestVCDimension:
    def test_examples(self):
        assert vc_dimension(HypothesisTable.thresholds(10)) == 1
        assert vc_dimension(HypothesisTable.full(6)) == 6
        assert vc_dimension(HypothesisTable([[1, 0, 1]])) == 0

    def test_intervals(self):
        # indicator functions of intervals on a line have VC-dimension 2
        n = 8
        rows = [[int(a <= i < b) for i in range(n)] for a in range(n + 1) for b in range(a, n + 1)]
        assert vc_dimension(HypothesisTable(rows)) == 2

    @settings(max_examples=80, deadline=None)
    @given(table=tables)
    def test_matches_brute_force(self, table):
        assert vc_dimension(table) == brute_vc(table)

    @settings(max_examples=60, deadline=None)
    @given(table=tables, data=st.data())
    def test_permutation_invariant(self, table, data):
        perm = data.draw(st.permutations(range(table.domain_size)))
        assert vc_dimension(table.permuted(perm)) == vc_dimension(table)
        assert growth_function(table.permuted(perm), 2) == growth_function(table, 2)

    def test_is_shattered(self):
        t = HypothesisTable.thresholds(4)
        assert is_shattered(t, [2])
        assert not is_shattered(t, [0, 1])

    def test_budget(self):
        with pytest.raises(BudgetError):
            vc_dimension(HypothesisTable.thresholds(25))


class TestThresholdClass:
    def test_examples(self):
        assert threshold_class(LossTable([[0, 0, 0], [0, 0, 0]]), [0.5]).labels.tolist() == [[0, 0, 0]]
        assert threshold_class(LossTable([[1, 2, 3]]), [1.5, 2.5]).labels.tolist() == [[0, 1, 1], [0, 0, 1]]
        got = threshold_class(LossTable([[1, 2, 3], [1, 2, 3]]), [1.5, 2.5])
        assert got.labels.tolist() == [[0, 1, 1], [0, 0, 1]]

    def test_empty_thresholds(self):
        with pytest.raises(DomainError):
            threshold_class(LossTable([[1.0]]), [])

    def test_binary_losses_recover_class(self):
        h = HypothesisTable.thresholds(6)
        q = threshold_class(LossTable(h.labels.astype(float)), [0.5])
        assert np.array_equal(q.labels, h.labels)


class TestPseudoDimension:
    def test_examples(self):
        assert pseudo_dimension(LossTable([[0.3, 1.7, 2.0]])) == 0
        assert pseudo_dimension(LossTable([[c] * 3 for c in (0.0, 0.5, 1.0, 1.5, 2.0)])) == 1
        # four functions on two points realizing all patterns around (1, 1)
        four = LossTable([[0, 0], [0, 2], [2, 0], [2, 2]])
        assert pseudo_dimension(four) == 2

    def test_binary_equals_vc(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            labels = rng.integers(0, 2, size=(8, 5))
            assert pseudo_dimension(LossTable(labels.astype(float))) == vc_dimension(HypothesisTable(labels))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.sampled_from([0.0, 1.0, 2.0, 3.0]), min_size=3, max_size=3),
                    min_size=1, max_size=6))
    def test_auto_equals_finer_grid(self, rows):
        losses = LossTable(rows)
        fine = np.arange(-0.25, 3.5, 0.25)
        assert pseudo_dimension(losses) == pseudo_dimension(losses, fine, Budget(max_domain=60))

    def test_unknown_grid(self):
        with pytest.raises(DomainError):
            pseudo_dimension(LossTable([[0, 1]]), "fine")

"""Scenario data model, marginalization and consistency checkers."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lqhv as L
from lqhv.errors import InputError, SignalingError


def _family_2x2(tables, mode=L.RATIONAL):
    return L.DistributionFamily(L.Scenario((2, 2), (2, 2)), tables, mode)


def product_family(p_rows, q_rows):
    """P_{(s1,s2)} = p_{s1} (x) q_{s2} from per-setting rational vectors."""
    scenario = L.Scenario((len(p_rows), len(q_rows)), (len(p_rows[0]), len(q_rows[0])))
    tables = {}
    for s1, p in enumerate(p_rows, start=1):
        for s2, q in enumerate(q_rows, start=1):
            tables[(s1, s2)] = np.multiply.outer(
                np.array([Fraction(v) for v in p], dtype=object),
                np.array([Fraction(v) for v in q], dtype=object))
    return L.DistributionFamily(scenario, tables, L.RATIONAL)


class TestScenario:
    def test_axis_layout(self):
        sc = L.Scenario((2, 3), (2, 4))
        assert sc.joint_shape == (2, 2, 4, 4, 4)
        assert sc.axis_index(1, 1) == 0
        assert sc.axis_index(1, 2) == 1
        assert sc.axis_index(2, 1) == 2
        assert sc.axis_index(2, 3) == 4
        assert sc.joint_size == 2 * 2 * 4 * 4 * 4

    def test_setting_tuples_lexicographic(self):
        sc = L.Scenario((2, 2), (2, 2))
        assert sc.setting_tuples() == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_degenerate_sizes_allowed(self):
        sc = L.Scenario((1,), (3,))
        assert sc.n_parties == 1
        assert sc.joint_shape == (3,)

    def test_bad_shapes_rejected(self):
        with pytest.raises(InputError):
            L.Scenario((), ())
        with pytest.raises(InputError):
            L.Scenario((0, 2), (2, 2))
        with pytest.raises(InputError):
            L.Scenario((2,), (2, 2))

    def test_huge_joint_size_is_exact(self):
        sc = L.Scenario((64, 64), (2, 2))
        assert sc.joint_size == 2**128


class TestDistributionFamily:
    def test_requires_every_tuple(self):
        half = Fraction(1, 2)
        table = np.array([[half, 0], [0, half]], dtype=object)
        with pytest.raises(InputError, match="missing tables"):
            _family_2x2({(1, 1): table})

    def test_rejects_denormalized_tables(self):
        bad = np.array([[Fraction(1, 2), 0], [0, Fraction(1, 3)]], dtype=object)
        tables = {t: bad for t in L.Scenario((2, 2), (2, 2)).setting_tuples()}
        with pytest.raises(InputError, match="never renormalized"):
            _family_2x2(tables)

    def test_rejects_negative_entries(self):
        bad = np.array([[Fraction(3, 2), 0], [0, Fraction(-1, 2)]], dtype=object)
        tables = {t: bad for t in L.Scenario((2, 2), (2, 2)).setting_tuples()}
        with pytest.raises(InputError, match="negative"):
            _family_2x2(tables)

    def test_float_tolerance_on_sums(self):
        table = np.full((2, 2), 0.25) + 1e-12
        tables = {t: table for t in L.Scenario((2, 2), (2, 2)).setting_tuples()}
        fam = L.DistributionFamily(L.Scenario((2, 2), (2, 2)), tables, L.FLOAT)
        assert fam.mode == L.FLOAT


class TestMarginalize:
    def test_perfect_correlation_row_sums(self):
        half = Fraction(1, 2)
        table = np.array([[half, 0], [0, half]], dtype=object)
        fam = _family_2x2({t: table for t in L.CHSH_SCENARIO.setting_tuples()})
        marg = L.marginalize(fam, (1, 1), [1])
        assert list(marg) == [half, half]

    def test_product_table_recovers_factor(self):
        fam = product_family([[Fraction(1, 3), Fraction(2, 3)]],
                             [[Fraction(1, 4), Fraction(3, 4)]])
        assert list(L.marginalize(fam, (1, 1), [1])) == [Fraction(1, 3), Fraction(2, 3)]
        assert list(L.marginalize(fam, (1, 1), [2])) == [Fraction(1, 4), Fraction(3, 4)]

    def test_pr_box_site_marginals_uniform(self):
        # Enumerating the 4 entries of each xor-constrained table: each
        # outcome of either site keeps exactly half of the mass.
        pr = L.pr_box()
        for t in pr.scenario.setting_tuples():
            for site in (1, 2):
                assert list(L.marginalize(pr, t, [site])) == [Fraction(1, 2), Fraction(1, 2)]

    def test_full_set_is_identity(self):
        pr = L.pr_box()
        assert np.array_equal(L.marginalize(pr, (1, 2), [1, 2]), pr.table((1, 2)))

    def test_composition_consistency(self):
        sc = L.Scenario((2, 2, 2), (2, 2, 2))
        fam = L.random_scenario_family(sc, seed=7)
        via_pair = L.marginalize(fam, (1, 2, 1), [1, 3])
        direct = fam.table((1, 2, 1)).sum(axis=1)
        assert np.array_equal(via_pair, direct)
        # T -> T' chains agree with the direct jump
        onto_pair = L.marginalize(fam, (2, 1, 2), [2, 3])
        onto_single = onto_pair.sum(axis=1)
        assert np.array_equal(onto_single, L.marginalize(fam, (2, 1, 2), [2]))

    def test_unknown_tuple_rejected(self):
        pr = L.pr_box()
        with pytest.raises(InputError):
            L.marginalize(pr, (3, 1), [1])


class TestCheckNonsignaling:
    def test_pr_box_passes(self):
        assert L.check_nonsignaling(L.pr_box()) is None

    def test_product_family_passes(self):
        fam = product_family(
            [[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 5), Fraction(4, 5)]],
            [[Fraction(1, 2), Fraction(1, 2)], [Fraction(3, 7), Fraction(4, 7)]])
        assert L.check_nonsignaling(fam) is None

    def test_signaling_example_witnessed(self):
        witness = L.check_nonsignaling(L.signaling_example())
        assert witness is not None
        assert witness.site_subset == (2,)
        assert witness.max_discrepancy == Fraction(1)
        assert witness.tuple_a != witness.tuple_b

    def test_single_site_vacuous(self):
        sc = L.Scenario((3,), (2,))
        half = Fraction(1, 2)
        tables = {t: np.array([half, half], dtype=object) for t in sc.setting_tuples()}
        fam = L.DistributionFamily(sc, tables, L.RATIONAL)
        assert L.check_nonsignaling(fam) is None

    def test_single_tuple_vacuous(self):
        sc = L.Scenario((1, 1), (2, 2))
        table = np.full((2, 2), Fraction(1, 4), dtype=object)
        fam = L.DistributionFamily(sc, {(1, 1): table}, L.RATIONAL)
        assert L.check_nonsignaling(fam) is None

    def test_float_tolerance_respected(self):
        eps = 1e-12
        tables = {}
        for t in L.CHSH_SCENARIO.setting_tuples():
            table = np.full((2, 2), 0.25)
            if t == (2, 2):
                table = np.array([[0.25 + eps, 0.25 - eps], [0.25, 0.25]])
            tables[t] = table
        fam = L.DistributionFamily(L.CHSH_SCENARIO, tables, L.FLOAT)
        assert L.check_nonsignaling(fam, tol=1e-9) is None
        assert L.check_nonsignaling(fam, tol=1e-15) is not None

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 8), min_size=24, max_size=24).filter(any))
    def test_vertex_mixtures_always_pass(self, weights):
        fam = L.random_nonsignaling_family(0, weights=weights)
        assert L.check_nonsignaling(fam) is None


class TestExtractMarginalFamily:
    def test_pr_box_marginals(self):
        marg = L.extract_marginal_family(L.pr_box())
        half = Fraction(1, 2)
        for site in (1, 2):
            for s in (1, 2):
                assert list(marg.get((site,), (s,))) == [half, half]
        for t in L.CHSH_SCENARIO.setting_tuples():
            assert np.array_equal(marg.get((1, 2), t), L.pr_box().tables[t])

    def test_product_family_factors(self):
        p = [[Fraction(1, 3), Fraction(2, 3)], [Fraction(2, 5), Fraction(3, 5)]]
        q = [[Fraction(1, 2), Fraction(1, 2)]]
        fam = product_family(p, q)
        marg = L.extract_marginal_family(fam)
        assert list(marg.get((1,), (2,))) == [Fraction(2, 5), Fraction(3, 5)]
        assert list(marg.get((2,), (1,))) == [Fraction(1, 2), Fraction(1, 2)]

    def test_single_tuple_scenario(self):
        sc = L.Scenario((1, 1), (2, 2))
        table = np.array([[Fraction(1, 2), Fraction(1, 4)],
                          [Fraction(1, 8), Fraction(1, 8)]], dtype=object)
        fam = L.DistributionFamily(sc, {(1, 1): table}, L.RATIONAL)
        marg = L.extract_marginal_family(fam)
        assert list(marg.get((1,), (1,))) == [Fraction(3, 4), Fraction(1, 4)]
        assert np.array_equal(marg.get((1, 2), (1, 1)), table)

    def test_signaling_raises_with_witness(self):
        with pytest.raises(SignalingError) as err:
            L.extract_marginal_family(L.signaling_example())
        assert err.value.witness.site_subset == (2,)

    def test_float_mode_averages(self):
        eps = 1e-11
        tables = {}
        for t in L.CHSH_SCENARIO.setting_tuples():
            shift = eps if t[1] == 2 else -eps
            tables[t] = np.array([[0.25 + shift, 0.25 - shift], [0.25, 0.25]])
        fam = L.DistributionFamily(L.CHSH_SCENARIO, tables, L.FLOAT)
        marg = L.extract_marginal_family(fam, tol=1e-9)
        # site-1 marginal at s1=1 averages the two compatible tuples
        assert marg.get((1,), (1,))[0] == pytest.approx(0.5, abs=1e-15)


class TestConvertFamily:
    def test_round_trip_decimalwise(self):
        fam = L.isotropic_box(Fraction(9, 20))
        as_float = L.convert_family(fam, L.FLOAT)
        back = L.convert_family(as_float, L.RATIONAL)
        for t in fam.scenario.setting_tuples():
            assert np.array_equal(back.tables[t], fam.tables[t])

    def test_same_mode_is_identity(self):
        fam = L.pr_box()
        assert L.convert_family(fam, L.RATIONAL) is fam


class TestCompareScenariosEpr:
    def test_reflexive(self):
        fam = L.isotropic_box(Fraction(1, 4))
        report = L.compare_scenarios_epr(fam, fam)
        assert report.passed
        assert report.max_discrepancy == 0

    def test_same_factors_different_correlations_pass(self):
        half = Fraction(1, 2)
        correlated = np.array([[half, 0], [0, half]], dtype=object)
        anti = np.array([[0, half], [half, 0]], dtype=object)
        sc = L.Scenario((2, 2), (2, 2))
        fam_a = L.DistributionFamily(sc, {t: correlated for t in sc.setting_tuples()})
        fam_b = L.DistributionFamily(sc, {t: anti for t in sc.setting_tuples()})
        report = L.compare_scenarios_epr(fam_a, fam_b)
        assert report.passed

    def test_detects_marginal_shift(self):
        p_a = [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]]
        p_shift = [[Fraction(7, 10), Fraction(3, 10)], [Fraction(1, 2), Fraction(1, 2)]]
        q = [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]]
        report = L.compare_scenarios_epr(product_family(p_a, q), product_family(p_shift, q))
        assert not report.passed
        assert report.max_discrepancy == Fraction(1, 5)
        assert report.site_subset == (1,)
        assert report.settings == (1,)

    def test_structure_mismatch_rejected(self):
        with pytest.raises(InputError):
            L.compare_scenarios_epr(L.pr_box(), L.signaling_example())

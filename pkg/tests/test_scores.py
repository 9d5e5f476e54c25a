import math
from fractions import Fraction

import numpy as np
import pytest

from bnscore import (
    AlphaSpec,
    BicSpec,
    Dag,
    PriorSupportError,
    alpha_table,
    bdeu_term_decomposition,
    bdla_grid,
    counts,
    d_edf,
    effective_iss,
    effective_params,
    local_bic,
    local_log_bd,
    local_log_bdla,
    local_score,
    total_score,
)
from helpers import (
    expand_rows,
    fraction_bd,
    make_counts,
    prequential_log,
    random_dataset,
    random_equivalent_pair,
    shuffled,
)

# Exact reference scores for the bundled fixtures (rational gamma-ratio
# products; see fraction_bd): these are the 0.0326 / 0.0441 / 3.906e-7 /
# 3.721e-8 values at full precision.
EX1_BDEU_MINUS = float(Fraction(17, 40)) ** 4  # 0.425^4 = 0.032625390625
EX1_BDEU_PLUS = float(Fraction(11, 24) ** 4)
EX2_BDEU_MINUS = 0.025**4
EX2_BDEU_PLUS = float(Fraction(17, 1224) ** 4)


class TestAlphaTables:
    def test_bdeu_uniform_cells(self, c1_plus, bdeu1):
        t = alpha_table(bdeu1, c1_plus)
        assert np.allclose(t.alpha_ijk, 1.0 / 16.0)
        assert t.total == pytest.approx(1.0)

    def test_bds_observed_rows_only(self, c1_plus, bds1):
        t = alpha_table(bds1, c1_plus)
        observed = c1_plus.n_ij > 0
        assert np.allclose(t.alpha_ijk[observed], 1.0 / 8.0)
        assert np.all(t.alpha_ijk[~observed] == 0.0)
        assert t.total == pytest.approx(1.0)

    def test_jeffreys_and_k2(self, c1_minus):
        assert np.all(alpha_table(AlphaSpec.bdj(), c1_minus).alpha_ijk == 0.5)
        assert np.all(alpha_table(AlphaSpec.k2(), c1_minus).alpha_ijk == 1.0)

    def test_custom_shape_mismatch(self, c1_minus):
        spec = AlphaSpec.custom(np.ones((2, 2)))
        with pytest.raises(ValueError):
            alpha_table(spec, c1_minus)

    def test_bdla_has_no_single_table(self, c1_minus):
        with pytest.raises(ValueError):
            alpha_table(AlphaSpec.bdla(1.0, 1), c1_minus)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            AlphaSpec("nonsense")
        with pytest.raises(ValueError):
            AlphaSpec.bdeu(0.0)
        with pytest.raises(ValueError):
            AlphaSpec.bdeu(-2.0)
        with pytest.raises(ValueError):
            AlphaSpec("bdla", level=0)
        with pytest.raises(ValueError):
            AlphaSpec("custom")
        with pytest.raises(ValueError):
            AlphaSpec("bdeu", custom_table=np.ones((1, 2)))


class TestLocalLogBd:
    def test_fixture_scores(self, c1_minus, c1_plus, c2_minus, c2_plus, bdeu1, bds1):
        cases = [
            (c1_minus, bdeu1, EX1_BDEU_MINUS),
            (c1_plus, bdeu1, EX1_BDEU_PLUS),
            (c2_minus, bdeu1, EX2_BDEU_MINUS),
            (c2_plus, bdeu1, EX2_BDEU_PLUS),
            (c1_minus, bds1, EX1_BDEU_MINUS),
            (c1_plus, bds1, EX1_BDEU_MINUS),
            (c2_minus, bds1, EX2_BDEU_MINUS),
            (c2_plus, bds1, EX2_BDEU_MINUS),
        ]
        for c, spec, expected in cases:
            got = math.exp(local_log_bd(c, alpha_table(spec, c)))
            assert got == pytest.approx(expected, rel=1e-12)

    def test_against_exact_rational_oracle(self, c2_plus):
        # same numbers through pure Fraction arithmetic
        a = Fraction(1, 16)
        table = [[a, a]] * 8
        exact = fraction_bd(c2_plus.n_ijk, table)
        got = local_log_bd(c2_plus, alpha_table(AlphaSpec.bdeu(1.0), c2_plus))
        assert got == pytest.approx(math.log(float(exact)), rel=1e-13)

    def test_empty_counts_scores_zero(self):
        c = make_counts(np.zeros((4, 2), dtype=int))
        assert local_log_bd(c, alpha_table(AlphaSpec.bdeu(1.0), c)) == 0.0
        assert local_log_bd(c, alpha_table(AlphaSpec.bds(1.0), c)) == 0.0

    def test_zero_weight_row_with_counts_rejected(self):
        c = make_counts([[3, 0], [0, 3]])
        table = alpha_table(AlphaSpec.custom(np.array([[0.5, 0.5], [0.0, 0.0]])), c)
        with pytest.raises(PriorSupportError):
            local_log_bd(c, table)

    def test_zero_weight_cell_with_counts_rejected(self):
        c = make_counts([[3, 1]])
        table = alpha_table(AlphaSpec.custom(np.array([[0.5, 0.0]])), c)
        with pytest.raises(PriorSupportError):
            local_log_bd(c, table)

    def test_prequential_oracle_small(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            q, r = int(rng.integers(1, 6)), int(rng.integers(2, 4))
            c = make_counts(rng.integers(0, 5, size=(q, r)))
            t = alpha_table(AlphaSpec.bdeu(float(rng.uniform(0.25, 4.0))), c)
            rows = shuffled(expand_rows(c), seed=int(rng.integers(10_000)))
            assert local_log_bd(c, t) == pytest.approx(
                prequential_log(rows, t.alpha_ijk), abs=1e-10
            )


class TestBdla:
    def test_grid(self):
        assert bdla_grid(1) == (0.5, 1.0, 2.0)
        assert len(bdla_grid(5)) == 11
        with pytest.raises(ValueError):
            bdla_grid(0)

    def test_is_log_mean_of_components(self, c1_minus):
        spec = AlphaSpec.bdla(1.0, level=1)
        parts = [
            math.exp(local_log_bd(c1_minus, alpha_table(AlphaSpec.bdeu(s), c1_minus)))
            for s in (0.5, 1.0, 2.0)
        ]
        assert math.exp(local_log_bdla(c1_minus, spec)) == pytest.approx(
            sum(parts) / 3, rel=1e-12
        )

    def test_between_min_and_max_components(self, c2_plus):
        spec = AlphaSpec.bdla(1.0, level=5)
        value = local_log_bdla(c2_plus, spec)
        parts = [
            local_log_bd(c2_plus, alpha_table(AlphaSpec.bdeu(s), c2_plus))
            for s in bdla_grid(5)
        ]
        assert min(parts) <= value <= max(parts)

    def test_requires_bdla_spec(self, c1_minus):
        with pytest.raises(ValueError):
            local_log_bdla(c1_minus, AlphaSpec.bdeu(1.0))


class TestBic:
    def test_singular_loglik_zero(self, c1_minus):
        # every observed conditional is degenerate, so the ML term vanishes
        n = c1_minus.n
        assert local_bic(c1_minus) == pytest.approx(-0.5 * math.log(n) * 4)
        assert local_bic(c1_minus, penalty="effective") == pytest.approx(0.0)

    def test_literal_penalty_differs_across_fixture_pair(self, c1_minus, c1_plus):
        lit_minus = local_bic(c1_minus, "literal")
        lit_plus = local_bic(c1_plus, "literal")
        assert lit_plus - lit_minus == pytest.approx(-0.5 * math.log(12) * 4)
        # the effective-dimension variant sees both families as 0-parameter
        assert local_bic(c1_minus, "effective") == pytest.approx(
            local_bic(c1_plus, "effective")
        )

    def test_nonsingular_pair_effective_equal(self, c2_minus, c2_plus):
        assert local_bic(c2_minus, "effective") == pytest.approx(
            local_bic(c2_plus, "effective")
        )

    def test_uniform_no_parent(self):
        c = make_counts([[5, 5]])
        assert local_bic(c) == pytest.approx(
            -10 * math.log(2) - 0.5 * math.log(10) * 1
        )

    def test_empty_sample(self):
        c = make_counts(np.zeros((1, 2), dtype=int))
        assert local_bic(c) == 0.0

    def test_bad_penalty(self, c1_minus):
        with pytest.raises(ValueError):
            local_bic(c1_minus, "bogus")


class TestTotalScore:
    def test_decomposes_over_empty_dag(self, d1):
        spec = AlphaSpec.bdeu(1.0)
        total = total_score(d1, Dag.empty(4), spec)
        parts = sum(
            local_log_bd(counts(d1, i, []), alpha_table(spec, counts(d1, i, [])))
            for i in range(4)
        )
        assert total == pytest.approx(parts, rel=1e-12)

    def test_fixture_dag_contains_family_term(self, d1, g_minus, bdeu1):
        total = total_score(d1, g_minus, bdeu1)
        child_term = math.log(EX1_BDEU_MINUS)
        rest = sum(
            local_score(counts(d1, i, []), bdeu1) for i in range(1, 4)
        )
        assert total == pytest.approx(child_term + rest, rel=1e-12)

    def test_relabeling_invariance(self, d1, g_minus, bdeu1):
        perm = [2, 0, 3, 1]  # new index of each old variable
        relabeled_rows = d1.rows[:, np.argsort(perm)]
        from bnscore import Dataset, Variable

        variables = tuple(
            d1.variables[old] for old in np.argsort(perm)
        )
        relabeled = Dataset(variables, relabeled_rows)
        g2 = Dag(4, frozenset((perm[u], perm[v]) for u, v in g_minus.arcs))
        assert total_score(relabeled, g2, bdeu1) == pytest.approx(
            total_score(d1, g_minus, bdeu1), rel=1e-12
        )

    def test_node_count_mismatch(self, d1):
        with pytest.raises(ValueError):
            total_score(d1, Dag.empty(3), AlphaSpec.bdeu(1.0))

    def test_custom_rejected_at_total_level(self, d1):
        spec = AlphaSpec.custom(np.ones((1, 2)))
        with pytest.raises(ValueError):
            total_score(d1, Dag.empty(4), spec)


class TestEffectiveQuantities:
    def test_fixture_dims(self, c1_minus, c1_plus, c2_minus, c2_plus):
        assert effective_params(c1_minus) == 0
        assert effective_params(c1_plus) == 0
        assert effective_params(c2_minus) == 4
        assert effective_params(c2_plus) == 4
        assert d_edf(c1_minus, c1_plus) == 0
        assert d_edf(c2_minus, c2_plus) == 0

    def test_zero_counts(self):
        c = make_counts(np.zeros((4, 3), dtype=int))
        assert effective_params(c) == 0

    def test_effective_iss(self, c1_plus, c1_minus):
        assert effective_iss(c1_plus, 1.0) == pytest.approx(0.5)
        assert effective_iss(c1_minus, 1.0) == pytest.approx(1.0)
        empty = make_counts(np.zeros((4, 2), dtype=int))
        assert effective_iss(empty, 1.0) == 0.0
        with pytest.raises(ValueError):
            effective_iss(c1_minus, 0.0)


class TestTermDecomposition:
    def test_identity_on_fixtures(self, c1_minus, c1_plus, c2_minus, c2_plus):
        for c in (c1_minus, c1_plus, c2_minus, c2_plus):
            for alpha in (0.25, 1.0, 7.5):
                dec = bdeu_term_decomposition(c, alpha)
                direct = local_log_bd(c, alpha_table(AlphaSpec.bdeu(alpha), c))
                assert dec.prior_term + dec.likelihood_term == pytest.approx(
                    direct, rel=1e-12, abs=1e-12
                )

    def test_small_alpha_prior_approximation(self):
        # r=2, q=4; frozen 50-digit oracle values for the exact prior term
        c = make_counts(np.zeros((4, 2), dtype=int))
        dec = bdeu_term_decomposition(c, 8e-6)  # alpha_ijk = 1e-6
        assert dec.prior_term == pytest.approx(-58.0346309541, abs=1e-8)
        assert dec.approx_prior_small == pytest.approx(-55.2620422319, abs=1e-8)
        # the gap decays like ln(r)/|ln a| and is ~4.8% here ...
        rel = abs(dec.prior_term - dec.approx_prior_small) / abs(dec.prior_term)
        assert rel == pytest.approx(0.0477747, abs=1e-5)
        # ... reaching 1% only around a_ijk = 1e-30
        dec30 = bdeu_term_decomposition(c, 8e-30)
        rel30 = abs(dec30.prior_term - dec30.approx_prior_small) / abs(dec30.prior_term)
        assert rel30 <= 1e-2

    def test_large_alpha_prior_approximation(self):
        c = make_counts(np.zeros((4, 2), dtype=int))
        dec = bdeu_term_decomposition(c, 8e4)  # alpha_ijk = 1e4
        assert dec.prior_term == pytest.approx(55465.133027, abs=1e-4)
        assert dec.approx_prior_large == pytest.approx(55466.5193714, abs=1e-4)
        rel = abs(dec.prior_term - dec.approx_prior_large) / abs(dec.prior_term)
        assert rel <= 1e-2

    def test_sparse_likelihood_approximation(self):
        # with no observations the likelihood term is minus the prior term
        c = make_counts(np.zeros((4, 2), dtype=int))
        dec = bdeu_term_decomposition(c, 8e-30)
        assert dec.likelihood_term == pytest.approx(-dec.prior_term, rel=1e-12)
        rel = abs(dec.likelihood_term - dec.approx_likelihood_sparse) / abs(
            dec.likelihood_term
        )
        assert rel <= 1e-2


class TestScoreEquivalence:
    def test_bdeu_and_bic_equivalent_k2_and_bdj_not(self):
        rng = np.random.default_rng(20240820)
        k2_differs = bdj_differs = 0
        for _ in range(30):
            n_vars = int(rng.integers(3, 5))
            data = random_dataset(rng, n_vars, max_levels=3, n_rows=int(rng.integers(5, 40)))
            g1, g2 = random_equivalent_pair(rng, n_vars)
            for spec in (AlphaSpec.bdeu(1.0), BicSpec()):
                s1 = total_score(data, g1, spec)
                s2 = total_score(data, g2, spec)
                assert abs(s1 - s2) <= 1e-9, (spec, g1.arcs, g2.arcs)
            if abs(
                total_score(data, g1, AlphaSpec.k2())
                - total_score(data, g2, AlphaSpec.k2())
            ) > 1e-6:
                k2_differs += 1
            if abs(
                total_score(data, g1, AlphaSpec.bdj())
                - total_score(data, g2, AlphaSpec.bdj())
            ) > 1e-6:
                bdj_differs += 1
        assert k2_differs >= 1
        assert bdj_differs >= 1

    def test_bds_equals_bdeu_when_all_configs_observed(self):
        # dense sample: every parent configuration observed
        rng = np.random.default_rng(3)
        base = np.array(np.meshgrid([0, 1], [0, 1], [0, 1])).T.reshape(-1, 3)
        rows = np.vstack([base, rng.integers(0, 2, size=(30, 3))])
        from bnscore import Dataset, Variable

        data = Dataset(
            tuple(Variable(n, ("0", "1")) for n in "ABC"),
            rows,
        )
        g = Dag(3, frozenset({(0, 2), (1, 2)}))
        assert total_score(data, g, AlphaSpec.bds(1.0)) == pytest.approx(
            total_score(data, g, AlphaSpec.bdeu(1.0)), rel=1e-12
        )


class TestSmallAlphaLimit:
    def test_ratio_trend_toward_effective_params(self, c2_minus):
        # log score / log(alpha) approaches d_EP = 4 from above, slowly
        ratios = []
        for alpha in (1e-4, 1e-6, 1e-8):
            s = local_log_bd(c2_minus, alpha_table(AlphaSpec.bdeu(alpha), c2_minus))
            ratios.append(s / math.log(alpha))
        assert ratios[0] > ratios[1] > ratios[2] > 4.0
        assert ratios[2] == pytest.approx(4.7526, abs=1e-3)

    def test_two_percent_reached_in_the_deep_limit(self):
        # the minimal-constant d_EP = 4 fixture; the offset term decaying like
        # 1/|log alpha| first drops under 2% near alpha = 1e-62
        c = make_counts([[1, 1]] * 4)
        s = local_log_bd(c, alpha_table(AlphaSpec.bdeu(1e-62), c))
        assert abs(s / math.log(1e-62) - 4.0) <= 0.08
        s8 = local_log_bd(c, alpha_table(AlphaSpec.bdeu(1e-8), c))
        assert s8 / math.log(1e-8) == pytest.approx(4.60206, abs=1e-4)

    def test_bayes_factor_sign_at_dedf_plus_minus_one(self):
        # d_EDF = -1: the added parent splits the child perfectly
        c_minus = make_counts([[2, 2]])
        c_plus = make_counts([[2, 0], [0, 2]])
        assert d_edf(c_minus, c_plus) == -1
        alpha = 1e-8
        log_bf_plus_over_minus = local_log_bd(
            c_plus, alpha_table(AlphaSpec.bdeu(alpha), c_plus)
        ) - local_log_bd(c_minus, alpha_table(AlphaSpec.bdeu(alpha), c_minus))
        assert log_bf_plus_over_minus > 15

        # d_EDF = +1: a third (never observed) child level
        c_minus = make_counts([[2, 2, 0]])
        c_plus = make_counts([[1, 1, 0], [1, 1, 0]])
        assert d_edf(c_minus, c_plus) == 1
        log_bf_plus_over_minus = local_log_bd(
            c_plus, alpha_table(AlphaSpec.bdeu(alpha), c_plus)
        ) - local_log_bd(c_minus, alpha_table(AlphaSpec.bdeu(alpha), c_minus))
        assert log_bf_plus_over_minus < -15

import numpy as np
import pytest

from ocsched.decompose import UncoverableError, decompose, lp_refine_oracle, refine
from ocsched.matrix import (
    DemandMatrix,
    PermutationMatching,
    WeightedDecomposition,
    covers,
    degree,
    support,
)


def dm(rows):
    return DemandMatrix(np.array(rows, dtype=float))


def toy_circulant():
    """3x3 circulant splitting into weights 0.61 / 0.3 / 0.1."""
    p1 = PermutationMatching.identity(3)
    p2 = PermutationMatching.cycle(3, 1)
    p3 = PermutationMatching.cycle(3, 2)
    vals = 0.61 * p1.as_matrix() + 0.3 * p2.as_matrix() + 0.1 * p3.as_matrix()
    return DemandMatrix(vals)


def random_matrix(rng, n, density=0.5):
    vals = rng.random((n, n)) * (rng.random((n, n)) < density)
    if not vals.any():
        vals[rng.integers(n), rng.integers(n)] = rng.random() + 0.1
    return DemandMatrix(vals)


class TestDecompose:
    def test_scaled_identity(self):
        res = decompose(dm(0.7 * np.eye(3)))
        assert res.rounds == 1
        assert len(res.decomposition) == 1
        assert res.refined_weight_total == pytest.approx(0.7)
        assert res.decomposition.matchings[0].targets == (0, 1, 2)

    def test_two_disjoint_matchings(self):
        D = dm([[0.6, 0.4], [0.4, 0.6]])
        res = decompose(D)
        assert res.rounds == 2
        assert res.refined_weight_total == pytest.approx(1.0)
        assert covers(res.decomposition, D, 1e-9)

    def test_toy_weights(self):
        res = decompose(toy_circulant())
        assert res.rounds == 3
        assert sorted(res.decomposition.weights, reverse=True) == pytest.approx(
            [0.61, 0.3, 0.1]
        )

    def test_all_zero_errors(self):
        with pytest.raises(ValueError):
            decompose(dm(np.zeros((3, 3))))

    def test_rounds_equal_degree_and_coverage(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            n = int(rng.integers(1, 11))
            D = random_matrix(rng, n, density=float(rng.uniform(0.1, 1.0)))
            res = decompose(D)
            assert res.rounds == degree(support(D))
            assert covers(res.decomposition, D, 1e-9)
            assert res.refined_weight_total >= res.initial_weight_total - 1e-12

    def test_refined_weight_at_least_max_line_sum(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            D = random_matrix(rng, int(rng.integers(2, 9)))
            res = decompose(D)
            max_line = max(D.values.sum(axis=0).max(), D.values.sum(axis=1).max())
            assert res.refined_weight_total >= max_line - 1e-9

    def test_variant_alpha_rule_still_covers(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            D = random_matrix(rng, 6)
            res = decompose(D, alpha_min_over_new_support_only=True)
            assert res.rounds == degree(support(D))
            assert covers(res.decomposition, D, 1e-9)


class TestRefine:
    def test_already_covering_unchanged(self):
        D = dm([[0.5, 0], [0, 0.5]])
        dec = WeightedDecomposition((PermutationMatching.identity(2),), (0.5,))
        assert refine(D, dec).weights == (0.5,)

    def test_single_cell(self):
        D = dm([[1.0]])
        dec = WeightedDecomposition((PermutationMatching((0,)),), (0.4,))
        assert refine(D, dec).weights[0] == pytest.approx(1.0)

    def test_symmetric_two_matchings(self):
        D = dm([[0.5, 0.5], [0.5, 0.5]])
        dec = WeightedDecomposition(
            (PermutationMatching((0, 1)), PermutationMatching((1, 0))), (0.2, 0.2)
        )
        out = refine(D, dec)
        assert out.weights == pytest.approx((0.5, 0.5))
        assert out.total_weight == pytest.approx(1.0)

    def test_uncoverable_raises(self):
        D = dm([[0.5, 0.5], [0, 0]])
        dec = WeightedDecomposition((PermutationMatching.identity(2),), (0.1,))
        with pytest.raises(UncoverableError):
            refine(D, dec)

    def test_generation_order_is_respected(self):
        # first matching absorbs the shared residual; second gets nothing extra
        D = dm([[1.0, 0], [0, 1.0]])
        dec = WeightedDecomposition(
            (PermutationMatching.identity(2), PermutationMatching.identity(2)), (0.0, 0.0)
        )
        out = refine(D, dec)
        assert out.weights == pytest.approx((1.0, 0.0))


class TestLpOracle:
    def test_identity_single_matching(self):
        D = dm([[0.3, 0], [0, 0.9]])
        w = lp_refine_oracle(D, [PermutationMatching.identity(2)])
        assert w[0] == pytest.approx(0.9, abs=1e-9)

    def test_symmetric_case(self):
        D = dm([[0.5, 0.5], [0.5, 0.5]])
        w = lp_refine_oracle(
            D, [PermutationMatching((0, 1)), PermutationMatching((1, 0))]
        )
        assert sum(w) == pytest.approx(1.0, abs=1e-9)

    def test_infeasible_raises(self):
        D = dm([[0.5, 0.5], [0, 0]])
        with pytest.raises(UncoverableError):
            lp_refine_oracle(D, [PermutationMatching.identity(2)])

    def test_oracle_result_covers(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            D = random_matrix(rng, int(rng.integers(2, 5)))
            dec = decompose(D).decomposition
            w = lp_refine_oracle(D, dec.matchings)
            lp_dec = dec.with_weights(w)
            assert covers(lp_dec, D, 1e-7)
            assert sum(w) <= dec.total_weight + 1e-9

"""Decompose a demand matrix into exactly degree(D) weighted matchings.

Each round matches every critical line (a row or column whose remaining
uncovered support count equals the current degree) through a still-uncovered
support cell, which guarantees the degree drops by exactly one per round.
Weights start as the per-round minimum of the matched residual demand; a
greedy refine pass then raises them until the weighted sum covers D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ocsched.assignment import CoverageConstrainedProblem, mwm_node_coverage
from ocsched.matrix import (
    DemandMatrix,
    PermutationMatching,
    WeightedDecomposition,
    degree,
    support,
)


class UncoverableError(ValueError):
    """The given matchings do not cover the support of D."""


@dataclass(frozen=True)
class DecomposeResult:
    decomposition: WeightedDecomposition
    rounds: int
    initial_weight_total: float
    refined_weight_total: float


def _critical_lines(S: np.ndarray, deg: int) -> tuple[frozenset[int], frozenset[int]]:
    rows = frozenset(np.flatnonzero(S.sum(axis=1) == deg).tolist())
    cols = frozenset(np.flatnonzero(S.sum(axis=0) == deg).tolist())
    return rows, cols


def decompose(D: DemandMatrix, alpha_min_over_new_support_only: bool = False) -> DecomposeResult:
    """Cover D with exactly degree(support(D)) weighted matchings.

    ``alpha_min_over_new_support_only`` switches the per-round weight to the
    minimum residual over the newly covered support cells only, instead of
    over all matched cells (variant reading; default off).
    """
    if D.is_zero():
        raise ValueError("cannot decompose an all-zero matrix")
    n = D.n
    d_rem = D.values.copy()
    s_rem = support(D)
    k = degree(s_rem)

    matchings: list[PermutationMatching] = []
    alphas: list[float] = []
    rounds = 0
    while s_rem.any():
        rounds += 1
        if rounds > k:
            raise RuntimeError(
                f"decomposition exceeded {k} rounds; degree descent was violated"
            )
        deg = degree(s_rem)
        crit_rows, crit_cols = _critical_lines(s_rem, deg)
        eligible = s_rem | (d_rem > 0)
        problem = CoverageConstrainedProblem(
            weights=d_rem,
            eligible=eligible,
            coverage_edges=s_rem,
            must_cover_rows=crit_rows,
            must_cover_cols=crit_cols,
        )
        matching = mwm_node_coverage(problem)

        pairs = matching.pairs()
        if alpha_min_over_new_support_only:
            cells = [(i, j) for i, j in pairs if s_rem[i, j]]
        else:
            cells = pairs
        alpha = float(min(d_rem[i, j] for i, j in cells)) if cells else 0.0

        for i, j in pairs:
            d_rem[i, j] = max(0.0, d_rem[i, j] - alpha)
            s_rem[i, j] = False

        matchings.append(matching)
        alphas.append(alpha)

        if degree(s_rem) != deg - 1:
            raise RuntimeError("degree did not descend by exactly 1 this round")

    initial = WeightedDecomposition(tuple(matchings), tuple(alphas))
    refined = refine(D, initial)
    return DecomposeResult(
        decomposition=refined,
        rounds=rounds,
        initial_weight_total=initial.total_weight,
        refined_weight_total=refined.total_weight,
    )


def refine(D: DemandMatrix, dec: WeightedDecomposition) -> WeightedDecomposition:
    """Greedily raise weights, in generation order, until the sum covers D.

    The residual max(0, D - served) is reduced matching by matching: each
    matching absorbs the largest residual on its own cells.
    """
    touched = np.zeros((D.n, D.n), dtype=bool)
    for matching in dec.matchings:
        for i, j in matching.pairs():
            touched[i, j] = True
    if np.any((D.values > 0) & ~touched):
        raise UncoverableError("matchings do not cover the support of D")

    residual = np.maximum(0.0, D.values - dec.served(D.n))
    new_weights = list(dec.weights)
    for idx, matching in enumerate(dec.matchings):
        pairs = matching.pairs()
        if not pairs:
            continue
        d = max(residual[i, j] for i, j in pairs)
        if d <= 0:
            continue
        new_weights[idx] += d
        for i, j in pairs:
            residual[i, j] = max(0.0, residual[i, j] - d)
    return dec.with_weights(new_weights)


def lp_refine_oracle(D: DemandMatrix, matchings) -> list[float]:
    """Test-only LP oracle: minimal total weight covering D with the given matchings.

    Minimizes sum(w) subject to sum(w_i * P_i) >= D, w >= 0.  Intended for
    tiny instances only; used to benchmark the greedy refine.
    """
    from scipy.optimize import linprog

    matchings = list(matchings)
    k = len(matchings)
    n = D.n
    probe = WeightedDecomposition(tuple(matchings), tuple([1.0] * k))
    if np.any((D.values > 0) & (probe.served(n) <= 0)):
        raise UncoverableError("matchings do not cover the support of D")

    # One >= constraint per cell with positive demand; linprog wants A_ub x <= b_ub.
    rows_a = []
    rows_b = []
    mats = [m.as_matrix() for m in matchings]
    for i in range(n):
        for j in range(n):
            if D.values[i, j] > 0:
                rows_a.append([-mats[t][i, j] for t in range(k)])
                rows_b.append(-D.values[i, j])
    res = linprog(
        c=np.ones(k),
        A_ub=np.array(rows_a),
        b_ub=np.array(rows_b),
        bounds=[(0, None)] * k,
        method="highs",
    )
    if not res.success:
        raise UncoverableError(f"LP failed: {res.message}")
    return [float(x) for x in res.x]

"""Maximum-weight bipartite matching with mandatory node coverage.

The decomposition loop needs, each round, a matching that (a) touches every
critical row and column through a designated coverage edge, and (b) subject
to that, serves as much residual demand as possible.  This is reduced to a
plain linear assignment problem by boosting the weight of coverage edges
with a big-M term that dominates any achievable raw weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ocsched.matrix import UNMATCHED, PermutationMatching


class InfeasibleCoverageError(RuntimeError):
    """A critical node could not be matched through a coverage edge."""


def solve_lap(
    weights: np.ndarray, maximize: bool = True, eligible: np.ndarray | None = None
) -> tuple[PermutationMatching, float]:
    """Solve a linear assignment problem over an eligible edge set.

    In maximize mode, returns a partial matching of maximum total weight
    over the eligible edges (weights must be nonnegative; rows with no
    eligible edge are simply left unmatched).  In minimize mode, returns a
    full minimum-cost assignment (all edges must then be eligible).
    Deterministic: identical inputs give identical matchings.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {w.shape}")
    n = w.shape[0]
    if eligible is None:
        eligible = np.ones_like(w, dtype=bool)
    else:
        eligible = np.asarray(eligible, dtype=bool)
        if eligible.shape != w.shape:
            raise ValueError("eligible mask shape mismatch")
    if not np.all(np.isfinite(w[eligible])):
        raise ValueError("eligible weights must be finite")

    if not maximize:
        if not eligible.all():
            raise ValueError("minimize mode requires a complete edge set")
        rows, cols = linear_sum_assignment(w)
        targets = [UNMATCHED] * n
        for r, c in zip(rows, cols):
            targets[r] = int(c)
        return PermutationMatching(tuple(targets)), float(w[rows, cols].sum())

    if np.any(w[eligible] < 0):
        raise ValueError("maximize mode requires nonnegative weights")
    # Ineligible edges contribute 0 to a complete assignment, so the optimum
    # over complete assignments equals the max-weight partial matching once
    # ineligible pairs are dropped.
    padded = np.where(eligible, w, 0.0)
    rows, cols = linear_sum_assignment(padded, maximize=True)
    targets = [UNMATCHED] * n
    value = 0.0
    for r, c in zip(rows, cols):
        if eligible[r, c]:
            targets[r] = int(c)
            value += w[r, c]
    return PermutationMatching(tuple(targets)), float(value)


@dataclass(frozen=True)
class CoverageConstrainedProblem:
    """A max-weight matching instance with mandatory node coverage.

    ``must_cover_rows``/``must_cover_cols`` are the critical nodes; each must
    be matched through an edge marked True in ``coverage_edges``.  Coverage
    edges must be a subset of ``eligible``, and every critical node needs at
    least one coverage edge for the instance to be feasible.
    """

    weights: np.ndarray
    eligible: np.ndarray
    coverage_edges: np.ndarray
    must_cover_rows: frozenset[int] = field(default_factory=frozenset)
    must_cover_cols: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        elig = np.asarray(self.eligible, dtype=bool)
        cov = np.asarray(self.coverage_edges, dtype=bool)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weights must be square")
        if elig.shape != w.shape or cov.shape != w.shape:
            raise ValueError("mask shape mismatch")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if np.any(cov & ~elig):
            raise ValueError("coverage edges must be a subset of eligible edges")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "eligible", elig)
        object.__setattr__(self, "coverage_edges", cov)
        object.__setattr__(self, "must_cover_rows", frozenset(self.must_cover_rows))
        object.__setattr__(self, "must_cover_cols", frozenset(self.must_cover_cols))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def mwm_node_coverage(p: CoverageConstrainedProblem) -> PermutationMatching:
    """Max-weight matching that covers every critical node via a coverage edge.

    Coverage edges incident to critical nodes get a big-M bonus per covered
    critical endpoint, with M > 2n * max(weight), so covering one more
    critical endpoint always outscores any raw-weight difference.  The
    result is post-checked; a violation means the instance was infeasible.
    """
    n = p.n
    max_w = float(p.weights.max()) if p.weights.size else 0.0
    big_m = 2.0 * n * max_w + 1.0

    bonus = np.zeros((n, n), dtype=np.float64)
    if p.must_cover_rows:
        rows = np.fromiter(p.must_cover_rows, dtype=int)
        bonus[rows, :] += 1.0
    if p.must_cover_cols:
        cols = np.fromiter(p.must_cover_cols, dtype=int)
        bonus[:, cols] += 1.0
    boosted = p.weights + big_m * (bonus * p.coverage_edges)

    matching, _ = solve_lap(boosted, maximize=True, eligible=p.eligible)

    covered_rows = set()
    covered_cols = set()
    for i, j in matching.pairs():
        if p.coverage_edges[i, j]:
            covered_rows.add(i)
            covered_cols.add(j)
    missing_rows = p.must_cover_rows - covered_rows
    missing_cols = p.must_cover_cols - covered_cols
    if missing_rows or missing_cols:
        raise InfeasibleCoverageError(
            f"critical nodes left uncovered: rows {sorted(missing_rows)}, "
            f"cols {sorted(missing_cols)}"
        )
    return matching

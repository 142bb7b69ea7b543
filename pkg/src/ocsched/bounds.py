"""Analytic makespan lower bounds and the random-permutation degree model.

Every row and column of the demand yields per-line bounds; the certified
lower bound for the whole matrix is the maximum over all 2n lines.  Lines
are indexed 0..2n-1 with rows first, then columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ocsched.matrix import DemandMatrix, degree


@dataclass(frozen=True)
class LineStats:
    """Nonzero count, total weight and sorted values of one row or column."""

    index: int  # 0..n-1 rows, n..2n-1 columns
    k: int
    w: float
    sorted_values: tuple[float, ...]  # non-increasing

    @classmethod
    def from_values(cls, index: int, values: np.ndarray) -> "LineStats":
        nz = values[values > 0]
        ordered = tuple(sorted((float(x) for x in nz), reverse=True))
        return cls(index=index, k=len(ordered), w=float(nz.sum()), sorted_values=ordered)


@dataclass(frozen=True)
class BoundReport:
    per_line: tuple[tuple[LineStats, float, float | None], ...]
    combined: float
    argmax_line: int


def lb1(stats: LineStats, s: int, delta: float) -> float:
    """General per-line bound: (w + delta * max(k, s)) / s."""
    if stats.k < 1:
        raise ValueError("lb1 requires a line with at least one nonzero")
    if s < 1:
        raise ValueError("s must be >= 1")
    return (stats.w + delta * max(stats.k, s)) / s


def lb2(stats: LineStats, s: int, delta: float) -> float | None:
    """Tighter per-line bound, applicable only when the line has exactly s nonzeros.

    With m extra reconfigurations beyond the initial s, at least one element
    of weight >= x_{m+1} stays whole, and the average per-switch duration is
    (w + m*delta)/s; the bound minimizes over all feasible m (x_j taken as 0
    beyond index s).  Returns None when k != s.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if stats.k != s:
        return None
    x = list(stats.sorted_values)

    def xval(j: int) -> float:  # 1-based, 0 beyond the s elements
        return x[j - 1] if j <= s else 0.0

    w = stats.w
    branch0 = xval(1)
    branch1 = max(xval(2), (w + delta) / s, xval(s) + delta)
    branch_m = min(
        max(xval(m + 1), (w + m * delta) / s) for m in range(2, s * s + 1)
    ) if s * s >= 2 else float("inf")
    return delta + min(branch0, branch1, branch_m)


def line_stats(D: DemandMatrix) -> list[LineStats]:
    """LineStats for all 2n lines (rows first, then columns)."""
    n = D.n
    out = [LineStats.from_values(i, D.values[i, :]) for i in range(n)]
    out += [LineStats.from_values(n + j, D.values[:, j]) for j in range(n)]
    return out


def combined_lower_bound(D: DemandMatrix, s: int, delta: float) -> BoundReport:
    """Max over all lines of max(lb1, lb2): a certified makespan lower bound."""
    if D.is_zero():
        raise ValueError("no lower bound for an all-zero matrix")
    per_line = []
    best = -np.inf
    best_line = -1
    for stats in line_stats(D):
        if stats.k == 0:
            continue
        v1 = lb1(stats, s, delta)
        v2 = lb2(stats, s, delta)
        per_line.append((stats, v1, v2))
        line_best = v1 if v2 is None else max(v1, v2)
        if line_best > best:
            best = line_best
            best_line = stats.index
    return BoundReport(per_line=tuple(per_line), combined=float(best), argmax_line=best_line)


def degree_prob_exact(n: int, k: int) -> float:
    """Probability that k uniformly random cells in one line are all distinct.

    Computed as the product of (n-j)/n for j = 0..k-1, which avoids
    factorial overflow at n ~ 100.
    """
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    p = 1.0
    for j in range(k):
        p *= (n - j) / n
    return p


def degree_prob_model(n: int, k: int) -> float:
    """Model probability that a sum of k random permutations has degree k.

    Treats the 2n lines as i.i.d., each with hit probability
    degree_prob_exact(n, k): 1 - (1 - p)^(2n).
    """
    p = degree_prob_exact(n, k)
    return 1.0 - (1.0 - p) ** (2 * n)


def estimate_degree_prob(n: int, k: int, trials: int, seed: int) -> float:
    """Monte Carlo estimate of the degree-equals-k probability.

    Each trial sums k uniformly random permutations (weights are irrelevant
    to the degree) and checks whether the support degree is exactly k.
    Deterministic per seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(trials):
        cells = np.zeros((n, n), dtype=bool)
        for _ in range(k):
            perm = rng.permutation(n)
            cells[np.arange(n), perm] = True
        if degree(cells) == k:
            hits += 1
    return hits / trials


def sample_degree(n: int, k: int, rng) -> int:
    """Degree of the support of a sum of k random permutations (one sample)."""
    cells = np.zeros((n, n), dtype=bool)
    for _ in range(k):
        perm = rng.permutation(n)
        cells[np.arange(n), perm] = True
    return degree(cells)

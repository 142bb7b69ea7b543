"""Demand matrices, partial permutation matchings and weighted decompositions.

Everything downstream (decomposition, scheduling, bounds, workloads) is built
on the three value types here.  All values are immutable after construction
and all operations are pure functions, so they are safe to share across
concurrent tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

UNMATCHED = -1


class MatrixFormatError(ValueError):
    """Raised when a matrix file is malformed (bad token, NaN, negative...)."""


@dataclass(frozen=True)
class DemandMatrix:
    """An n x n nonnegative traffic demand matrix.

    Entries are in units of link-transmission time (link bandwidth
    normalized to 1).
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 1:
            raise ValueError(f"demand matrix must be square and nonempty, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("demand matrix entries must be finite")
        if np.any(v < 0):
            raise ValueError("demand matrix entries must be nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def is_zero(self) -> bool:
        return not np.any(self.values > 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DemandMatrix):
            return NotImplemented
        return self.values.shape == other.values.shape and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    def content_hash(self) -> str:
        """Hex digest of the raw entry bytes, for instance identification."""
        import hashlib

        return hashlib.sha256(self.values.tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class PermutationMatching:
    """A partial one-to-one input->output port mapping.

    ``targets[i]`` is the output port of input ``i``, or ``UNMATCHED`` (-1).
    Matched targets must be distinct.  Partial matchings are allowed: on a
    sparse demand a full permutation would be forced through zero-demand
    cells.
    """

    targets: tuple[int, ...]

    def __post_init__(self):
        n = len(self.targets)
        if n < 1:
            raise ValueError("matching must have at least one port")
        seen = set()
        for t in self.targets:
            if t == UNMATCHED:
                continue
            if not (0 <= t < n):
                raise ValueError(f"target {t} out of range for n={n}")
            if t in seen:
                raise ValueError(f"duplicate target {t}")
            seen.add(t)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))

    @property
    def n(self) -> int:
        return len(self.targets)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, t) for i, t in enumerate(self.targets) if t != UNMATCHED]

    def size(self) -> int:
        return sum(1 for t in self.targets if t != UNMATCHED)

    def as_matrix(self) -> np.ndarray:
        """0/1 matrix with a 1 at every matched (input, output) cell."""
        p = np.zeros((self.n, self.n), dtype=np.float64)
        for i, j in self.pairs():
            p[i, j] = 1.0
        return p

    @classmethod
    def identity(cls, n: int) -> "PermutationMatching":
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, n: int, shift: int = 1) -> "PermutationMatching":
        return cls(tuple((i + shift) % n for i in range(n)))


@dataclass(frozen=True)
class WeightedDecomposition:
    """An ordered list of (matching, weight) pairs covering a demand matrix."""

    matchings: tuple[PermutationMatching, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.matchings) != len(self.weights):
            raise ValueError("matchings and weights must have equal length")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "matchings", tuple(self.matchings))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def __len__(self) -> int:
        return len(self.matchings)

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights))

    def served(self, n: int) -> np.ndarray:
        """Elementwise weighted sum of the matchings: what the decomposition serves."""
        out = np.zeros((n, n), dtype=np.float64)
        for m, w in zip(self.matchings, self.weights):
            if m.n != n:
                raise ValueError(f"matching size {m.n} does not match n={n}")
            for i, j in m.pairs():
                out[i, j] += w
        return out

    def with_weights(self, weights) -> "WeightedDecomposition":
        return WeightedDecomposition(self.matchings, tuple(weights))


def support(D: DemandMatrix) -> np.ndarray:
    """Boolean support matrix: True exactly where the demand is > 0."""
    return D.values > 0


def degree(S: np.ndarray) -> int:
    """Maximum number of True entries in any row or column of a support matrix."""
    S = np.asarray(S, dtype=bool)
    if S.size == 0 or not S.any():
        return 0
    return int(max(S.sum(axis=1).max(), S.sum(axis=0).max()))


def covers(dec: WeightedDecomposition, D: DemandMatrix, tol: float = 0.0) -> bool:
    """True iff the weighted sum of the matchings is >= D - tol elementwise."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    served = dec.served(D.n)
    return bool(np.all(served >= D.values - tol))


@dataclass(frozen=True)
class NormalizeResult:
    matrix: DemandMatrix
    converged: bool
    iterations: int
    fallback: bool = field(default=False)


def normalize_doubly_stochastic(
    D: DemandMatrix, tol: float = 1e-8, max_iters: int = 1000
) -> NormalizeResult:
    """Scale D so every row and column sum is 1 (Sinkhorn-style alternation).

    Alternates row and column scaling until all 2n line sums are within
    ``tol`` of 1.  If the support pattern prevents convergence within
    ``max_iters``, falls back to dividing D by its maximum row-or-column sum
    (max-load scaling) and flags the fallback.
    """
    if D.is_zero():
        raise ValueError("cannot normalize an all-zero matrix")
    v = D.values.copy()
    for it in range(1, max_iters + 1):
        rs = v.sum(axis=1)
        v = np.where(rs[:, None] > 0, v / np.where(rs[:, None] > 0, rs[:, None], 1.0), v)
        cs = v.sum(axis=0)
        v = np.where(cs[None, :] > 0, v / np.where(cs[None, :] > 0, cs[None, :], 1.0), v)
        rs = v.sum(axis=1)
        cs = v.sum(axis=0)
        if np.all(np.abs(rs - 1) <= tol) and np.all(np.abs(cs - 1) <= tol):
            return NormalizeResult(DemandMatrix(v), converged=True, iterations=it)
    peak = max(D.values.sum(axis=1).max(), D.values.sum(axis=0).max())
    return NormalizeResult(
        DemandMatrix(D.values / peak), converged=False, iterations=max_iters, fallback=True
    )


def add_gaussian_noise(D: DemandMatrix, sigma: float, rng_seed: int) -> DemandMatrix:
    """Add N(0, sigma^2) noise to every strictly positive entry.

    Zero entries stay exactly zero (the support never grows) and perturbed
    entries are clamped at 0 from below.  Deterministic for a fixed seed.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return D
    rng = np.random.default_rng(rng_seed)
    noise = rng.normal(0.0, sigma, size=D.values.shape)
    pos = D.values > 0
    out = np.where(pos, np.maximum(D.values + noise, 0.0), 0.0)
    return DemandMatrix(out)


def save_matrix(D: DemandMatrix, path) -> None:
    """Write the matrix file format: n lines of n comma-separated decimals."""
    with open(path, "w") as f:
        for row in D.values:
            f.write(",".join(repr(float(x)) for x in row))
            f.write("\n")


def load_matrix(path) -> DemandMatrix:
    """Parse the matrix file format, rejecting NaN, infinities and negatives."""
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            vals = []
            for tok in line.split(","):
                try:
                    x = float(tok)
                except ValueError:
                    raise MatrixFormatError(f"{path}:{lineno}: bad number {tok!r}") from None
                if math.isnan(x) or math.isinf(x):
                    raise MatrixFormatError(f"{path}:{lineno}: non-finite entry {tok!r}")
                if x < 0:
                    raise MatrixFormatError(f"{path}:{lineno}: negative entry {tok!r}")
                vals.append(x)
            rows.append(vals)
    if not rows:
        raise MatrixFormatError(f"{path}: empty matrix file")
    n = len(rows)
    for lineno, r in enumerate(rows, start=1):
        if len(r) != n:
            raise MatrixFormatError(
                f"{path}:{lineno}: expected {n} entries per row, got {len(r)}"
            )
    return DemandMatrix(np.array(rows, dtype=np.float64))

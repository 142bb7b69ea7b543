"""Workload generation and ingestion.

The benchmark generator sums seeded random permutation flows (a few large,
many small); the skewed synthetic generator stands in for pipeline-parallel
AI traffic (one dominant ring flow plus background); CSV ingestion supports
raw, doubly-stochastic-normalized and max-load-scaled preprocessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ocsched.matrix import (
    DemandMatrix,
    add_gaussian_noise,
    load_matrix,
    normalize_doubly_stochastic,
)


class WorkloadKind(str, Enum):
    BENCHMARK = "benchmark"
    SYNTHETIC_SKEWED = "synthetic_skewed"
    CSV_RAW = "csv_raw"
    CSV_DOUBLY_STOCHASTIC = "csv_doubly_stochastic"
    CSV_MAXLOAD_SCALED = "csv_maxload_scaled"


@dataclass(frozen=True)
class BenchmarkSpec:
    """Parameters of the random-flows benchmark matrix."""

    n: int = 100
    flows_per_port: int = 16
    large_count: int = 4
    large_share: float = 0.7
    small_count: int = 12
    small_share: float = 0.3
    noise_sigma: float = 0.003
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.large_count + self.small_count != self.flows_per_port:
            raise ValueError("large_count + small_count must equal flows_per_port")
        if abs(self.large_share + self.small_share - 1.0) > 1e-12:
            raise ValueError("large_share + small_share must equal 1")
        if self.large_count < 0 or self.small_count < 0:
            raise ValueError("flow counts must be nonnegative")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")


def _random_permutation_matrix(n: int, rng) -> np.ndarray:
    perm = rng.permutation(n)
    m = np.zeros((n, n), dtype=np.float64)
    m[np.arange(n), perm] = 1.0
    return m


def gen_benchmark(spec: BenchmarkSpec) -> DemandMatrix:
    """Sum of seeded random permutation flows, then per-entry Gaussian noise.

    The first ``large_count`` flows evenly split ``large_share`` of the
    bandwidth, the remaining flows evenly split ``small_share``.  Pre-noise
    the matrix is exactly doubly stochastic.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    total = np.zeros((n, n), dtype=np.float64)
    large_w = spec.large_share / spec.large_count if spec.large_count else 0.0
    small_w = spec.small_share / spec.small_count if spec.small_count else 0.0
    for f in range(spec.flows_per_port):
        w = large_w if f < spec.large_count else small_w
        total += w * _random_permutation_matrix(n, rng)
    D = DemandMatrix(total)
    if spec.noise_sigma > 0:
        D = add_gaussian_noise(D, spec.noise_sigma, rng_seed=spec.seed + 1)
    return D


def gen_synthetic_skewed(
    n: int,
    ring_weight: float = 0.7,
    background_flows: int = 4,
    seed: int = 0,
    noise_sigma: float = 0.003,
) -> DemandMatrix:
    """Skewed AI-like matrix: a dominant ring flow plus random background flows.

    The ring permutation i -> i+1 carries ``ring_weight``; the background
    permutations evenly split the rest.  Noise is added to nonzero entries
    and the result is normalized doubly stochastic.
    """
    if not (0 < ring_weight < 1):
        raise ValueError("ring_weight must be in (0, 1)")
    if background_flows < 0:
        raise ValueError("background_flows must be nonnegative")
    if n < 2:
        raise ValueError("n must be >= 2 for a ring flow")
    rng = np.random.default_rng(seed)
    total = np.zeros((n, n), dtype=np.float64)
    ring = np.zeros((n, n), dtype=np.float64)
    ring[np.arange(n), (np.arange(n) + 1) % n] = 1.0
    total += ring_weight * ring
    if background_flows:
        bg_w = (1.0 - ring_weight) / background_flows
        for _ in range(background_flows):
            total += bg_w * _random_permutation_matrix(n, rng)
    D = DemandMatrix(total)
    if noise_sigma > 0:
        D = add_gaussian_noise(D, noise_sigma, rng_seed=seed + 1)
    return normalize_doubly_stochastic(D).matrix


def max_load_scale(D: DemandMatrix) -> DemandMatrix:
    """Divide by the maximum row-or-column sum so the peak line load is 1."""
    peak = max(D.values.sum(axis=1).max(), D.values.sum(axis=0).max())
    if peak <= 0:
        raise ValueError("cannot scale an all-zero matrix")
    return DemandMatrix(D.values / peak)


def load_csv(
    path, kind: WorkloadKind = WorkloadKind.CSV_RAW, noise_sigma: float = 0.0, seed: int = 0
) -> DemandMatrix:
    """Load a matrix file and apply the preprocessing pipeline for its kind.

    csv_raw: as-is.  csv_doubly_stochastic: normalize, then noise (the GPT
    pipeline).  csv_maxload_scaled: scale the peak line load to 1 (the MoE
    token-count pipeline); noise only if explicitly requested.
    """
    D = load_matrix(path)
    kind = WorkloadKind(kind)
    if kind == WorkloadKind.CSV_RAW:
        return D
    if kind == WorkloadKind.CSV_DOUBLY_STOCHASTIC:
        D = normalize_doubly_stochastic(D).matrix
        if noise_sigma > 0:
            D = add_gaussian_noise(D, noise_sigma, rng_seed=seed)
        return D
    if kind == WorkloadKind.CSV_MAXLOAD_SCALED:
        D = max_load_scale(D)
        if noise_sigma > 0:
            D = add_gaussian_noise(D, noise_sigma, rng_seed=seed)
        return D
    raise ValueError(f"kind {kind} is not a CSV ingestion kind")

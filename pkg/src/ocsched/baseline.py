"""Comparison algorithm: split the demand across switches, decompose per switch.

Each nonzero cell is assigned whole to one switch by a sparsity-balancing
greedy, then every per-switch submatrix is decomposed independently.  There
is no cross-switch balancing afterwards; the split is this algorithm's only
load-balancing mechanism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ocsched.decompose import decompose
from ocsched.matrix import DemandMatrix
from ocsched.schedule import ParallelSchedule, SwitchProgram


@dataclass(frozen=True)
class SparsitySplit:
    submatrices: tuple[DemandMatrix, ...]
    assignment: dict[tuple[int, int], int]  # nonzero cell -> switch index


def sparsity_split(D: DemandMatrix, s: int) -> SparsitySplit:
    """Assign each nonzero cell to one of s submatrices, balancing line degrees.

    Cells are visited in non-increasing value order (ties row-major); each
    goes to the switch minimizing the cell's current row + column nonzero
    count there, tie-broken by least assigned weight, then lowest index.
    Balanced per-line degrees keep every submatrix's configuration count low.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    n = D.n
    cells = [(i, j) for i in range(n) for j in range(n) if D.values[i, j] > 0]
    cells.sort(key=lambda ij: (-D.values[ij[0], ij[1]], ij[0], ij[1]))

    row_counts = np.zeros((s, n), dtype=np.int64)
    col_counts = np.zeros((s, n), dtype=np.int64)
    totals = np.zeros(s, dtype=np.float64)
    subs = [np.zeros((n, n), dtype=np.float64) for _ in range(s)]
    assignment: dict[tuple[int, int], int] = {}

    for i, j in cells:
        h = min(
            range(s), key=lambda h: (row_counts[h, i] + col_counts[h, j], totals[h], h)
        )
        subs[h][i, j] = D.values[i, j]
        row_counts[h, i] += 1
        col_counts[h, j] += 1
        totals[h] += D.values[i, j]
        assignment[(i, j)] = h

    return SparsitySplit(
        submatrices=tuple(DemandMatrix(m) for m in subs), assignment=assignment
    )


def baseline_schedule(D: DemandMatrix, s: int, delta: float) -> ParallelSchedule:
    """Decompose each split submatrix onto its own switch (no equalization)."""
    split = sparsity_split(D, s)
    programs = []
    for sub in split.submatrices:
        if sub.is_zero():
            programs.append(SwitchProgram(()))
            continue
        dec = decompose(sub).decomposition
        programs.append(SwitchProgram(tuple(zip(dec.matchings, dec.weights))))
    return ParallelSchedule(tuple(programs), delta)

"""Assign weighted matchings to parallel switches and balance their loads.

LPT (longest processing time first) places each matching on the currently
least-loaded switch; every placement costs the reconfiguration delay plus
the matching's weight.  The equalize pass then repeatedly splits the largest
configuration on the most-loaded switch and moves the excess (plus one
reconfiguration) to the least-loaded switch, driving both to the same load.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ocsched.matrix import DemandMatrix, PermutationMatching, WeightedDecomposition, covers


@dataclass(frozen=True)
class SwitchProgram:
    """Ordered configurations of a single switch: (matching, weight) pairs."""

    configs: tuple[tuple[PermutationMatching, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "configs", tuple((m, float(w)) for m, w in self.configs)
        )
        if any(w < 0 for _, w in self.configs):
            raise ValueError("configuration weights must be nonnegative")

    def load(self, delta: float) -> float:
        return sum(delta + w for _, w in self.configs)


@dataclass(frozen=True)
class ParallelSchedule:
    """Per-switch configuration lists with a shared reconfiguration delay."""

    switches: tuple[SwitchProgram, ...]
    delta: float

    def __post_init__(self):
        if len(self.switches) < 1:
            raise ValueError("need at least one switch")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        object.__setattr__(self, "switches", tuple(self.switches))

    @property
    def s(self) -> int:
        return len(self.switches)

    def loads(self) -> list[float]:
        return [sw.load(self.delta) for sw in self.switches]

    def num_configs(self) -> int:
        return sum(len(sw.configs) for sw in self.switches)

    def flatten(self) -> WeightedDecomposition:
        """All (matching, weight) pairs across switches as one decomposition."""
        matchings = []
        weights = []
        for sw in self.switches:
            for m, w in sw.configs:
                matchings.append(m)
                weights.append(w)
        return WeightedDecomposition(tuple(matchings), tuple(weights))


def schedule_lpt(dec: WeightedDecomposition, s: int, delta: float) -> ParallelSchedule:
    """LPT assignment: heaviest matchings first, each to the least-loaded switch.

    Ties in weight keep original decomposition order; ties in load go to the
    lowest switch index.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    order = sorted(range(len(dec)), key=lambda i: (-dec.weights[i], i))
    assigned: list[list[tuple[PermutationMatching, float]]] = [[] for _ in range(s)]
    loads = [0.0] * s
    for i in order:
        h = min(range(s), key=lambda j: (loads[j], j))
        assigned[h].append((dec.matchings[i], dec.weights[i]))
        loads[h] += delta + dec.weights[i]
    return ParallelSchedule(
        tuple(SwitchProgram(tuple(cfgs)) for cfgs in assigned), delta
    )


def makespan(sched: ParallelSchedule) -> float:
    """Longest per-switch duration: max over switches of sum(delta + weight)."""
    return max(sched.loads())


def equalize(sched: ParallelSchedule, max_rounds: int | None = None) -> ParallelSchedule:
    """Iteratively balance the most- and least-loaded switches by splitting.

    While the load gap exceeds delta, the target load mu is the midpoint of
    the two loads after accounting for one extra reconfiguration; the excess
    tau = L_max - mu is carved off the largest configuration on the loaded
    switch (if it can supply it) and appended to the light switch.  Coverage
    is preserved exactly since (a - tau) P + tau P = a P.
    """
    delta = sched.delta
    s = sched.s
    programs = [list(sw.configs) for sw in sched.switches]
    loads = [sw.load(delta) for sw in sched.switches]
    if max_rounds is None:
        max_rounds = 4 * s * max(1, sched.num_configs())

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            warnings.warn(
                f"equalize hit the iteration cap ({max_rounds}); returning as-is",
                RuntimeWarning,
            )
            break
        h_max = min(range(s), key=lambda h: (-loads[h], h))
        h_min = min(range(s), key=lambda h: (loads[h], h))
        if loads[h_max] - loads[h_min] <= delta:
            break
        mu = (loads[h_max] + loads[h_min] + delta) / 2.0
        if not programs[h_max]:
            break
        z = min(range(len(programs[h_max])), key=lambda i: (-programs[h_max][i][1], i))
        matching, alpha = programs[h_max][z]
        tau = loads[h_max] - mu
        if alpha <= tau:
            break
        programs[h_max][z] = (matching, alpha - tau)
        programs[h_min].append((matching, tau))
        loads[h_max] -= tau
        loads[h_min] += delta + tau

    return ParallelSchedule(tuple(SwitchProgram(tuple(p)) for p in programs), delta)


def verify(sched: ParallelSchedule, D: DemandMatrix, tol: float = 1e-9) -> bool:
    """True iff the union of all switch configurations covers D within tol."""
    return covers(sched.flatten(), D, tol)


def save_schedule(sched: ParallelSchedule, path) -> None:
    """Write the schedule file format (header, then per-switch config lines)."""
    with open(path, "w") as f:
        f.write(f"{sched.s},{sched.delta!r},{makespan(sched)!r}\n")
        for h, sw in enumerate(sched.switches):
            f.write(f"switch {h}: {len(sw.configs)} configs, load {sw.load(sched.delta)!r}\n")
            for m, w in sw.configs:
                f.write(",".join([repr(w)] + [str(t) for t in m.targets]) + "\n")


def load_schedule(path) -> ParallelSchedule:
    """Parse a schedule file written by save_schedule."""
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f]
    if not lines:
        raise ValueError(f"{path}: empty schedule file")
    s_str, delta_str, _makespan = lines[0].split(",")
    s = int(s_str)
    delta = float(delta_str)
    pos = 1
    switches = []
    for h in range(s):
        header = lines[pos]
        pos += 1
        if not header.startswith(f"switch {h}:"):
            raise ValueError(f"{path}: expected 'switch {h}:' header, got {header!r}")
        m_count = int(header.split(":")[1].strip().split()[0])
        configs = []
        for _ in range(m_count):
            parts = lines[pos].split(",")
            pos += 1
            w = float(parts[0])
            targets = tuple(int(t) for t in parts[1:])
            configs.append((PermutationMatching(targets), w))
        switches.append(SwitchProgram(tuple(configs)))
    return ParallelSchedule(tuple(switches), delta)

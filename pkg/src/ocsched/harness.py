"""Experiment harness: compose workloads, algorithms and bounds into sweeps.

A sweep runs the cartesian product of seeds, reconfiguration delays, switch
counts and algorithms, feeding the same generated matrix to every algorithm
at a given seed, and records one CSV row per point including the certified
lower bound.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

from ocsched.baseline import baseline_schedule
from ocsched.bounds import combined_lower_bound
from ocsched.decompose import decompose
from ocsched.matrix import DemandMatrix
from ocsched.schedule import ParallelSchedule, equalize, makespan, schedule_lpt
from ocsched.workloads import BenchmarkSpec, WorkloadKind, gen_benchmark, gen_synthetic_skewed, load_csv

ALGORITHMS = ("spectra", "spectra_no_equalize", "baseline")

RESULT_COLUMNS = (
    "workload_tag",
    "algorithm",
    "delta",
    "s",
    "seed",
    "matrix_hash",
    "makespan",
    "num_configs_total",
    "max_configs_one_switch",
    "lower_bound",
    "ratio_to_lb",
    "wall_time_ms",
)


def spectra(
    D: DemandMatrix, s: int, delta: float, equalize_enabled: bool = True
) -> ParallelSchedule:
    """Full pipeline: decompose, LPT-schedule, then (optionally) equalize."""
    dec = decompose(D).decomposition
    sched = schedule_lpt(dec, s, delta)
    if equalize_enabled:
        sched = equalize(sched)
    return sched


@dataclass(frozen=True)
class ResultRow:
    workload_tag: str
    algorithm: str
    delta: float
    s: int
    seed: int
    matrix_hash: str
    makespan: float
    num_configs_total: int
    max_configs_one_switch: int
    lower_bound: float
    ratio_to_lb: float
    wall_time_ms: float

    def as_csv_values(self) -> list[str]:
        return [
            self.workload_tag,
            self.algorithm,
            repr(self.delta),
            str(self.s),
            str(self.seed),
            self.matrix_hash,
            repr(self.makespan),
            str(self.num_configs_total),
            str(self.max_configs_one_switch),
            repr(self.lower_bound),
            repr(self.ratio_to_lb),
            f"{self.wall_time_ms:.3f}",
        ]


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition: workload, algorithm set, delta/s grids and seeds."""

    workload: WorkloadKind = WorkloadKind.BENCHMARK
    workload_params: dict = field(default_factory=dict)
    algorithms: tuple[str, ...] = ("spectra", "baseline")
    delta_grid: tuple[float, ...] = (0.0025, 0.005, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64)
    s_grid: tuple[int, ...] = (2, 4, 8)
    seeds: tuple[int, ...] = tuple(range(50))
    output_path: str | None = None

    def __post_init__(self):
        if not self.delta_grid or not self.s_grid or not self.seeds:
            raise ValueError("grids and seeds must be non-empty")
        if any(d < 0 for d in self.delta_grid):
            raise ValueError("delta must be nonnegative")
        if any(s < 1 for s in self.s_grid):
            raise ValueError("s must be >= 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "delta_grid", tuple(float(d) for d in self.delta_grid))
        object.__setattr__(self, "s_grid", tuple(int(s) for s in self.s_grid))
        object.__setattr__(self, "seeds", tuple(int(x) for x in self.seeds))


def _generate(cfg: ExperimentConfig, seed: int) -> DemandMatrix:
    params = dict(cfg.workload_params)
    if cfg.workload == WorkloadKind.BENCHMARK:
        spec = BenchmarkSpec(seed=seed, **params)
        return gen_benchmark(spec)
    if cfg.workload == WorkloadKind.SYNTHETIC_SKEWED:
        return gen_synthetic_skewed(seed=seed, **params)
    # CSV kinds: a single fixed matrix; the seed only drives optional noise.
    path = params.pop("path")
    return load_csv(path, kind=cfg.workload, seed=seed, **params)


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Run the full sweep; write the results CSV if an output path is set.

    The same per-seed matrix is fed to every algorithm, spectra
    decompositions are shared across (delta, s) points, and rows come out in
    deterministic (seed, delta, s, algorithm) order.
    """
    rows: list[ResultRow] = []
    for seed in cfg.seeds:
        D = _generate(cfg, seed)
        mhash = D.content_hash()

        spectra_dec = None
        if "spectra" in cfg.algorithms or "spectra_no_equalize" in cfg.algorithms:
            spectra_dec = decompose(D).decomposition
        baseline_cache: dict[tuple[int, float], ParallelSchedule] = {}

        for delta in cfg.delta_grid:
            for s in cfg.s_grid:
                lb = combined_lower_bound(D, s, delta).combined
                for algo in cfg.algorithms:
                    t0 = time.perf_counter()
                    if algo == "spectra":
                        sched = equalize(schedule_lpt(spectra_dec, s, delta))
                    elif algo == "spectra_no_equalize":
                        sched = schedule_lpt(spectra_dec, s, delta)
                    else:
                        key = (s, delta)
                        if key not in baseline_cache:
                            baseline_cache[key] = baseline_schedule(D, s, delta)
                        sched = baseline_cache[key]
                    ms = makespan(sched)
                    wall = (time.perf_counter() - t0) * 1000.0
                    rows.append(
                        ResultRow(
                            workload_tag=cfg.workload.value,
                            algorithm=algo,
                            delta=delta,
                            s=s,
                            seed=seed,
                            matrix_hash=mhash,
                            makespan=ms,
                            num_configs_total=sched.num_configs(),
                            max_configs_one_switch=max(
                                len(sw.configs) for sw in sched.switches
                            ),
                            lower_bound=lb,
                            ratio_to_lb=ms / lb,
                            wall_time_ms=wall,
                        )
                    )
    if cfg.output_path is not None:
        write_results_csv(rows, cfg.output_path)
    return rows


def write_results_csv(rows, path) -> None:
    try:
        f = open(path, "w", newline="")
    except OSError as e:
        raise OSError(f"cannot write results to {path}: {e}") from e
    with f:
        writer = csv.writer(f)
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv_values())


def parse_config_file(path, overrides: dict | None = None) -> ExperimentConfig:
    """Parse the flat key=value experiment config format.

    Keys: workload, path, n, flows_per_port, ring_weight, background_flows,
    noise_sigma, algorithms, deltas, s, seeds (count or comma list),
    seed_base, output.
    """
    kv: dict[str, str] = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            kv[key.strip()] = val.strip()
    if overrides:
        kv.update(overrides)

    workload = WorkloadKind(kv.get("workload", "benchmark"))
    params: dict = {}
    int_params = {"n", "flows_per_port", "large_count", "small_count", "background_flows"}
    float_params = {"ring_weight", "noise_sigma", "large_share", "small_share"}
    for key in int_params:
        if key in kv:
            params[key] = int(kv[key])
    for key in float_params:
        if key in kv:
            params[key] = float(kv[key])
    if "path" in kv:
        params["path"] = kv["path"]

    seed_base = int(kv.get("seed_base", "0"))
    seeds_val = kv.get("seeds", "50")
    if "," in seeds_val:
        seeds = tuple(int(x) for x in seeds_val.split(","))
    else:
        seeds = tuple(range(seed_base, seed_base + int(seeds_val)))

    kwargs: dict = {"workload": workload, "workload_params": params, "seeds": seeds}
    if "algorithms" in kv:
        kwargs["algorithms"] = tuple(a.strip() for a in kv["algorithms"].split(","))
    if "deltas" in kv:
        kwargs["delta_grid"] = tuple(float(x) for x in kv["deltas"].split(","))
    if "s" in kv:
        kwargs["s_grid"] = tuple(int(x) for x in kv["s"].split(","))
    if "output" in kv:
        kwargs["output_path"] = kv["output"]
    return ExperimentConfig(**kwargs)

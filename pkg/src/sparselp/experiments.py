"""Experiment drivers behind the table and figure CLI commands.

Each driver generates seeded instances, runs the solver(s), and returns a
flat list of per-run records; separate writers aggregate them into the CSV
layouts the CLI documents.  Seeds are derived as base_seed plus a global
instance index, so runs are deterministic and instances stay disjoint under
parallel execution.  SPARSELP_THREADS > 1 fans instances out to a process
pool; results are collected in task order either way, so the CSV bytes do
not depend on the worker count (wall-time columns excepted).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import replace_p
from .errors import SparselpError
from .gen import GenSpec, gen_instance, gen_matched_pair
from .linalg import lq_norm
from .smoothing import smoothed_abs, smoothed_plus
from .solver import solve_l1, solve_l2
from .verify import kkt_property_report

PROFILES = {
    "desk": (100, 500, 10),
    "small": (200, 1000, 20),
    "paper": (500, 2500, 50),
}
TABLE_P_GRID = (0.9, 0.7, 0.5, 0.3, 0.1)
SPARSITY_P_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
NOISES = ("gauss", "t2")
SUCCESS_THRESHOLD = 5e-3


def thread_count() -> int:
    raw = os.environ.get("SPARSELP_THREADS", "").strip()
    if not raw:
        return 1
    return max(1, int(raw))


def _map_ordered(fn, tasks):
    workers = thread_count()
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------------------
# table 1: solver quality per (noise, p), l1 ball only


@dataclass(frozen=True)
class Table1Record:
    noise: str
    p: float
    seed: int
    nnz: int
    rank_aj: int
    err1: float
    err2: float
    outer_iters: int
    inner_iters: int
    wall_time: float
    stop_reason: str


def _table1_task(args) -> Table1Record:
    m, n, s, delta, noise, p, seed = args
    spec = GenSpec(m=m, n=n, s=s, delta=delta, noise=noise, seed=seed, q_for_sigma=1.0)
    inst, _, _ = gen_instance(spec)
    try:
        report = solve_l1(replace_p(inst, p))
        props = kkt_property_report(inst, report.x_star, q=1.0)
    except SparselpError as exc:
        return Table1Record(
            noise=noise, p=p, seed=seed, nnz=-1, rank_aj=-1,
            err1=np.nan, err2=np.nan, outer_iters=0, inner_iters=0,
            wall_time=np.nan, stop_reason=f"error: {exc}",
        )
    return Table1Record(
        noise=noise,
        p=p,
        seed=seed,
        nnz=props.nnz,
        rank_aj=props.rank_aj,
        err1=props.err1,
        err2=props.err2,
        outer_iters=report.outer_iters,
        inner_iters=report.inner_iters_total,
        wall_time=report.wall_time,
        stop_reason=report.stop_reason,
    )


def run_table1(
    profile: str = "desk",
    seeds: int = 10,
    p_grid=TABLE_P_GRID,
    delta: float = 1e-3,
    noises=NOISES,
    base_seed: int = 0,
) -> list[Table1Record]:
    m, n, s = PROFILES[profile]
    tasks = []
    for ni, noise in enumerate(noises):
        for p in p_grid:
            for si in range(seeds):
                inst_seed = base_seed + ni * seeds + si
                tasks.append((m, n, s, delta, noise, p, inst_seed))
    return _map_ordered(_table1_task, tasks)


TABLE1_HEADER = ("noise", "p", "nnz", "rank", "err1", "err2")


def table1_rows(records) -> list[tuple]:
    """Mean over seeds per (noise, p), in first-appearance order."""
    groups: dict[tuple, list[Table1Record]] = {}
    for rec in records:
        groups.setdefault((rec.noise, rec.p), []).append(rec)
    rows = []
    for (noise, p), recs in groups.items():
        rows.append(
            (
                noise,
                p,
                float(np.mean([r.nnz for r in recs])),
                float(np.mean([r.rank_aj for r in recs])),
                float(np.mean([r.err1 for r in recs])),
                float(np.mean([r.err2 for r in recs])),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# table 2: l1-ball solver vs l2-ball baseline on matched instances


@dataclass(frozen=True)
class Table2Record:
    noise: str
    m: int
    n: int
    s: int
    delta: float
    solver: str
    seed: int
    nnz: int
    feas: float
    recerr: float
    wall_time: float
    stop_reason: str


def _table2_task(args) -> tuple:
    m, n, s, delta, noise, p, seed = args
    spec = GenSpec(m=m, n=n, s=s, delta=delta, noise=noise, seed=seed, q_for_sigma=1.0)
    inst1, inst2, x_hat, _ = gen_matched_pair(spec)
    x_hat_norm = float(np.linalg.norm(x_hat))
    out = []
    for solver_name, solve, inst, q in (
        ("l1", solve_l1, inst1, 1.0),
        ("l2", solve_l2, inst2, 2.0),
    ):
        try:
            report = solve(replace_p(inst, p))
            x = report.x_star
            feas = max(lq_norm(inst.residual(x), q) - inst.sigma, 0.0)
            recerr = float(np.linalg.norm(x - x_hat)) / x_hat_norm
            out.append(
                Table2Record(
                    noise=noise, m=m, n=n, s=s, delta=delta, solver=solver_name,
                    seed=seed, nnz=len(report.support), feas=float(feas),
                    recerr=recerr, wall_time=report.wall_time,
                    stop_reason=report.stop_reason,
                )
            )
        except SparselpError as exc:
            out.append(
                Table2Record(
                    noise=noise, m=m, n=n, s=s, delta=delta, solver=solver_name,
                    seed=seed, nnz=-1, feas=np.nan, recerr=np.nan,
                    wall_time=np.nan, stop_reason=f"error: {exc}",
                )
            )
    return tuple(out)


def run_table2(
    profile: str = "desk",
    seeds: int = 10,
    delta: float = 1e-3,
    p: float = 0.5,
    noises=NOISES,
    base_seed: int = 0,
) -> list[Table2Record]:
    m, n, s = PROFILES[profile]
    tasks = []
    for ni, noise in enumerate(noises):
        for si in range(seeds):
            tasks.append((m, n, s, delta, noise, p, base_seed + ni * seeds + si))
    records: list[Table2Record] = []
    for pair in _map_ordered(_table2_task, tasks):
        records.extend(pair)
    return records


TABLE2_HEADER = ("noise", "m", "n", "s", "delta", "solver", "nnz", "feas", "recerr", "time")


def table2_rows(records) -> list[tuple]:
    groups: dict[tuple, list[Table2Record]] = {}
    for rec in records:
        groups.setdefault((rec.noise, rec.solver), []).append(rec)
    rows = []
    for (noise, solver), recs in groups.items():
        first = recs[0]
        rows.append(
            (
                noise,
                first.m,
                first.n,
                first.s,
                first.delta,
                solver,
                float(np.mean([r.nnz for r in recs])),
                float(np.mean([r.feas for r in recs])),
                float(np.mean([r.recerr for r in recs])),
                float(np.mean([r.wall_time for r in recs])),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# sparsity of the solution across the exponent grid (figure-style)


@dataclass(frozen=True)
class SparsityRecord:
    noise: str
    p: float
    nnz: int
    stop_reason: str


def _sparsity_task(args) -> SparsityRecord:
    m, n, s, delta, noise, p, seed = args
    spec = GenSpec(m=m, n=n, s=s, delta=delta, noise=noise, seed=seed, q_for_sigma=1.0)
    inst, _, _ = gen_instance(spec)
    try:
        report = solve_l1(replace_p(inst, p))
        return SparsityRecord(noise=noise, p=p, nnz=len(report.support), stop_reason=report.stop_reason)
    except SparselpError as exc:
        return SparsityRecord(noise=noise, p=p, nnz=-1, stop_reason=f"error: {exc}")


def run_sparsity_vs_p(
    profile: str = "desk",
    p_grid=SPARSITY_P_GRID,
    delta: float = 1e-3,
    noises=NOISES,
    base_seed: int = 0,
) -> list[SparsityRecord]:
    """One instance per noise family, re-solved across the whole p grid."""
    m, n, s = PROFILES[profile]
    tasks = []
    for ni, noise in enumerate(noises):
        for p in p_grid:
            tasks.append((m, n, s, delta, noise, p, base_seed + ni))
    return _map_ordered(_sparsity_task, tasks)


SPARSITY_HEADER = ("noise", "p", "nnz")


def sparsity_rows(records) -> list[tuple]:
    return [(r.noise, r.p, r.nnz) for r in records]


# ---------------------------------------------------------------------------
# success-rate curve over the planted sparsity


@dataclass(frozen=True)
class SuccessRecord:
    noise: str
    solver: str
    p: float
    s: int
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials


def _success_task(args) -> bool:
    m, n, s, delta, noise, p, solver, seed = args
    spec = GenSpec(m=m, n=n, s=s, delta=delta, noise=noise, seed=seed, q_for_sigma=1.0)
    inst1, inst2, x_hat, _ = gen_matched_pair(spec)
    solve, inst = (solve_l1, inst1) if solver == "l1" else (solve_l2, inst2)
    try:
        report = solve(replace_p(inst, p))
    except SparselpError:
        return False
    recerr = float(np.linalg.norm(report.x_star - x_hat)) / float(np.linalg.norm(x_hat))
    return recerr < SUCCESS_THRESHOLD


def run_success_curve(
    m: int = 64,
    n: int = 256,
    s_values=(10, 15, 20, 25, 30, 35),
    trials: int = 50,
    p_grid=(0.5,),
    delta: float = 1e-3,
    noises=("gauss",),
    solvers=("l1",),
    base_seed: int = 0,
) -> list[SuccessRecord]:
    records = []
    index = 0
    for noise in noises:
        for solver in solvers:
            for p in p_grid:
                for s in s_values:
                    tasks = [
                        (m, n, s, delta, noise, p, solver, base_seed + index + t)
                        for t in range(trials)
                    ]
                    index += trials
                    wins = _map_ordered(_success_task, tasks)
                    records.append(
                        SuccessRecord(
                            noise=noise, solver=solver, p=p, s=s,
                            trials=trials, successes=int(sum(wins)),
                        )
                    )
    return records


SUCCESS_HEADER = ("noise", "solver", "p", "s", "trials", "successes", "rate")


def success_rows(records) -> list[tuple]:
    return [
        (r.noise, r.solver, r.p, r.s, r.trials, r.successes, r.rate) for r in records
    ]


# ---------------------------------------------------------------------------
# smoothing-kernel sampling for plots

SMOOTHING_HEADER = ("t", "plus_value", "plus_deriv", "abs_value", "abs_deriv")


def smoothing_grid(mu: float = 1.0, nu: float = 1.0, lo: float = -2.0, hi: float = 2.0, count: int = 401):
    rows = []
    for t in np.linspace(lo, hi, count):
        t = float(t)
        pv, pd = smoothed_plus(t, mu)
        av, ad = smoothed_abs(t, nu)
        rows.append((t, float(pv), float(pd), float(av), float(ad)))
    return rows

"""Runtime scaling report: time fixed-layer polynomial sweeps across k and
optionally a full solve, writing a CSV and a matplotlib figure."""

from __future__ import annotations

import csv
import os
import time

import numpy as np

from .fields import build_core_field
from .generator import generate_instance
from .graphs import normalize
from .walk_dp import VariableAssignment
from . import dp_kernel

__all__ = ["run_bench", "time_fixed_sweep"]


def time_fixed_sweep(n: int, k: int, layers: int, seed: int = 5, reps: int = 2) -> float:
    """Best-of-reps wall time of one evaluation sweep over a fixed number of
    length layers on the standard bench profile."""
    inst = generate_instance(n, avg_degree=2.1, n_colors=n, p=1, k=k, seed=seed)
    norm = normalize(inst.graph, inst.query)
    g, q = norm.graph, norm.query
    spec = build_core_field(g.n)
    assign = VariableAssignment.random(g, q.k, spec, np.random.default_rng(seed + 1))
    cap = min(layers, g.n)
    best = None
    dp_kernel.evaluate_lengths(g, q, min(4, cap), assign)  # touch the JIT path
    for _ in range(reps):
        t0 = time.perf_counter()
        dp_kernel.evaluate_lengths(g, q, cap, assign)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def run_bench(n: int = 40, k_values=(14, 15), layers: int = 18, seed: int = 5,
              out_dir: str = "reports", full_solve_k: int | None = None,
              solver_cfg=None) -> dict:
    """Time sweeps for each k, optionally one full solve, and write
    `bench.csv` plus `bench.png` under out_dir.  Returns the measurements."""
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for k in k_values:
        secs = time_fixed_sweep(n, k, layers, seed=seed)
        rows.append({"kind": "sweep", "n": n, "k": k, "layers": layers, "seconds": secs})
    ratios = []
    for a, b in zip(rows, rows[1:]):
        if a["kind"] == b["kind"] == "sweep":
            ratios.append({"kind": "ratio", "n": n, "k": f"{b['k']}/{a['k']}",
                           "layers": layers, "seconds": b["seconds"] / a["seconds"]})
    solve_row = None
    if full_solve_k is not None:
        from .solver import SolverConfig, solve

        cfg = solver_cfg or SolverConfig(trials_per_length=4, recovery_trials=4, seed=seed)
        inst = generate_instance(n, avg_degree=2.1, n_colors=n, p=1, k=full_solve_k, seed=seed)
        t0 = time.perf_counter()
        res = solve(inst.graph, inst.query, cfg)
        dt = time.perf_counter() - t0
        solve_row = {"kind": "solve", "n": n, "k": full_solve_k,
                     "layers": "", "seconds": dt}
        rows.append(solve_row)

    csv_path = os.path.join(out_dir, "bench.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["kind", "n", "k", "layers", "seconds"])
        writer.writeheader()
        for row in rows + ratios:
            writer.writerow(row)

    png_path = os.path.join(out_dir, "bench.png")
    _plot(rows, png_path)
    return {"rows": rows, "ratios": ratios, "csv": csv_path, "figure": png_path}


def _plot(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sweeps = [r for r in rows if r["kind"] == "sweep"]
    fig, ax = plt.subplots(figsize=(6, 4))
    if sweeps:
        ks = [r["k"] for r in sweeps]
        ts = [r["seconds"] for r in sweeps]
        ax.semilogy(ks, ts, "o-", label="fixed-layer sweep")
        base = ts[0] / 2 ** ks[0]
        ax.semilogy(ks, [base * 2 ** k for k in ks], "--", color="gray", label="pure 2^k")
    solves = [r for r in rows if r["kind"] == "solve"]
    for r in solves:
        ax.axhline(r["seconds"], color="tab:red", linestyle=":",
                   label=f"full solve k={r['k']}")
    ax.set_xlabel("k")
    ax.set_ylabel("seconds")
    ax.set_title("label-set DP scaling")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

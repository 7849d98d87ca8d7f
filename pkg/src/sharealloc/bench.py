"""Solve every instance of a corpus directory and collect a report.

Results are listed in file-name order. Only the ``elapsed_ms`` fields depend on
the machine; everything else is a function of the corpus.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ._limits import SearchBudgetExceeded
from .envy import solve_ersa_auto
from .io import parse_instance
from .welfare_solvers import maximize_ewsa_simple, solve_uwsa

__all__ = ["run_bench", "bench_one"]


def _min_envy(inst, node_cap):
    for k in range(inst.n + 1):
        ok, _, used = solve_ersa_auto(inst, k, node_cap=node_cap)
        if ok:
            return k, used
    raise AssertionError("k = n is always feasible")


def bench_one(path: str, node_cap: int | None = None) -> dict:
    start = time.perf_counter()
    entry: dict = {"file": Path(path).name}
    try:
        inst = parse_instance(Path(path).read_bytes())
    except ValueError as exc:
        entry["error"] = str(exc)
        entry["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
        return entry
    entry["agents"], entry["resources"] = inst.n, inst.m
    try:
        entry["min_envy"], entry["ersa_algorithm"] = _min_envy(inst, node_cap)
    except SearchBudgetExceeded:
        entry["min_envy"], entry["ersa_algorithm"] = None, "refused"
    if inst.extension.budget is None:
        entry["max_utilitarian"] = str(solve_uwsa(inst, 1, 0).optimum)
    else:
        entry["max_utilitarian"] = None
    entry["max_egalitarian"] = str(maximize_ewsa_simple(inst)[0])
    entry["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return entry


def run_bench(corpus: str, *, jobs: int = 1, node_cap: int | None = None) -> dict:
    files = sorted(str(p) for p in Path(corpus).glob("*.json"))
    if not Path(corpus).is_dir():
        raise ValueError(f"corpus directory {corpus} does not exist")
    start = time.perf_counter()
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(bench_one, files, [node_cap] * len(files)))
    else:
        rows = [bench_one(f, node_cap) for f in files]
    return {
        "corpus": Path(corpus).name,
        "instances": rows,
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 3),
    }

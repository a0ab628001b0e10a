"""Timing sweep over pattern length Ps and ranking size K on generated data."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, replace
from statistics import mean

from .generator import GenConfig, generate
from .geometry import NeighborhoodConfig
from .miner import MineConfig, mine_topk

log = logging.getLogger(__name__)

DEFAULT_PS = (2, 3, 4, 5, 6)
DEFAULT_K = tuple(range(20, 91, 10))
BENCH_HEADER = ["ps", "k", "mean_seconds", "mean_expansions", "reps"]


@dataclass
class BenchRow:
    ps: int
    k: int
    mean_seconds: float
    mean_expansions: float
    reps: int
    mean_size: float


def run_bench(
    ps_values=DEFAULT_PS,
    k_values=DEFAULT_K,
    reps: int = 3,
    base: GenConfig = GenConfig(),
    min_len: int = 3,
    max_len: int = 20,
    strict_paper_pruning: bool = False,
) -> list[BenchRow]:
    """Mine every (Ps, K) cell on ``reps`` datasets generated with seeds base.seed + i.

    The same datasets are reused across K so cells in a row are comparable.
    """
    rows = []
    nb = NeighborhoodConfig(base.shape, base.r, base.t)
    for ps in ps_values:
        datasets = [generate(replace(base, ps=ps, seed=base.seed + i))[0] for i in range(reps)]
        size = mean(len(d) for d in datasets)
        for k in k_values:
            cfg = MineConfig(k=k, min_len=min_len, max_len=max_len, neighborhood=nb,
                             strict_paper_pruning=strict_paper_pruning)
            secs, exps = [], []
            for ds in datasets:
                _, st = mine_topk(ds, cfg)
                secs.append(st.wall_seconds)
                exps.append(st.expansions)
            row = BenchRow(ps, k, mean(secs), mean(exps), reps, size)
            log.info("ps=%d k=%d %.3fs %.1f expansions", ps, k, row.mean_seconds, row.mean_expansions)
            rows.append(row)
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow([r.ps, r.k, f"{r.mean_seconds:.6f}", f"{r.mean_expansions:.2f}", r.reps])
    return buf.getvalue()


def bench_table(rows: list[BenchRow]) -> str:
    """Pivot: one line per Ps with the average dataset size, one column per K."""
    ks = sorted({r.k for r in rows})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ps", "avg_dataset_size"] + [f"k={k}" for k in ks])
    for ps in sorted({r.ps for r in rows}):
        cells = {r.k: r for r in rows if r.ps == ps}
        size = next(iter(cells.values())).mean_size
        w.writerow([ps, f"{size:.0f}"] + [f"{cells[k].mean_seconds:.3f}" if k in cells else ""
                                         for k in ks])
    return buf.getvalue()

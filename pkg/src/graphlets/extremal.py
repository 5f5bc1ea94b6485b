"""Extremal per-edge search: the largest per-edge count of one pattern.

The per-edge counts on the scanned edges are exact (no neighbor sampling and
no inclusion scaling), so the reported maximum is a lower bound on the true
maximum and never an overestimate.  Scanning everything gives the exact
answer; scanning a weighted edge sample (core-number weighting concentrates
draws where dense patterns live) trades coverage for speed.  Ties go to the
smallest edge id regardless of scan order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimate import SampleDesign, _resolve_workers, sample_edges
from .graph import Graph
from .micro import MicroKernel
from .patterns import resolve_pattern


@dataclass
class ExtremalResult:
    pattern_id: int
    value: int
    edge_id: int
    endpoints: tuple[int, int]
    scanned: int
    exact: bool  # True when every edge was scanned


_FORK_STATE: dict = {}


def _chunk_best(bounds: tuple[int, int]) -> tuple[int, int]:
    lo, hi = bounds
    return _best_over(
        _FORK_STATE["g"], _FORK_STATE["ids"][lo:hi], _FORK_STATE["pid"]
    )


def _best_over(g: Graph, ids, pid: int) -> tuple[int, int]:
    kernel = MicroKernel(g)
    best_val, best_eid = -1, -1
    for e in ids:
        e = int(e)
        val = kernel.counts(e).x[pid - 1]
        if val > best_val or (val == best_val and e < best_eid):
            best_val, best_eid = val, e
    return best_val, best_eid


def max_per_edge(
    g: Graph,
    pattern,
    design: SampleDesign | None = None,
    workers: int | None = 1,
) -> ExtremalResult:
    """Maximum per-edge count of ``pattern`` over scanned (or all) edges."""
    pid = resolve_pattern(pattern)
    workers = _resolve_workers(workers)
    if design is None:
        ids = np.arange(g.m, dtype=np.int64)
    else:
        ids = np.unique(sample_edges(g, design))  # repeats add nothing to a max
    if len(ids) == 0:
        raise ValueError("edge sample is empty; nothing to scan")

    if workers == 1 or len(ids) < 2 * workers:
        best_val, best_eid = _best_over(g, ids, pid)
    else:
        import multiprocessing as mp

        batch = max(64, len(ids) // (16 * workers))
        cuts = list(range(0, len(ids), batch)) + [len(ids)]
        spans = list(zip(cuts[:-1], cuts[1:]))
        _FORK_STATE.update(g=g, ids=ids, pid=pid)
        try:
            ctx = mp.get_context("fork")
            with ctx.Pool(workers) as pool:
                parts = list(pool.imap_unordered(_chunk_best, spans))
        finally:
            _FORK_STATE.clear()
        best_val, best_eid = -1, -1
        for val, eid in parts:
            if val > best_val or (val == best_val and eid < best_eid):
                best_val, best_eid = val, eid

    u, v = g.edges[best_eid]
    return ExtremalResult(
        pattern_id=pid,
        value=int(best_val),
        edge_id=int(best_eid),
        endpoints=(int(u), int(v)),
        scanned=int(len(ids)),
        exact=len(ids) == g.m,
    )

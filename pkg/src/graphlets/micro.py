"""Per-edge pattern counts: how many instances contain one given edge.

Counts here are strict-containment: a pattern instance is attributed to edge
(u, v) only when both endpoints are among its vertices, so the edgeless and
endpoint-missing patterns (ids 2, 6, 17) are always zero and id 1 is always
one.  Summed over all edges, each count equals the global count times the
pattern's edge multiplicity (patterns.EDGE_COUNTS).

The kernel classifies the two neighborhoods into zones (common, exclusive to
either endpoint, far) and tallies adjacent zone pairs in one pass over zone
members' neighbor lists.  Each adjacent pair is credited from exactly one
side, fixed by scan order, which is what makes the neighbor-sampled variant
(p_e < 1, each scanned vertex reads ceil(d * p_e) random neighbors and
credits d/s per hit) unbiased.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, resolve_edge

# live mark codes, offsets from the per-call generation (stride 8 in marks)
_SV, _SU, _T_NEW, _T_DONE, _SU_DONE, _END, _SV_DONE = 1, 2, 3, 4, 5, 6, 7


@dataclass
class MicroEstimate:
    """Counts of pattern instances containing one edge, by pattern id - 1.

    Ints when exact (p_e = 1), floats when neighbor-sampled.  ``zones`` is
    (common, exclusive-u, exclusive-v, far) sizes.
    """

    x: list
    u: int
    v: int
    p_e: float
    zones: tuple[int, int, int, int]

    @property
    def exact(self) -> bool:
        return self.p_e >= 1.0


class MicroKernel:
    """Reusable per-edge counting state for one graph."""

    def __init__(self, g: Graph):
        self.g = g
        self._marks = np.zeros(g.n, dtype=np.int64)
        self._gen = 0

    def counts(self, edge, p_e: float = 1.0, rng=None) -> MicroEstimate:
        if not (0 < p_e <= 1):
            raise ValueError(f"p_e must be in (0, 1], got {p_e}")
        g = self.g
        u, v = resolve_edge(g, edge)
        marks = self._marks
        self._gen += 8
        gen = self._gen

        nu, nv = g.neighbors(u), g.neighbors(v)
        marks[nv] = gen + _SV
        marks[u] = gen + _END
        mu = marks[nu]
        T = nu[mu == gen + _SV]
        S_u = nu[(mu != gen + _SV) & (nu != v)]
        marks[T] = gen + _T_NEW
        marks[S_u] = gen + _SU
        S_v = nv[(marks[nv] == gen + _SV) & (nv != u)]
        marks[v] = gen + _END

        t, su, sv = len(T), len(S_u), len(S_v)
        r = g.n - t - su - sv - 2
        sample = p_e < 1.0
        if sample and rng is None:
            rng = np.random.default_rng(0)

        # adjacent zone-pair tallies; each pair credited from exactly one side
        a_tt = a_ts = a_tf = a_uu = a_vv = a_uv = a_sf = 0.0

        for w in T:
            mk, credit = self._scan(w, p_e, rng, sample)
            a_tt += credit * np.count_nonzero(mk == gen + _T_DONE)
            a_tf += credit * np.count_nonzero(mk <= gen)
            marks[w] = gen + _T_DONE
        for w in S_u:
            mk, credit = self._scan(w, p_e, rng, sample)
            a_ts += credit * np.count_nonzero(mk == gen + _T_DONE)
            a_uu += credit * np.count_nonzero(mk == gen + _SU_DONE)
            a_uv += credit * np.count_nonzero(mk == gen + _SV)
            a_sf += credit * np.count_nonzero(mk <= gen)
            marks[w] = gen + _SU_DONE
        for w in S_v:
            mk, credit = self._scan(w, p_e, rng, sample)
            a_ts += credit * np.count_nonzero(mk == gen + _T_DONE)
            a_vv += credit * np.count_nonzero(mk == gen + _SV_DONE)
            a_sf += credit * np.count_nonzero(mk <= gen)
            marks[w] = gen + _SV_DONE

        a_ss = a_uu + a_vv
        e_in = a_tt + a_ts + a_ss + a_uv
        e_cross = a_tf + a_sf
        a_ff = g.m - (g.degree(u) + g.degree(v) - 1) - e_in - e_cross

        s = su + sv
        x = [0.0] * 17
        x[0] = 1
        x[2] = t
        x[3] = s
        x[4] = r
        x[6] = a_tt
        x[7] = t * (t - 1) / 2 - a_tt + a_ts
        x[8] = (t * s - a_ts) + a_tf + a_ss
        x[9] = a_uv
        x[10] = su * (su - 1) / 2 + sv * (sv - 1) / 2 - a_ss
        x[11] = (su * sv - a_uv) + a_sf
        x[12] = t * r - a_tf
        x[13] = s * r - a_sf
        x[14] = a_ff
        x[15] = r * (r - 1) / 2 - a_ff
        x = [max(val, 0) for val in x]
        if not sample:
            x = [int(round(val)) for val in x]
        return MicroEstimate(x=x, u=u, v=v, p_e=p_e, zones=(t, su, sv, r))

    def _scan(self, w: int, p_e: float, rng, sample: bool):
        nbrs = self.g.neighbors(int(w))
        d = len(nbrs)
        if not sample:
            return self._marks[nbrs], 1.0
        s = math.ceil(d * p_e)
        picked = nbrs[rng.choice(d, size=s, replace=False)]
        return self._marks[picked], d / s


def micro_counts(g: Graph, edge, p_e: float = 1.0, seed: int = 0) -> MicroEstimate:
    """Count (or neighbor-sample) the patterns containing one edge."""
    rng = np.random.default_rng(seed) if p_e < 1.0 else None
    return MicroKernel(g).counts(edge, p_e=p_e, rng=rng)


def univariate_stats(
    g: Graph, pattern_id: int, p_e: float = 1.0, seed: int = 0, edges=None
) -> dict:
    """Five-number summary plus mean/std of one pattern's per-edge counts."""
    kernel = MicroKernel(g)
    rng = np.random.default_rng(seed) if p_e < 1.0 else None
    ids = np.arange(g.m) if edges is None else np.asarray(edges, dtype=np.int64)
    vals = np.array(
        [kernel.counts(int(e), p_e=p_e, rng=rng).x[pattern_id - 1] for e in ids],
        dtype=np.float64,
    )
    q1, med, q3 = np.quantile(vals, [0.25, 0.5, 0.75])
    return {
        "edges": int(len(vals)),
        "min": float(vals.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(vals.max()),
        "mean": float(vals.mean()),
        "std": float(vals.std()),
        "values": vals,
    }

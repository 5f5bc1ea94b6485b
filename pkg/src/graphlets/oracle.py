"""Brute-force reference counts by explicit subset enumeration.

Everything here is deliberately simple: classify each vertex subset by its
induced edge count and degree multiset, using per-vertex neighbor bitmasks.
No identity from the estimator modules is reused, so these counts can serve
as the independent check for all of them.  Cost is O(n^4); refuse anything
past ``max_n`` rather than silently crawl.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from . import patterns
from .graph import Graph


class OracleSizeError(RuntimeError):
    """Graph too large for exhaustive enumeration."""


def classify_induced(g: Graph, subset) -> int:
    """Pattern id of the subgraph induced by ``subset`` (2..4 vertices)."""
    verts = sorted(int(x) for x in subset)
    if len(set(verts)) != len(verts):
        raise ValueError("subset has repeated vertices")
    if not all(0 <= v < g.n for v in verts):
        raise ValueError("subset has out-of-range vertices")
    k = len(verts)
    if k not in (2, 3, 4):
        raise ValueError(f"subset must have 2..4 vertices, got {k}")
    bits = g.adjacency_bits()
    mask = 0
    for v in verts:
        mask |= 1 << v
    degs = tuple(sorted((bits[v] & mask).bit_count() for v in verts))
    return patterns.classify_small(k, sum(degs) // 2, degs)


def brute_force_counts(g: Graph, max_n: int = 64) -> list[int]:
    """All seventeen pattern counts by full enumeration of 2/3/4-subsets.

    Returns a list indexed by pattern id - 1.  The size-2 and complement
    entries come from the same enumeration, so every level sums to C(n, k).
    """
    if g.n > max_n:
        raise OracleSizeError(
            f"n={g.n} exceeds the enumeration cap {max_n}; "
            "raise max_n only if you accept O(n^4) work"
        )
    bits = g.adjacency_bits()
    y = [0] * 17
    y[0] = g.m
    y[1] = comb(g.n, 2) - g.m

    for a, b, c in combinations(range(g.n), 3):
        e = ((bits[a] >> b) & 1) + ((bits[a] >> c) & 1) + ((bits[b] >> c) & 1)
        y[(3, 4, 5, 6)[3 - e] - 1] += 1

    for quad in combinations(range(g.n), 4):
        mask = 0
        for v in quad:
            mask |= 1 << v
        degs = tuple(sorted((bits[v] & mask).bit_count() for v in quad))
        y[patterns.classify_small(4, sum(degs) // 2, degs) - 1] += 1
    return y


def brute_force_edge_counts(g: Graph, e) -> list[int]:
    """Per-edge pattern counts: subsets of size 2..4 that contain both ends.

    ``e`` is an edge id or an (u, v) pair that must be an edge.  Entry i-1
    counts the subsets containing both endpoints whose induced subgraph is
    pattern i; patterns that cannot hold an adjacent vertex pair (2, 6, 17)
    are therefore always zero.
    """
    u, v = _edge_endpoints(g, e)
    bits = g.adjacency_bits()
    y = [0] * 17
    y[0] = 1

    rest = [w for w in range(g.n) if w != u and w != v]
    for w in rest:
        e3 = 1 + ((bits[u] >> w) & 1) + ((bits[v] >> w) & 1)
        y[(3, 4, 5)[3 - e3] - 1] += 1

    for w, x in combinations(rest, 2):
        mask = (1 << u) | (1 << v) | (1 << w) | (1 << x)
        degs = tuple(sorted((bits[t] & mask).bit_count() for t in (u, v, w, x)))
        y[patterns.classify_small(4, sum(degs) // 2, degs) - 1] += 1
    return y


def _edge_endpoints(g: Graph, e) -> tuple[int, int]:
    if isinstance(e, (tuple, list)):
        u, v = int(e[0]), int(e[1])
        g.edge_id(u, v)  # raises KeyError when not an edge
    else:
        u, v = (int(x) for x in g.edges[int(e)])
    return u, v

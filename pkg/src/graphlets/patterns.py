"""Taxonomy of the seventeen induced patterns on 2, 3, and 4 vertices.

Patterns are numbered 1..17.  Sizes 2 and 3 are the edge / non-edge and the
four 3-vertex graphs; size 4 covers the six connected and five disconnected
4-vertex graphs.  Everything downstream (estimator, oracle, CLI output) keys
off this module so the numbering and the names exist in exactly one place.
"""

from __future__ import annotations

# id -> (name, vertex count, edge count of the pattern)
_TABLE = {
    1: ("edge", 2, 1),
    2: ("2-node-independent", 2, 0),
    3: ("triangle", 3, 3),
    4: ("2-star", 3, 2),
    5: ("3-node-1-edge", 3, 1),
    6: ("3-node-independent", 3, 0),
    7: ("4-clique", 4, 6),
    8: ("chordal-cycle", 4, 5),
    9: ("tailed-triangle", 4, 4),
    10: ("4-cycle", 4, 4),
    11: ("3-star", 4, 3),
    12: ("4-path", 4, 3),
    13: ("4-node-1-triangle", 4, 3),
    14: ("4-node-2-star", 4, 2),
    15: ("4-node-2-edge", 4, 2),
    16: ("4-node-1-edge", 4, 1),
    17: ("4-node-independent", 4, 0),
}

PATTERN_IDS = tuple(sorted(_TABLE))
NAMES = {pid: row[0] for pid, row in _TABLE.items()}
IDS_BY_NAME = {row[0]: pid for pid, row in _TABLE.items()}
SIZES = {pid: row[1] for pid, row in _TABLE.items()}
EDGE_COUNTS = {pid: row[2] for pid, row in _TABLE.items()}

CONNECTED_K4 = (7, 8, 9, 10, 11, 12)
DISCONNECTED_K4 = (13, 14, 15, 16, 17)
ALL_K4 = CONNECTED_K4 + DISCONNECTED_K4
ALL_K3 = (3, 4, 5, 6)

# Patterns whose instances contain at least one edge.  Only these admit a
# per-edge count, and only these participate in the fold-back identity
# sum_e y_i(e) = EDGE_COUNTS[i] * Y_i.
EDGE_INCIDENT = tuple(pid for pid in PATTERN_IDS if EDGE_COUNTS[pid] > 0)

# Correction weight applied to each pattern's unrestricted edge-local tally.
# The weight is the reciprocal of the number of times one pattern instance is
# hit by the tally when summed over all edges (see docs/coefficients.md for
# the incidence derivation; the set is pinned by the brute-force oracle in
# the test suite).  Patterns 1, 2, 6, 17 are closed-form complements.
WEIGHTS = {
    1: 1.0, 2: 1.0,
    3: 1 / 3, 4: 1 / 2, 5: 1.0, 6: 1.0,
    7: 1 / 6, 8: 1.0, 9: 1 / 2, 10: 1 / 4, 11: 1 / 3, 12: 1.0,
    13: 1 / 3, 14: 1 / 2, 15: 1 / 2, 16: 1.0, 17: 1.0,
}


def classify_small(k: int, edges: int, degree_multiset: tuple[int, ...]) -> int:
    """Map an induced subgraph on k in {2,3,4} vertices to its pattern id.

    ``degree_multiset`` is the sorted within-subgraph degree sequence; it is
    only consulted where the edge count alone is ambiguous (4 vertices with
    2, 3, or 4 edges).
    """
    if k == 2:
        return 1 if edges == 1 else 2
    if k == 3:
        return {3: 3, 2: 4, 1: 5, 0: 6}[edges]
    if k == 4:
        if edges == 6:
            return 7
        if edges == 5:
            return 8
        if edges == 4:
            return 10 if degree_multiset == (2, 2, 2, 2) else 9
        if edges == 3:
            if degree_multiset == (1, 1, 1, 3):
                return 11
            if degree_multiset == (1, 1, 2, 2):
                return 12
            return 13  # (0, 2, 2, 2)
        if edges == 2:
            return 15 if degree_multiset == (1, 1, 1, 1) else 14
        if edges == 1:
            return 16
        return 17
    raise ValueError(f"no pattern taxonomy for subgraphs on {k} vertices")


def resolve_pattern(key: int | str) -> int:
    """Accept a pattern id (1..17) or a pattern name and return the id."""
    if isinstance(key, str):
        if key in IDS_BY_NAME:
            return IDS_BY_NAME[key]
        if key.isdigit() and int(key) in _TABLE:
            return int(key)
        raise KeyError(f"unknown pattern {key!r}")
    if key not in _TABLE:
        raise KeyError(f"pattern id must be in 1..17, got {key}")
    return int(key)

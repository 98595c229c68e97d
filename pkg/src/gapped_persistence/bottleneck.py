"""Exact bottleneck distance between barcodes.

Finite bars may be matched to finite bars at cost max(|db|, |dd|) or sent to
the diagonal at cost half their length.  Colimit bars only match colimit bars,
at cost |db|.  The optimum is one of finitely many candidate costs, so we
binary-search that list with a perfect-matching feasibility test.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .exact import INF
from .persistence import COLIMIT, Barcode


def _scaled(bars, scale):
    # endpoints as integers in units of 1/scale
    return [(int(b * scale), d if d is COLIMIT else int(d * scale)) for b, d in bars]


def _pair_cost(x, y):
    (b1, d1), (b2, d2) = x, y
    if (d1 is COLIMIT) != (d2 is COLIMIT):
        return None
    if d1 is COLIMIT:
        return abs(b1 - b2)
    return max(abs(b1 - b2), abs(d1 - d2))


def _cost_table(left, right):
    """Square table of doubled costs over bars plus diagonal slots.

    Rows are bars of ``left`` then one diagonal slot per finite bar of ``right``;
    columns are bars of ``right`` then one diagonal slot per finite bar of
    ``left``.  ``None`` marks a forbidden edge.  Entries are ``2 * cost`` so that
    half-length diagonal costs stay integral.
    """
    a_fin = [i for i, x in enumerate(left) if x[1] is not COLIMIT]
    b_fin = [j for j, y in enumerate(right) if y[1] is not COLIMIT]
    n = len(left) + len(b_fin)
    table = [[None] * n for _ in range(n)]
    for i, x in enumerate(left):
        for j, y in enumerate(right):
            c = _pair_cost(x, y)
            table[i][j] = None if c is None else 2 * c
    for k, i in enumerate(a_fin):
        table[i][len(right) + k] = left[i][1] - left[i][0]
    for k, j in enumerate(b_fin):
        table[len(left) + k][j] = right[j][1] - right[j][0]
        for kk in range(len(a_fin)):
            table[len(left) + k][len(right) + kk] = 0
    return table


def _prepared(b1: Barcode, b2: Barcode):
    left, right = b1.expand(), b2.expand()
    scale = math.lcm(1, *(x.denominator for bar in left + right for x in bar
                          if x is not COLIMIT))
    table = _cost_table(_scaled(left, scale), _scaled(right, scale))
    cands = sorted({0} | {c for row in table for c in row if c is not None})
    return table, cands, 2 * scale


def _feasible(ranks: np.ndarray, r: int) -> bool:
    """Perfect matching using only edges whose cost rank is at most ``r``."""
    if ranks.shape[0] == 0:
        return True
    mask = ranks <= r
    # CSR arrays straight from the mask; cheaper than a dense conversion
    indptr = np.concatenate(([0], np.cumsum(mask.sum(axis=1))))
    indices = np.nonzero(mask)[1]
    graph = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr),
                       shape=mask.shape)
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool((match >= 0).all())


def candidate_costs(b1: Barcode, b2: Barcode) -> list:
    _, cands, denom = _prepared(b1, b2)
    return [Fraction(c, denom) for c in cands]


def bottleneck_distance(b1: Barcode, b2: Barcode):
    """Exact bottleneck distance; :data:`INF` when colimit-bar counts differ."""
    if len(b1.colimit_births()) != len(b2.colimit_births()):
        return INF
    if Counter(b1.expand()) == Counter(b2.expand()):
        return Fraction(0)
    table, cands, denom = _prepared(b1, b2)
    pos = {c: k for k, c in enumerate(cands)}
    forbidden = len(cands)
    ranks = np.array([[forbidden if c is None else pos[c] for c in row] for row in table],
                     dtype=np.int64).reshape(len(table), len(table))
    # the largest candidate is always feasible: every allowed edge is present
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(ranks, mid):
            hi = mid
        else:
            lo = mid + 1
    return Fraction(cands[lo], denom)

"""Slow, independent reference implementations used only by the tests.

Nothing here imports the algorithms under test: ranks come from brute-force
span enumeration (GF2) or sympy (Q), matchings from permutation enumeration.
"""

import itertools
from fractions import Fraction

import sympy


def gf2_span(columns):
    """Set of all GF2 combinations of the given column tuples."""
    if not columns:
        return set()
    n = len(columns[0])
    out = set()
    for coeffs in itertools.product((0, 1), repeat=len(columns)):
        v = tuple(sum(c * col[r] for c, col in zip(coeffs, columns)) % 2 for r in range(n))
        out.add(v)
    return out


def rank_oracle(rows, field="GF2"):
    """Rank of a list-of-rows matrix, independently of the library."""
    if not rows or not rows[0]:
        return 0
    if field == "GF2":
        cols = [tuple(r[j] % 2 for r in rows) for j in range(len(rows[0]))]
        size = len(gf2_span(cols))
        return size.bit_length() - 1
    return sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in rows]).rank()


def solve_by_enumeration(rows, v):
    """All GF2 coefficient vectors c with rows @ c == v."""
    ncols = len(rows[0]) if rows else 0
    hits = []
    for c in itertools.product((0, 1), repeat=ncols):
        if all(sum(a * b for a, b in zip(r, c)) % 2 == x % 2 for r, x in zip(rows, v)):
            hits.append(c)
    return hits


def matmul_oracle(a, b, mod2=True):
    out = [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
           for i in range(len(a))]
    return [[x % 2 for x in row] for row in out] if mod2 else out


COLIM = "colimit"


def bottleneck_oracle(bars1, bars2):
    """Bottleneck distance by enumerating every partial matching.

    Bars are ``(birth, death)`` with ``death == COLIM`` for colimit bars.
    """
    inf1 = sorted(b for b, d in bars1 if d == COLIM)
    inf2 = sorted(b for b, d in bars2 if d == COLIM)
    if len(inf1) != len(inf2):
        return float("inf")
    fin1 = [(Fraction(b), Fraction(d)) for b, d in bars1 if d != COLIM]
    fin2 = [(Fraction(b), Fraction(d)) for b, d in bars2 if d != COLIM]
    best_inf = Fraction(0) if not inf1 else min(
        max(abs(Fraction(x) - Fraction(y)) for x, y in zip(inf1, p))
        for p in itertools.permutations(inf2))
    # pad with diagonal slots (None) and try every assignment
    left = fin1 + [None] * len(fin2)
    right = fin2 + [None] * len(fin1)
    best_fin = None
    for p in itertools.permutations(range(len(right))):
        worst = Fraction(0)
        for i, j in enumerate(p):
            x, y = left[i], right[j]
            if x is None and y is None:
                c = Fraction(0)
            elif x is None:
                c = (y[1] - y[0]) / 2
            elif y is None:
                c = (x[1] - x[0]) / 2
            else:
                c = max(abs(x[0] - y[0]), abs(x[1] - y[1]))
            worst = max(worst, c)
        if best_fin is None or worst < best_fin:
            best_fin = worst
    return max(best_inf, best_fin or Fraction(0))


def rank_from_bars(bars, grid, i, j):
    """#bars containing grid[i]..grid[j]; ``j == len(grid)`` means the colimit."""
    n = len(grid)
    total = 0
    for b, d, m in bars:
        if j == n:
            if d == COLIM and b <= grid[i]:
                total += m
        elif b <= grid[i] and (d == COLIM or grid[j] <= d):
            total += m
    return total

"""Gapped modules over the partial order ``s <=_lam t  iff  s == t or s <= t - lam``.

A :class:`GappedModule` lives on a finite grid of admissible parameters (the
window) with a declared forbidden spectrum.  Maps are stored for a generating
set of comparable pairs and composed on demand; totally ordered persistence
modules are recovered by restricting along gapped sequences.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence

from .exact import INF, Field, Matrix, in_column_span
from .persistence import PersistenceModule, ValidationError, Violation

#: C_a = DEFAULT_C_FACTOR / lambda' unless a constant is passed explicitly.
DEFAULT_C_FACTOR = Fraction(100)


def leq_gap(eta, eta2, lam) -> bool:
    """``eta <=_lam eta2``."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return eta == eta2 or eta <= eta2 - lam


@dataclass(frozen=True, eq=False)
class GappedModule:
    """Finite presentation of a lambda-gapped module.

    ``maps`` is keyed by grid-index pairs ``(i, j)`` with ``grid[i] <_lam grid[j]``
    and must contain at least every cover relation; other structure maps are
    derived by composing along covers.
    """

    lam: Fraction
    spectrum: tuple
    grid: tuple
    dims: tuple
    maps: Mapping
    colimit_dim: int
    colimit_maps: tuple
    field: Field = Field.GF2
    unit: Optional[str] = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "spectrum", tuple(Fraction(x) for x in self.spectrum))
        object.__setattr__(self, "grid", tuple(Fraction(x) for x in self.grid))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "maps", {(int(i), int(j)): m for (i, j), m in self.maps.items()})
        object.__setattr__(self, "colimit_maps", tuple(self.colimit_maps))

    def __len__(self):
        return len(self.grid)

    def index_of(self, value) -> int:
        try:
            return self.grid.index(Fraction(value))
        except ValueError:
            raise ValueError(f"{value} is not a grid value") from None

    def _thresholds(self) -> list[int]:
        # thr[i] = first index j > i with grid[j] >= grid[i] + lam
        thr = self._cache.get("thr")
        if thr is None:
            grid, lam = self.grid, self.lam
            thr, j = [], 0
            # thresholds only move right, so one sweep suffices
            for i, x in enumerate(grid):
                j = max(j, i + 1)
                while j < len(grid) and grid[j] - x < lam:
                    j += 1
                thr.append(j)
            self._cache["thr"] = thr
        return thr

    def comparable(self, i: int, j: int) -> bool:
        return i == j or j >= self._thresholds()[i]

    def covers(self, i: int) -> list[int]:
        """Indices ``j`` such that ``grid[i] <_lam grid[j]`` with nothing in between."""
        thr = self._thresholds()
        j0 = thr[i]
        if j0 >= len(self.grid):
            return []
        # thr[j0] is the first point lam above grid[j0] (or j0 + 1 when lam = 0)
        return list(range(j0, thr[j0]))

    def cover_pairs(self) -> list[tuple[int, int]]:
        pairs = self._cache.get("covers")
        if pairs is None:
            pairs = [(i, j) for i in range(len(self.grid)) for j in self.covers(i)]
            self._cache["covers"] = pairs
        return list(pairs)

    def map(self, i: int, j: int) -> Matrix:
        """Structure map V(grid[i]) -> V(grid[j]) for comparable indices."""
        if not self.comparable(i, j):
            raise ValueError(f"grid values {self.grid[i]} and {self.grid[j]} are not "
                             f"comparable for lambda = {self.lam}")
        if i == j:
            return Matrix.identity(self.dims[i], self.field)
        if (i, j) in self.maps:
            return self.maps[(i, j)]
        cached = self._cache.get((i, j))
        if cached is not None:
            return cached
        k = next(k for k in range(i + 1, j + 1)
                 if self.comparable(i, k) and self.comparable(k, j))
        if (i, k) not in self.maps:
            raise KeyError(f"missing generating map {(i, k)}")
        out = self.map(k, j) @ self.maps[(i, k)]
        self._cache[(i, j)] = out
        return out

    @classmethod
    def from_persistence(cls, pm: PersistenceModule, lam=0, spectrum=()) -> "GappedModule":
        """Read a totally ordered module as a lam-gapped one (comparable pairs only)."""
        lam = Fraction(lam)
        maps = {}
        proto = cls(lam, spectrum, pm.grid, pm.dims, {}, pm.colimit_dim, pm.colimit_maps,
                    pm.field, pm.unit)
        for i, j in proto.cover_pairs():
            m = Matrix.identity(pm.dims[i], pm.field)
            for k in range(i, j):
                m = pm.step_maps[k] @ m
            maps[(i, j)] = m
        return cls(lam, spectrum, pm.grid, pm.dims, maps, pm.colimit_dim, pm.colimit_maps,
                   pm.field, pm.unit)


def validate_gapped(gm: GappedModule) -> Optional[Violation]:
    """Exhaustive structural check; returns the first violation or ``None``."""
    n = len(gm.grid)
    if gm.lam < 0:
        return Violation("lambda", "lambda must be non-negative")
    if len(gm.dims) != n:
        return Violation("dims", f"{len(gm.dims)} dims for {n} grid points")
    if any(d < 0 for d in gm.dims) or gm.colimit_dim < 0:
        return Violation("dims", "negative dimension")
    for i in range(n - 1):
        if not gm.grid[i] < gm.grid[i + 1]:
            return Violation("grid", "grid must be strictly increasing", (gm.grid[i],))
    for i in range(len(gm.spectrum) - 1):
        if not gm.spectrum[i] < gm.spectrum[i + 1]:
            return Violation("spectrum", "spectrum must be strictly increasing",
                             (gm.spectrum[i],))
    clash = sorted(set(gm.grid) & set(gm.spectrum))
    if clash:
        return Violation("grid_spectrum", "grid value lies on the spectrum", (clash[0],))
    if len(gm.colimit_maps) != n:
        return Violation("colimit_maps", f"expected {n} colimit maps")
    for i, m in enumerate(gm.colimit_maps):
        if m.field is not gm.field or m.shape != (gm.colimit_dim, gm.dims[i]):
            return Violation("colimit_maps", f"bad colimit map shape {m.shape}", (gm.grid[i],))
    for (i, j), m in sorted(gm.maps.items()):
        if not (0 <= i < n and 0 <= j < n) or not gm.comparable(i, j):
            return Violation("maps", "map stored for an incomparable pair", (i, j))
        if m.field is not gm.field or m.shape != (gm.dims[j], gm.dims[i]):
            return Violation("maps", f"bad map shape {m.shape}", (gm.grid[i], gm.grid[j]))
        if i == j and m != Matrix.identity(gm.dims[i], gm.field):
            return Violation("identity", "self-map is not the identity", (gm.grid[i],))
    for i, j in gm.cover_pairs():
        if (i, j) not in gm.maps:
            return Violation("maps", "missing map for a cover pair", (gm.grid[i], gm.grid[j]))
    thr = gm._thresholds()
    comparable = [range(thr[i], n) for i in range(n)]
    if gm.field is Field.GF2:
        return _check_triples_gf2(gm, comparable)
    for r in range(n):
        for s in comparable[r]:
            rs = gm.map(r, s)
            for t in comparable[s]:
                if gm.map(s, t) @ rs != gm.map(r, t):
                    return _broken_triple(gm, r, s, t)
            if gm.colimit_maps[s] @ rs != gm.colimit_maps[r]:
                return _broken_colimit(gm, r, s)
    return None


def _broken_triple(gm, r, s, t) -> Violation:
    return Violation("functoriality", "composition does not commute",
                     (gm.grid[r], gm.grid[s], gm.grid[t]))


def _broken_colimit(gm, r, s) -> Violation:
    return Violation("colimit_compatibility",
                     "colimit map does not factor through the structure map",
                     (gm.grid[r], gm.grid[s]))


def _check_triples_gf2(gm: GappedModule, comparable) -> Optional[Violation]:
    # same exhaustive check with every matrix packed as row bitmasks
    def pack(m: Matrix) -> tuple:
        return tuple(sum(1 << j for j, x in enumerate(row) if x) for row in m.entries)

    def mul(a: tuple, b: tuple) -> tuple:
        out = []
        for row in a:
            acc, k = 0, 0
            while row:
                if row & 1:
                    acc ^= b[k]
                row >>= 1
                k += 1
            out.append(acc)
        return tuple(out)

    n = len(gm.grid)
    thr = gm._thresholds()
    stored = {key: pack(m) for key, m in gm.maps.items()}
    packed = {}
    # derive long maps in the packed form, through the same intermediate
    # point that GappedModule.map picks
    for r in range(n - 1, -1, -1):
        for s in comparable[r]:
            if (r, s) in stored:
                packed[(r, s)] = stored[(r, s)]
                continue
            k = next(k for k in range(thr[r], s + 1) if k == s or s >= thr[k])
            if k == s or (r, k) not in stored:
                packed[(r, s)] = pack(gm.map(r, s))
            else:
                packed[(r, s)] = mul(packed[(k, s)], stored[(r, k)])
    cmaps = [pack(m) for m in gm.colimit_maps]
    for r in range(n):
        for s in comparable[r]:
            rs = packed[(r, s)]
            for t in comparable[s]:
                if mul(packed[(s, t)], rs) != packed[(r, t)]:
                    return _broken_triple(gm, r, s, t)
            if mul(cmaps[s], rs) != cmaps[r]:
                return _broken_colimit(gm, r, s)
    return None


def check_gapped(gm: GappedModule) -> GappedModule:
    """Raise :class:`ValidationError` unless ``gm`` is valid.  Success is memoized."""
    if gm._cache.get("valid"):
        return gm
    v = validate_gapped(gm)
    if v is not None:
        raise ValidationError(v)
    gm._cache["valid"] = True
    return gm


def shift_gapped(gm: GappedModule, s) -> GappedModule:
    """Translate grid and spectrum by ``s``."""
    s = Fraction(s)
    return GappedModule(gm.lam, tuple(x + s for x in gm.spectrum), tuple(x + s for x in gm.grid),
                        gm.dims, dict(gm.maps), gm.colimit_dim, gm.colimit_maps, gm.field,
                        gm.unit)


# --------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class GappedSequence:
    """Finite window of a gapped index sequence.

    Position ``i`` (possibly negative) is ``values[origin_index + i]``; the
    origin is the element labelled 0.
    """

    values: tuple
    lambda_prime: Fraction
    origin_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))
        object.__setattr__(self, "lambda_prime", Fraction(self.lambda_prime))
        if self.lambda_prime < 0:
            raise ValueError("lambda_prime must be non-negative")
        if self.values and not 0 <= self.origin_index < len(self.values):
            raise ValueError(f"origin index {self.origin_index} outside the window")
        for a, b in zip(self.values, self.values[1:]):
            if not (a < b and b - a >= self.lambda_prime):
                raise ValueError(f"gap {b - a} between {a} and {b} is below "
                                 f"lambda' = {self.lambda_prime}")

    def __len__(self):
        return len(self.values)

    @property
    def positions(self) -> range:
        return range(-self.origin_index, len(self.values) - self.origin_index)

    @property
    def origin(self) -> Fraction:
        return self.values[self.origin_index]

    def at(self, i: int) -> Fraction:
        k = self.origin_index + i
        if not 0 <= k < len(self.values):
            raise IndexError(f"position {i} outside the window")
        return self.values[k]


def is_admissible_sequence(seq: GappedSequence, gm: GappedModule) -> bool:
    grid = set(gm.grid)
    spectrum = set(gm.spectrum)
    if any(v not in grid or v in spectrum for v in seq.values):
        return False
    return all(b - a >= gm.lam and a < b for a, b in zip(seq.values, seq.values[1:]))


def _o_bound(c_a, i: int) -> Fraction:
    return 1 / (Fraction(c_a) * 2 ** (abs(i) + 1))


def default_c(lambda_prime) -> Fraction:
    return DEFAULT_C_FACTOR / Fraction(lambda_prime)


def is_almost_optimal(seq: GappedSequence, lambda_prime=None, c_a=None) -> bool:
    """Every gap is ``lambda' + o_i`` with ``0 <= o_i <= 1 / (c_a * 2**(|i|+1))``.

    The gap from position ``i`` to ``i + 1`` carries index ``i``.
    """
    lp = seq.lambda_prime if lambda_prime is None else Fraction(lambda_prime)
    if lp <= 0:
        raise ValueError("almost optimality needs lambda' > 0")
    c_a = default_c(lp) if c_a is None else Fraction(c_a)
    if c_a <= 1 / lp:
        raise ValueError(f"c_a = {c_a} must exceed 1/lambda' = {1 / lp}")
    for k in range(len(seq.values) - 1):
        i = k - seq.origin_index
        o = seq.values[k + 1] - seq.values[k] - lp
        if not 0 <= o <= _o_bound(c_a, i):
            return False
    return True


def is_normalized(seq: GappedSequence, lambda_prime=None, c_a=None) -> bool:
    lp = seq.lambda_prime if lambda_prime is None else Fraction(lambda_prime)
    if not seq.values:
        return False
    return is_almost_optimal(seq, lp, c_a) and 0 <= seq.origin <= lp


def index_shift(seq: GappedSequence, n: int) -> GappedSequence:
    """The sequence whose ``i``-th element is ``seq``'s ``(i + n)``-th."""
    k = seq.origin_index + n
    if not 0 <= k < len(seq.values):
        raise ValueError(f"shift by {n} moves the origin outside the window")
    return GappedSequence(seq.values, seq.lambda_prime, k)


def normalize_sequence(seq: GappedSequence, lambda_prime=None, c_a=None
                       ) -> tuple[GappedSequence, int]:
    """Translate by ``m * lambda'`` so the origin lands in ``[0, lambda']``.

    ``m = floor(origin / lambda')``, except that an origin already in the
    closed interval gives ``m = 0``.
    """
    lp = seq.lambda_prime if lambda_prime is None else Fraction(lambda_prime)
    if not seq.values or not is_almost_optimal(seq, lp, c_a):
        raise ValueError("only almost optimal sequences can be normalized")
    eta0 = seq.origin
    m = 0 if 0 <= eta0 <= lp else math.floor(eta0 / lp)
    shifted = GappedSequence(tuple(v - m * lp for v in seq.values), seq.lambda_prime,
                             seq.origin_index)
    return shifted, m


def restrict(gm: GappedModule, seq: GappedSequence, index: str = "value") -> PersistenceModule:
    """Totally ordered module along ``seq``.

    ``index="value"`` parametrizes by the sequence values; ``index="position"``
    by the integer positions relative to the origin.
    """
    if not is_admissible_sequence(seq, gm):
        raise ValueError("sequence is not admissible for this gapped module")
    idx = [gm.index_of(v) for v in seq.values]
    steps = tuple(gm.map(a, b) for a, b in zip(idx, idx[1:]))
    if index == "value":
        grid = seq.values
    elif index == "position":
        grid = tuple(Fraction(p) for p in seq.positions)
    else:
        raise ValueError(f"unknown index mode {index!r}")
    return PersistenceModule(grid, tuple(gm.dims[i] for i in idx), steps, gm.colimit_dim,
                             tuple(gm.colimit_maps[i] for i in idx), gm.field, gm.unit)


def full_sequence(gm: GappedModule) -> GappedSequence:
    """The whole grid as one sequence; admissible only when all gaps are >= lambda."""
    gaps = [b - a for a, b in zip(gm.grid, gm.grid[1:])]
    return GappedSequence(gm.grid, min(gaps + [gm.lam]) if gaps else gm.lam)


# --------------------------------------------------------------------------
# spectral invariants


def _coerce_class(gm, a):
    if len(a) != gm.colimit_dim:
        raise ValueError(f"class of length {len(a)} in a colimit of dimension {gm.colimit_dim}")
    return tuple(gm.field.coerce(x) for x in a)


def _image_test(grid, colimit_maps, a, candidates=None):
    # grid and candidates are increasing, so the first hit is the least value
    for k in (range(len(grid)) if candidates is None else candidates):
        if in_column_span(colimit_maps[k], a) is not None:
            return grid[k]
    return INF


def _extend(gm, start_index, lp, c_a, origin_position=0, direction=1):
    """Greedy almost-optimal continuation from ``grid[start_index]``."""
    out = []
    k, pos = start_index, origin_position
    grid = gm.grid
    while True:
        gap_index = pos if direction > 0 else pos - 1
        bound = _o_bound(c_a, gap_index)
        if direction > 0:
            lo, hi = grid[k] + lp, grid[k] + lp + bound
            nxt = next((j for j in range(k + 1, len(grid)) if lo <= grid[j] <= hi), None)
        else:
            lo, hi = grid[k] - lp - bound, grid[k] - lp
            nxt = next((j for j in range(k - 1, -1, -1) if lo <= grid[j] <= hi), None)
        if nxt is None:
            return out
        out.append(nxt)
        k, pos = nxt, pos + direction


def almost_optimal_sequence_from(gm: GappedModule, origin_index: int, lambda_prime,
                                 c_a=None) -> GappedSequence:
    lp = Fraction(lambda_prime)
    c_a = default_c(lp) if c_a is None else Fraction(c_a)
    down = _extend(gm, origin_index, lp, c_a, 0, -1)
    up = _extend(gm, origin_index, lp, c_a, 0, 1)
    idx = list(reversed(down)) + [origin_index] + up
    return GappedSequence(tuple(gm.grid[i] for i in idx), lp, len(down))


def normalized_sequences(gm: GappedModule, lambda_prime=None, c_a=None
                         ) -> Iterator[GappedSequence]:
    """One greedy lambda'-normalized window per admissible origin in ``[0, lambda']``."""
    lp = gm.lam if lambda_prime is None else Fraction(lambda_prime)
    if lp < gm.lam or lp <= 0:
        raise ValueError("need lambda' >= lambda and lambda' > 0")
    for k, v in enumerate(gm.grid):
        if 0 <= v <= lp:
            yield almost_optimal_sequence_from(gm, k, lp, c_a)


def almost_optimal_sequences(gm: GappedModule, lambda_prime=None, c_a=None
                             ) -> Iterator[GappedSequence]:
    """One greedy lambda'-almost-optimal window per grid point used as origin."""
    lp = gm.lam if lambda_prime is None else Fraction(lambda_prime)
    if lp < gm.lam or lp <= 0:
        raise ValueError("need lambda' >= lambda and lambda' > 0")
    for k in range(len(gm.grid)):
        yield almost_optimal_sequence_from(gm, k, lp, c_a)


def gapped_spectral_invariant(gm: GappedModule, a: Sequence, cross_check: bool = False):
    """Least grid value whose colimit map hits ``a`` (``INF`` for ``a == 0``).

    Images need not be nested along the numeric order when ``lam > 0``, so
    every grid point is tested.  With ``cross_check`` the restriction-based
    value over normalized sequences must agree up to one grid step.
    """
    check_gapped(gm)
    a = _coerce_class(gm, a)
    if not any(a):
        return INF
    c = _image_test(gm.grid, gm.colimit_maps, a)
    if cross_check:
        other = restriction_spectral_invariant(gm, a)
        if c == INF or other == INF:
            ok = c == other
        else:
            later = [g for g in gm.grid if g > c]
            ok = c <= other <= (later[0] if later else c)
        if not ok:
            raise AssertionError(f"image test gives {c}, restriction search gives {other}")
    return c


def _restriction_value(gm, seq, a):
    idx = [gm.index_of(v) for v in seq.values]
    return _image_test(gm.grid, gm.colimit_maps, a, idx)


def reachable_indices(gm: GappedModule, origin_index: int, lambda_prime, c_a=None,
                      offset=0) -> set[int]:
    """Grid indices lying on some almost optimal window with the given origin.

    With ``offset`` every value of the window is moved by ``-offset`` and must
    still land on the grid (the translated window is what gets restricted);
    the returned indices refer to the translated points.
    """
    lp = Fraction(lambda_prime)
    c_a = default_c(lp) if c_a is None else Fraction(c_a)
    grid = gm.grid
    on_grid = {x: k for k, x in enumerate(grid)}
    offset = Fraction(offset)
    # translated index of every grid point whose translate is on the grid
    moved = {k: on_grid[x - offset] for k, x in enumerate(grid) if x - offset in on_grid}
    if origin_index not in moved:
        return set()
    seen = {(origin_index, 0)}
    stack = [(origin_index, 0)]
    while stack:
        k, pos = stack.pop()
        # positions only move away from the origin along each branch
        directions = (1, -1) if pos == 0 else ((1,) if pos > 0 else (-1,))
        for direction in directions:
            if direction > 0:
                b = _o_bound(c_a, pos)
                lo_v, hi_v = grid[k] + lp, grid[k] + lp + b
            else:
                b = _o_bound(c_a, pos - 1)
                lo_v, hi_v = grid[k] - lp - b, grid[k] - lp
            for j in range(bisect_left(grid, lo_v), len(grid)):
                if grid[j] > hi_v:
                    break
                if j not in moved:
                    continue
                state = (j, pos + direction)
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
    return {moved[k] for k, _ in seen}


def _window_points(gm: GappedModule, kind: str, lambda_primes, c_a) -> list[int]:
    """Grid points visited by the window family ``kind``; class-independent, memoized."""
    lps = tuple(Fraction(x) for x in (lambda_primes or [gm.lam]))
    key = ("windows", kind, lps, None if c_a is None else Fraction(c_a))
    if key in gm._cache:
        return gm._cache[key]
    points: set[int] = set()
    for lp in lps:
        for k, v in enumerate(gm.grid):
            if kind == "normalized":
                if 0 <= v <= lp:
                    points |= reachable_indices(gm, k, lp, c_a)
            else:
                m = 0 if 0 <= v <= lp else math.floor(v / lp)
                points |= reachable_indices(gm, k, lp, c_a, offset=m * lp)
    out = sorted(points)
    gm._cache[key] = out
    return out


def restriction_spectral_invariant(gm: GappedModule, a: Sequence, lambda_primes=None,
                                   c_a=None):
    """Infimum over all normalized windows of the restriction's spectral invariant.

    The image test along a window depends only on which grid points it visits,
    so the infimum is the image test over every point reachable from some
    origin in ``[0, lambda']``.  For ``lam == 0`` the whole grid is the finest
    restriction and is used directly.
    """
    a = _coerce_class(gm, a)
    if not any(a):
        return INF
    if gm.lam == 0 and lambda_primes is None:
        return _restriction_value(gm, full_sequence(gm), a)
    return _image_test(gm.grid, gm.colimit_maps, a,
                       _window_points(gm, "normalized", lambda_primes, c_a))


def cbar_spectral_invariant(gm: GappedModule, a: Sequence, lambda_primes=None, c_a=None):
    """Infimum over almost optimal windows, each moved to its normalization first.

    An origin ``o`` is translated by ``m * lambda'`` with ``m`` from
    :func:`normalize_sequence`; only windows whose translate lies on the grid
    are restricted.
    """
    a = _coerce_class(gm, a)
    if not any(a):
        return INF
    if gm.lam == 0 and lambda_primes is None:
        return _restriction_value(gm, full_sequence(gm), a)
    return _image_test(gm.grid, gm.colimit_maps, a,
                       _window_points(gm, "translated", lambda_primes, c_a))

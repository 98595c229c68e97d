"""Random instances for property tests, the acceptance suite and the demos.

Gapped modules come from a *chain model*: a totally ordered module ``U`` on
levels ``u_0 < ... < u_K`` and a wobble function ``w`` with ``|w| <= lam/2``.
Setting ``V_eta = U(level(eta + w(eta)))`` respects ``<=_lam`` (gaps of at least
``lam`` absorb the wobble), so every composition commutes by construction while
nearby parameters can still be incomparable and out of order.
"""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import Field, Matrix, inverse, rank
from .gapped import (GappedModule, GappedSequence, _o_bound, default_c, normalized_sequences)
from .persistence import PersistenceModule, composite_map

SEED_ENV = "GAPPED_PERSIST_SEED"


def seed_from_env(default: int = 20240611) -> int:
    return int(os.environ.get(SEED_ENV, default))


def rng_from_env(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed_from_env() + offset)


def random_matrix(rng, rows: int, cols: int, field: Field = Field.GF2,
                  max_rank: Optional[int] = None) -> Matrix:
    if field is Field.GF2:
        data = tuple(map(tuple, rng.integers(0, 2, size=(rows, cols)).tolist()))
    else:
        data = tuple(tuple(Fraction(x) for x in row)
                     for row in rng.integers(-2, 3, size=(rows, cols)).tolist())
    m = Matrix(field, rows, cols, data)
    if max_rank is not None and rank(m) > max_rank and rows and cols:
        k = max_rank
        left = random_matrix(rng, rows, k, field)
        right = random_matrix(rng, k, cols, field)
        m = left @ right
    return m


def random_invertible(rng, n: int, field: Field = Field.GF2) -> Matrix:
    while True:
        m = random_matrix(rng, n, n, field)
        if rank(m) == n:
            return m


def random_grid(rng, n: int, denominator: int = 12, span: int = 60) -> tuple:
    """``n`` distinct sorted rationals with the given denominator."""
    nums = rng.choice(np.arange(-span, span), size=n, replace=False)
    return tuple(Fraction(int(x), denominator) for x in sorted(nums))


def random_persistence_module(rng, n_points: int, max_dim: int, field: Field = Field.GF2,
                              grid: Optional[Sequence] = None,
                              colimit_dim: Optional[int] = None) -> PersistenceModule:
    """Random chain module; the colimit is a random image of the last space."""
    grid = tuple(grid) if grid is not None else random_grid(rng, n_points)
    n = len(grid)
    dims = tuple(int(d) for d in rng.integers(0, max_dim + 1, size=n))
    steps = []
    for i in range(n - 1):
        cap = int(rng.integers(0, max(dims[i], dims[i + 1]) + 1))
        steps.append(random_matrix(rng, dims[i + 1], dims[i], field, max_rank=cap))
    if colimit_dim is None:
        colimit_dim = int(rng.integers(0, max_dim + 1))
    top = random_matrix(rng, colimit_dim, dims[-1], field) if n else None
    pm = PersistenceModule(grid, dims, tuple(steps), colimit_dim, (), field)
    cmaps = tuple(top @ composite_map(pm, i, n - 1) for i in range(n))
    return PersistenceModule(grid, dims, tuple(steps), colimit_dim, cmaps, field)


def chain_gapped_module(chain: PersistenceModule, grid: Sequence, lam, levels: Sequence[int],
                        spectrum: Sequence = (), bases: Optional[Sequence[Matrix]] = None,
                        unit: Optional[str] = None) -> GappedModule:
    """Gapped module with ``V(grid[i]) = chain(levels[i])``, optionally re-based.

    ``levels`` must be non-decreasing along every ``<=_lam`` relation.  With
    ``bases``, the space at ``grid[i]`` is identified through ``bases[i]``.
    """
    grid = tuple(Fraction(x) for x in grid)
    lam = Fraction(lam)
    f = chain.field
    dims = tuple(chain.dims[k] for k in levels)
    inv = [inverse(b) for b in bases] if bases is not None else None
    proto = GappedModule(lam, spectrum, grid, dims, {}, chain.colimit_dim,
                         tuple(Matrix.zeros(chain.colimit_dim, d, f) for d in dims), f)
    maps = {}
    between = {}
    for i, j in proto.cover_pairs():
        if levels[i] > levels[j]:
            raise ValueError("levels decrease along a comparable pair")
        key = (levels[i], levels[j])
        if key not in between:
            between[key] = composite_map(chain, *key)
        m = between[key]
        if bases is not None:
            m = bases[j] @ m @ inv[i]
        maps[(i, j)] = m
    cmaps = []
    for i, k in enumerate(levels):
        c = chain.colimit_maps[k]
        cmaps.append(c @ inv[i] if bases is not None else c)
    return GappedModule(lam, spectrum, grid, dims, maps, chain.colimit_dim, tuple(cmaps), f,
                        unit)


def level_of(chain_grid: Sequence, t) -> int:
    """Largest chain index whose value is ``<= t`` (0 below the chain)."""
    k = 0
    for i, u in enumerate(chain_grid):
        if u <= t:
            k = i
    return k


def random_wobble(rng, lam, n: int, denominator: int = 8) -> list[Fraction]:
    lam = Fraction(lam)
    return [lam / 2 * Fraction(int(x), denominator)
            for x in rng.integers(-denominator, denominator + 1, size=n)]


def lattice_window(lam, per_gap: int, lo_steps: int, hi_steps: int) -> tuple:
    """Grid ``{j * lam / per_gap}`` for ``j`` from ``-lo_steps*per_gap`` to ``hi_steps*per_gap``."""
    lam = Fraction(lam)
    h = lam / per_gap
    return tuple(j * h for j in range(-lo_steps * per_gap, hi_steps * per_gap + 1))


def random_gapped_module(rng, lam, grid: Sequence, spectrum: Sequence = (), max_dim: int = 5,
                         field: Field = Field.GF2, chain_points: int = 12,
                         wobble: Optional[Sequence] = None, rebase: bool = True,
                         chain: Optional[PersistenceModule] = None) -> GappedModule:
    """Chain-model gapped module on ``grid`` with ``|wobble| <= lam / 2``."""
    lam = Fraction(lam)
    grid = tuple(Fraction(x) for x in grid)
    if chain is None:
        lo, hi = grid[0] - lam, grid[-1] + lam
        width = hi - lo
        cgrid = sorted({lo + width * Fraction(int(x), 96)
                        for x in rng.integers(0, 97, size=chain_points)})
        chain = random_persistence_module(rng, len(cgrid), max_dim, field, grid=cgrid)
    if wobble is None:
        wobble = random_wobble(rng, lam, len(grid)) if lam > 0 else [Fraction(0)] * len(grid)
    levels = [level_of(chain.grid, x + w) for x, w in zip(grid, wobble)]
    bases = ([random_invertible(rng, chain.dims[k], field) for k in levels] if rebase else None)
    return chain_gapped_module(chain, grid, lam, levels, spectrum, bases)


def random_normalized_sequence(rng, gm: GappedModule, lambda_prime=None, c_a=None
                               ) -> Optional[GappedSequence]:
    """Normalized window built by random admissible choices at every step."""
    lp = gm.lam if lambda_prime is None else Fraction(lambda_prime)
    c_a = default_c(lp) if c_a is None else Fraction(c_a)
    grid = gm.grid
    origins = [k for k, v in enumerate(grid) if 0 <= v <= lp]
    if not origins:
        return None
    o = origins[int(rng.integers(0, len(origins)))]

    def walk(direction):
        out, k, pos = [], o, 0
        while True:
            gap = pos if direction > 0 else pos - 1
            b = _o_bound(c_a, gap)
            if direction > 0:
                lo_v, hi_v = grid[k] + lp, grid[k] + lp + b
            else:
                lo_v, hi_v = grid[k] - lp - b, grid[k] - lp
            cands = range(bisect_left(grid, lo_v), bisect_right(grid, hi_v))
            if not cands:
                return out
            k = cands[int(rng.integers(0, len(cands)))]
            out.append(k)
            pos += direction

    down, up = walk(-1), walk(1)
    idx = list(reversed(down)) + [o] + up
    return GappedSequence(tuple(grid[i] for i in idx), lp, len(down))


def jittered_lattice(rng, lam, per_gap: int, lo_steps: int, hi_steps: int,
                     n_jitter: int = 4) -> tuple:
    """Lattice window plus a few points offset by amounts small enough to be
    admissible perturbations at any gap index in the window."""
    base = list(lattice_window(lam, per_gap, lo_steps, hi_steps))
    c = default_c(lam)
    tiny = _o_bound(c, len(base) + 2)
    extra = set()
    for x in rng.choice(len(base), size=min(n_jitter, len(base)), replace=False):
        extra.add(base[int(x)] + tiny * int(rng.integers(1, 3)))
    return tuple(sorted(set(base) | extra))


def quiet_chain(rng, lo, hi, n_points: int, max_dim: int, field: Field = Field.GF2
                ) -> PersistenceModule:
    """Chain that is zero at ``lo`` and already equal to its colimit at ``hi``.

    Random structure lives strictly between the two ends, so restrictions that
    start below ``lo`` and end above ``hi`` see every bar in full.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    width = hi - lo
    inner = sorted({lo + width * Fraction(int(x), 97) for x in rng.integers(1, 97, size=n_points)})
    core = random_persistence_module(rng, len(inner), max_dim, field, grid=inner)
    top = Matrix.identity(core.colimit_dim, field)
    grid = (lo,) + tuple(inner) + (hi,)
    dims = (0,) + core.dims + (core.colimit_dim,)
    steps = ((Matrix.zeros(core.dims[0], 0, field),) + core.step_maps
             + (core.colimit_maps[-1],))
    cmaps = (Matrix.zeros(core.colimit_dim, 0, field),) + core.colimit_maps + (top,)
    return PersistenceModule(grid, dims, steps, core.colimit_dim, cmaps, field)


def progression_grid(rng, lam, per_gap: int, lo_steps: int, hi_steps: int,
                     n_progressions: int = 2) -> tuple:
    """Lattice window plus upward progressions ``x + t + j*lam`` with a tiny ``t``.

    ``t`` is an admissible perturbation at every gap index in the window, so
    normalized sequences may hop onto a progression and never get stuck there.
    """
    lam = Fraction(lam)
    base = lattice_window(lam, per_gap, lo_steps, hi_steps)
    t = _o_bound(default_c(lam), len(base))
    top = base[-1]
    extra = set()
    for x in rng.choice(len(base), size=min(n_progressions, len(base)), replace=False):
        v = base[int(x)] + t
        while v <= top + t:
            extra.add(v)
            v += lam
    return tuple(sorted(set(base) | extra))


def interleaved_pair(rng, lam, per_gap: int, lo_steps: int, hi_steps: int,
                     chain: PersistenceModule, spectrum: Sequence = ()):
    """Two wobbled copies of ``chain`` on one lattice, with a lam-interleaving.

    Returns ``(gm_v, gm_w, seq, phi, psi)`` where ``seq`` is the step-``lam``
    sequence through the bottom of the lattice and ``phi``/``psi`` interleave the
    restrictions along ``seq`` with a shift of one position.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("interleaved pairs need lam > 0")
    grid = lattice_window(lam, per_gap, lo_steps, hi_steps)
    f = chain.field
    sides = []
    for _ in range(2):
        wobble = random_wobble(rng, lam, len(grid))
        levels = [level_of(chain.grid, x + w) for x, w in zip(grid, wobble)]
        bases = [random_invertible(rng, chain.dims[k], f) for k in levels]
        gm = chain_gapped_module(chain, grid, lam, levels, spectrum, bases)
        sides.append((gm, levels, bases))
    idx = list(range(0, len(grid), per_gap))
    seq = GappedSequence(tuple(grid[i] for i in idx), lam)

    def morphisms(src, dst):
        _, lv_s, b_s = src
        _, lv_d, b_d = dst
        out = []
        for i, j in zip(idx, idx[1:]):
            m = composite_map(chain, lv_s[i], lv_d[j])
            out.append(b_d[j] @ m @ inverse(b_s[i]))
        return out

    (v, w) = sides
    return v[0], w[0], seq, morphisms(v, w), morphisms(w, v)


def spectrum_below(grid: Sequence, epsilon) -> tuple:
    """Spectrum ``{x - epsilon}`` for each grid point ``x``, skipping clashes with the grid."""
    g = set(Fraction(x) for x in grid)
    return tuple(sorted({Fraction(x) - epsilon for x in grid} - g))


def count_sequences(gm: GappedModule, lambda_prime=None) -> int:
    return sum(1 for _ in normalized_sequences(gm, lambda_prime))

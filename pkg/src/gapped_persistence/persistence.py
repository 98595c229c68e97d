"""Finite totally ordered persistence modules with an explicit colimit."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import INF, Field, Matrix, ShapeError, in_column_span, rank


class _Colimit:
    """Marker for a bar that survives into the colimit space."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "COLIMIT"

    def __reduce__(self):
        return (_Colimit, ())


COLIMIT = _Colimit()


class ValidationError(ValueError):
    def __init__(self, violation: "Violation"):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    """First broken constraint found by a validator."""

    constraint: str
    message: str
    where: tuple = ()

    def __str__(self):
        loc = f" at {self.where}" if self.where else ""
        return f"{self.constraint}{loc}: {self.message}"

    def to_dict(self) -> dict:
        return {"constraint": self.constraint, "message": self.message,
                "where": [str(x) for x in self.where]}


@dataclass(frozen=True)
class PersistenceModule:
    """Persistence module over a strictly increasing finite grid.

    ``step_maps[i]`` is V(grid[i]) -> V(grid[i+1]); ``colimit_maps[i]`` is
    V(grid[i]) -> V_inf.  Construct freely, then call :func:`validate`.
    """

    grid: tuple
    dims: tuple
    step_maps: tuple
    colimit_dim: int
    colimit_maps: tuple
    field: Field = Field.GF2
    unit: Optional[str] = dc_field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(Fraction(x) for x in self.grid))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "step_maps", tuple(self.step_maps))
        object.__setattr__(self, "colimit_maps", tuple(self.colimit_maps))

    def __len__(self):
        return len(self.grid)

    def index_of(self, value) -> int:
        try:
            return self.grid.index(Fraction(value))
        except ValueError:
            raise ValueError(f"{value} is not a grid value") from None

    @classmethod
    def zero(cls, grid: Sequence, field: Field = Field.GF2) -> "PersistenceModule":
        n = len(grid)
        return cls(grid, (0,) * n, tuple(Matrix.zeros(0, 0, field) for _ in range(n - 1)),
                   0, tuple(Matrix.zeros(0, 0, field) for _ in range(n)), field)

    @classmethod
    def constant(cls, grid: Sequence, dim: int, field: Field = Field.GF2) -> "PersistenceModule":
        """Identity step maps and identity colimit maps everywhere."""
        ident = Matrix.identity(dim, field)
        n = len(grid)
        return cls(grid, (dim,) * n, (ident,) * (n - 1), dim, (ident,) * n, field)


def validate(pm: PersistenceModule) -> Optional[Violation]:
    """Return the first violated structural constraint, or ``None``."""
    n = len(pm.grid)
    if len(pm.dims) != n:
        return Violation("dims", f"{len(pm.dims)} dims for {n} grid points")
    for i in range(n - 1):
        if not pm.grid[i] < pm.grid[i + 1]:
            return Violation("grid", "grid must be strictly increasing", (i,))
    if any(d < 0 for d in pm.dims) or pm.colimit_dim < 0:
        return Violation("dims", "negative dimension")
    if len(pm.step_maps) != max(n - 1, 0):
        return Violation("step_maps", f"expected {max(n - 1, 0)} step maps, got {len(pm.step_maps)}")
    if len(pm.colimit_maps) != n:
        return Violation("colimit_maps", f"expected {n} colimit maps, got {len(pm.colimit_maps)}")
    for i, m in enumerate(pm.step_maps):
        if m.field is not pm.field:
            return Violation("field", "step map over the wrong field", (i,))
        if m.shape != (pm.dims[i + 1], pm.dims[i]):
            return Violation("step_maps", f"shape {m.shape}, expected "
                             f"{(pm.dims[i + 1], pm.dims[i])}", (i,))
    for i, m in enumerate(pm.colimit_maps):
        if m.field is not pm.field:
            return Violation("field", "colimit map over the wrong field", (i,))
        if m.shape != (pm.colimit_dim, pm.dims[i]):
            return Violation("colimit_maps", f"shape {m.shape}, expected "
                             f"{(pm.colimit_dim, pm.dims[i])}", (i,))
    for i, m in enumerate(pm.step_maps):
        if pm.colimit_maps[i + 1] @ m != pm.colimit_maps[i]:
            return Violation("colimit_compatibility",
                             "colimit map does not factor through the step map", (i,))
    return None


def check(pm: PersistenceModule) -> PersistenceModule:
    """Raise :class:`ValidationError` unless ``pm`` is valid; return it otherwise."""
    v = validate(pm)
    if v is not None:
        raise ValidationError(v)
    return pm


def composite_map(pm: PersistenceModule, i: int, j: int) -> Matrix:
    """The structure map V(grid[i]) -> V(grid[j]) for ``i <= j``."""
    if i > j:
        raise ValueError(f"composite_map needs i <= j, got {i} > {j}")
    out = Matrix.identity(pm.dims[i], pm.field)
    for k in range(i, j):
        out = pm.step_maps[k] @ out
    return out


def rank_invariant(pm: PersistenceModule, i: int, j: int) -> int:
    return rank(composite_map(pm, i, j))


def rank_table(pm: PersistenceModule) -> list[list[int]]:
    """``r[i][j]`` for ``i <= j < n`` plus ``r[i][n]`` = rank of the i-th colimit map."""
    n = len(pm.grid)
    r = [[0] * (n + 1) for _ in range(n)]
    for i in range(n):
        m = Matrix.identity(pm.dims[i], pm.field)
        r[i][i] = pm.dims[i]
        for j in range(i + 1, n):
            m = pm.step_maps[j - 1] @ m
            r[i][j] = rank(m)
        r[i][n] = rank(pm.colimit_maps[i])
    return r


# --------------------------------------------------------------------------
# barcodes


@dataclass(frozen=True)
class Interval:
    """Closed bar [birth, death] on grid values; ``death`` may be :data:`COLIMIT`."""

    birth: Fraction
    death: object
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "birth", Fraction(self.birth))
        if self.death is not COLIMIT:
            object.__setattr__(self, "death", Fraction(self.death))
            if self.death < self.birth:
                raise ValueError(f"death {self.death} before birth {self.birth}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def is_colimit(self) -> bool:
        return self.death is COLIMIT

    def key(self):
        return (self.birth, self.is_colimit, Fraction(0) if self.is_colimit else self.death)

    def __repr__(self):
        d = "COLIMIT" if self.is_colimit else str(self.death)
        m = f" x{self.multiplicity}" if self.multiplicity > 1 else ""
        return f"[{self.birth}, {d}]{m}"


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars, stored merged and sorted so equality is structural."""

    bars: tuple = ()
    unit: Optional[str] = dc_field(default=None, compare=False)

    def __post_init__(self):
        counts: Counter = Counter()
        for bar in self.bars:
            if not isinstance(bar, Interval):
                bar = Interval(*bar)
            counts[(bar.birth, bar.death)] += bar.multiplicity
        merged = [Interval(b, d, m) for (b, d), m in counts.items()]
        merged.sort(key=Interval.key)
        object.__setattr__(self, "bars", tuple(merged))

    def __len__(self):
        return sum(b.multiplicity for b in self.bars)

    def __iter__(self):
        return iter(self.bars)

    def expand(self) -> list[tuple]:
        """One ``(birth, death)`` pair per bar, multiplicities unrolled."""
        return [(b.birth, b.death) for b in self.bars for _ in range(b.multiplicity)]

    def colimit_births(self) -> list[Fraction]:
        return sorted(b for b, d in self.expand() if d is COLIMIT)

    def finite(self) -> list[tuple]:
        return [(b, d) for b, d in self.expand() if d is not COLIMIT]

    def shift(self, s) -> "Barcode":
        s = Fraction(s)
        return Barcode(tuple(Interval(b.birth + s, COLIMIT if b.is_colimit else b.death + s,
                                      b.multiplicity) for b in self.bars), self.unit)


def barcode(pm: PersistenceModule) -> Barcode:
    """Interval decomposition from the rank function by inclusion-exclusion.

    With r(i, j) the rank of V_i -> V_j and r(i, n) the rank of V_i -> V_inf,
    the number of bars [grid[i], grid[j]] is
    r(i,j) - r(i-1,j) - r(i,j+1) + r(i-1,j+1), and the number of colimit bars
    born at grid[i] is r(i,n) - r(i-1,n).
    """
    check(pm)
    n = len(pm.grid)
    r = rank_table(pm)

    def rk(i, j):
        return r[i][j] if i >= 0 else 0

    bars = []
    for i in range(n):
        for j in range(i, n):
            m = rk(i, j) - rk(i - 1, j) - rk(i, j + 1) + rk(i - 1, j + 1)
            if m:
                bars.append(Interval(pm.grid[i], pm.grid[j], m))
        m = rk(i, n) - rk(i - 1, n)
        if m:
            bars.append(Interval(pm.grid[i], COLIMIT, m))
    return Barcode(tuple(bars), pm.unit)


def mirror(bc: Barcode, grid: Sequence) -> Barcode:
    """Reflect a barcode on ``grid`` into a barcode on the negated, reversed grid.

    Bars are reflected as sets of grid points.  In the reflected module every
    bar reaching the new top point ``-grid[0]`` survives into the colimit.
    """
    grid = [Fraction(x) for x in grid]
    top = grid[-1]
    out = []
    for b in bc.bars:
        d = top if b.is_colimit else b.death
        death = COLIMIT if b.birth == grid[0] else -b.birth
        out.append(Interval(-d, death, b.multiplicity))
    return Barcode(tuple(out), bc.unit)


def dual(pm: PersistenceModule) -> PersistenceModule:
    """Pointwise dual over the negated, reversed grid; colimit is V(grid[0])*."""
    check(pm)
    n = len(pm.grid)
    grid = tuple(-x for x in reversed(pm.grid))
    dims = tuple(reversed(pm.dims))
    steps = tuple(m.transpose() for m in reversed(pm.step_maps))
    if n == 0:
        return PersistenceModule((), (), (), 0, (), pm.field, pm.unit)
    m = Matrix.identity(pm.dims[0], pm.field)
    prefix = []
    for i in range(n):
        if i:
            m = pm.step_maps[i - 1] @ m
        prefix.append(m.transpose())
    return PersistenceModule(grid, dims, steps, pm.dims[0], tuple(reversed(prefix)),
                             pm.field, pm.unit)


def shift_values(pm: PersistenceModule, s) -> PersistenceModule:
    s = Fraction(s)
    return PersistenceModule(tuple(x + s for x in pm.grid), pm.dims, pm.step_maps,
                             pm.colimit_dim, pm.colimit_maps, pm.field, pm.unit)


def _first_in_image(grid, colimit_maps, a) -> object:
    for value, m in sorted(zip(grid, colimit_maps), key=lambda t: t[0]):
        if in_column_span(m, a) is not None:
            return value
    return INF


def spectral_invariant(pm: PersistenceModule, a: Sequence):
    """Least grid value whose colimit map hits ``a``; ``INF`` for ``a == 0`` or never."""
    check(pm)
    if len(a) != pm.colimit_dim:
        raise ValueError(f"class of length {len(a)} in a colimit of dimension {pm.colimit_dim}")
    a = tuple(pm.field.coerce(x) for x in a)
    if not any(a):
        return INF
    return _first_in_image(pm.grid, pm.colimit_maps, a)


def verify_interleaving(v: PersistenceModule, w: PersistenceModule, delta_steps: int,
                        phi: Sequence[Matrix], psi: Sequence[Matrix]) -> Optional[Violation]:
    """Check a supplied index-shift interleaving between modules on one grid.

    ``phi[i]: V_i -> W_{i+delta_steps}`` and ``psi[i]: W_i -> V_{i+delta_steps}``
    for every ``i`` with ``i + delta_steps`` on the grid.
    """
    if v.grid != w.grid:
        raise ValueError("interleaving verification needs a shared grid")
    if delta_steps < 0:
        raise ValueError("delta_steps must be non-negative")
    n, d = len(v.grid), delta_steps
    count = max(n - d, 0)
    if len(phi) != count or len(psi) != count:
        raise ValueError(f"expected {count} morphisms in each family")
    for i in range(count):
        if phi[i].shape != (w.dims[i + d], v.dims[i]):
            raise ShapeError(f"phi[{i}] has shape {phi[i].shape}")
        if psi[i].shape != (v.dims[i + d], w.dims[i]):
            raise ShapeError(f"psi[{i}] has shape {psi[i].shape}")
    for i in range(count - 1):
        if phi[i + 1] @ v.step_maps[i] != w.step_maps[i + d] @ phi[i]:
            return Violation("phi_naturality", "phi does not commute with step maps", (i,))
        if psi[i + 1] @ w.step_maps[i] != v.step_maps[i + d] @ psi[i]:
            return Violation("psi_naturality", "psi does not commute with step maps", (i,))
    for i in range(max(n - 2 * d, 0)):
        if psi[i + d] @ phi[i] != composite_map(v, i, i + 2 * d):
            return Violation("psi_phi", "psi o phi differs from the structure map of V", (i,))
        if phi[i + d] @ psi[i] != composite_map(w, i, i + 2 * d):
            return Violation("phi_psi", "phi o psi differs from the structure map of W", (i,))
    return None


def identity_interleaving(pm: PersistenceModule) -> tuple[list[Matrix], list[Matrix]]:
    ids = [Matrix.identity(d, pm.field) for d in pm.dims]
    return ids, list(ids)

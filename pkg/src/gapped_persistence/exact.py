"""Exact scalar and dense-matrix arithmetic over GF(2) and the rationals.

Scalars are plain Python values: ``int`` in {0, 1} for GF(2) and
:class:`fractions.Fraction` for Q.  The field travels with the matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Scalar = Union[int, Fraction]

#: Stand-in for "+infinity" (spectral invariants of classes that never appear).
INF = math.inf


class ShapeError(ValueError):
    """Malformed matrix or dimension mismatch between operands."""


class Field(enum.Enum):
    GF2 = "GF2"
    Q = "Q"

    def coerce(self, x) -> Scalar:
        if isinstance(x, bool):
            x = int(x)
        if self is Field.GF2:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ShapeError(f"non-integer GF2 entry {x}")
                x = x.numerator
            if isinstance(x, str):
                x = int(x)
            if not isinstance(x, int):
                raise ShapeError(f"invalid GF2 entry {x!r}")
            return x % 2
        if isinstance(x, float):
            raise ShapeError("floating point entries are not exact")
        return Fraction(x)

    @property
    def zero(self) -> Scalar:
        return 0 if self is Field.GF2 else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self is Field.GF2 else Fraction(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a ^ b) if self is Field.GF2 else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a ^ b) if self is Field.GF2 else a - b

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 if self is Field.GF2 else 1 / a


def parse_rational(text) -> Fraction:
    """Parse an exact rational from ``"p/q"``, ``"p"`` or an int.

    Floats are rejected: their decimal expansion is not what the user typed.
    """
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"expected an exact rational, got {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise ValueError(f"expected an exact rational, got {text!r}")


def format_rational(x) -> str:
    """``"p/q"`` with ``q`` omitted when 1; ``"+inf"`` for :data:`INF`."""
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return str(Fraction(x))


def parse_extended(text):
    """Like :func:`parse_rational` but also accepts ``"+inf"``/``"inf"``."""
    if isinstance(text, str) and text.strip().lstrip("+") == "inf":
        return INF
    return parse_rational(text)


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix over ``field``.

    ``entries`` is a tuple of row tuples.  A ``rows x 0`` matrix has ``rows``
    empty row tuples; a ``0 x cols`` matrix has no rows but remembers ``cols``.
    """

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.entries) != self.rows:
            raise ShapeError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeError(f"expected rows of length {self.cols}, got {len(row)}")

    # construction -----------------------------------------------------

    @classmethod
    def _trusted(cls, field: Field, rows: int, cols: int, entries: tuple) -> "Matrix":
        # skips the shape checks; only for results whose shape is known
        m = object.__new__(cls)
        for name, value in (("field", field), ("rows", rows), ("cols", cols),
                            ("entries", entries)):
            object.__setattr__(m, name, value)
        return m

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], field: Field = Field.GF2,
                  shape: Optional[tuple[int, int]] = None) -> "Matrix":
        data = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if shape is None:
            if not data:
                raise ShapeError("cannot infer the column count of an empty matrix")
            shape = (len(data), len(data[0]))
        return cls(field, shape[0], shape[1], data)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = Field.GF2) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int, field: Field = Field.GF2) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n))
                                      for i in range(n)))

    @classmethod
    def inclusion(cls, rows: int, cols: int, field: Field = Field.GF2) -> "Matrix":
        """The map k^cols -> k^rows sending e_i to e_i (requires cols <= rows)."""
        if cols > rows:
            raise ShapeError("inclusion needs cols <= rows")
        z, o = field.zero, field.one
        return cls(field, rows, cols, tuple(tuple(o if i == j else z for j in range(cols))
                                            for i in range(rows)))

    # basic operations -------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.entries)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for a {self.shape} matrix")
        if self.field is Field.GF2:
            return tuple(sum(a & b for a, b in zip(row, v)) & 1 for row in self.entries)
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return compose(self, other)

    def tolist(self) -> list[list]:
        return [list(row) for row in self.entries]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"Matrix<{self.field.value} {self.rows}x{self.cols}>[{body}]"


def compose(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product ``a @ b`` (apply ``b`` first, then ``a``)."""
    if a.field is not b.field:
        raise ShapeError("cannot compose matrices over different fields")
    if a.cols != b.rows:
        raise ShapeError(f"cannot compose {a.shape} with {b.shape}")
    if a.field is Field.GF2:
        # row i of a@b is the XOR of the rows of b selected by row i of a
        b_rows = _gf2_row_masks(b.entries)
        cols = b.cols
        data = []
        for row in a.entries:
            acc = 0
            for x, m in zip(row, b_rows):
                if x:
                    acc ^= m
            data.append(tuple((acc >> j) & 1 for j in range(cols)))
        data = tuple(data)
    else:
        bt = b.transpose().entries
        data = tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
                     for row in a.entries)
    return Matrix._trusted(a.field, a.rows, b.cols, data)


def _gf2_row_masks(rows) -> list[int]:
    masks = []
    for row in rows:
        m = 0
        for j, x in enumerate(row):
            if x:
                m |= 1 << j
        masks.append(m)
    return masks


def _gf2_rank(m: Matrix) -> int:
    # each row as a bitmask; keep an XOR basis keyed by leading bit
    basis: dict[int, int] = {}
    for r in _gf2_row_masks(m.entries):
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def _row_echelon(rows: list[list], field: Field, ncols: int) -> list[int]:
    """In-place Gaussian elimination; returns the pivot columns in order."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]] if field is Field.Q else rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                if field is Field.GF2:
                    rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
                else:
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def _gf2_echelon(rows: list[int], ncols: int) -> list[int]:
    """Gauss-Jordan on bitmask rows (bit ``c`` is column ``c``); returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(m: Matrix) -> int:
    """Dimension of the column span, by exact elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field is Field.GF2:
        return _gf2_rank(m)
    return len(_row_echelon([list(row) for row in m.entries], m.field, m.cols))


def in_column_span(m: Matrix, v: Sequence) -> Optional[tuple]:
    """Coefficients ``c`` with ``m @ c == v``, or ``None`` when ``v`` is not in the span.

    Free variables are set to zero, so the returned solution is deterministic.
    """
    if len(v) != m.rows:
        raise ShapeError(f"vector of length {len(v)} against {m.rows} rows")
    f = m.field
    v = [f.coerce(x) for x in v]
    if f is Field.GF2:
        top = 1 << m.cols
        aug = [mask | (top if x else 0) for mask, x in zip(_gf2_row_masks(m.entries), v)]
        pivots = _gf2_echelon(aug, m.cols + 1)
        if pivots and pivots[-1] == m.cols:
            return None
        coeffs = [0] * m.cols
        for r, c in enumerate(pivots):
            coeffs[c] = 1 if aug[r] & top else 0
        return tuple(coeffs)
    aug = [list(row) + [x] for row, x in zip(m.entries, v)]
    pivots = _row_echelon(aug, f, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    coeffs = [f.zero] * m.cols
    for r, c in enumerate(pivots):
        coeffs[c] = aug[r][m.cols]
    return tuple(coeffs)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeError("only square matrices are invertible")
    n = m.rows
    f = m.field
    if f is Field.GF2:
        rows = [mask | (1 << (n + i)) for i, mask in enumerate(_gf2_row_masks(m.entries))]
        if _gf2_echelon(rows, n) != list(range(n)):
            raise ShapeError("matrix is singular")
        return Matrix(f, n, n, tuple(tuple((row >> (n + j)) & 1 for j in range(n))
                                     for row in rows))
    ident = Matrix.identity(n, f).entries
    aug = [list(row) + list(e) for row, e in zip(m.entries, ident)]
    pivots = _row_echelon(aug, f, n)
    if pivots != list(range(n)):
        raise ShapeError("matrix is singular")
    return Matrix(f, n, n, tuple(tuple(row[n:]) for row in aug))

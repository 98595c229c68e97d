"""JSON encoding of modules, barcodes, sequences and envelopes.

Every number is an exact string (``"p/q"``, or ``"p"`` when ``q == 1``).  GF2
matrix entries are the integers 0 and 1.  Matrix shapes are implied by the
dimension lists, so empty matrices round-trip without extra metadata.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .contact import ContactEnvelope
from .exact import Field, Matrix, ShapeError, format_rational, parse_rational
from .gapped import GappedModule, GappedSequence
from .persistence import COLIMIT, Barcode, Interval, PersistenceModule


class SchemaError(ValueError):
    """Input does not match the expected JSON layout."""


def _req(doc: dict, key: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"expected a JSON object, got {type(doc).__name__}")
    if key not in doc:
        raise SchemaError(f"missing key {key!r}")
    return doc[key]


def _rat(x, what="value") -> Fraction:
    try:
        return parse_rational(x)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad rational {what}: {x!r}") from e


def _count(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise SchemaError(f"{what} must be a non-negative integer, got {x!r}")
    return x


def rationals_from_json(xs, what="value") -> tuple:
    if not isinstance(xs, list):
        raise SchemaError(f"{what} must be a list")
    return tuple(_rat(x, what) for x in xs)


def _field(doc: dict) -> Field:
    if not isinstance(doc, dict):
        raise SchemaError(f"expected a JSON object, got {type(doc).__name__}")
    tag = doc.get("field", "GF2")
    try:
        return Field(tag)
    except (ValueError, TypeError):
        raise SchemaError(f"unknown field {tag!r}") from None


# matrices -----------------------------------------------------------------

def matrix_to_json(m: Matrix) -> list:
    if m.field is Field.GF2:
        return [list(row) for row in m.entries]
    return [[format_rational(x) for x in row] for row in m.entries]


def matrix_from_json(rows, field: Field, shape: tuple[int, int]) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SchemaError("a matrix must be a list of rows")
    if field is Field.Q:
        rows = [[_rat(x, "matrix entry") for x in r] for r in rows]
    elif any(isinstance(x, (float, bool)) for r in rows for x in r):
        raise SchemaError("GF2 entries must be the integers 0 and 1")
    if shape[0] == 0 and rows == []:
        return Matrix.zeros(0, shape[1], field)
    if shape[1] == 0 and len(rows) == shape[0] and all(r == [] for r in rows):
        return Matrix.zeros(shape[0], 0, field)
    try:
        m = Matrix.from_rows(rows, field, shape)
    except (ShapeError, ValueError, TypeError) as e:
        raise SchemaError(f"bad matrix: {e}") from e
    return m


# persistence modules ------------------------------------------------------

def module_to_json(pm: PersistenceModule) -> dict:
    doc: dict[str, Any] = {"field": pm.field.value}
    if pm.unit is not None:
        doc["unit"] = pm.unit
    doc.update({
        "grid": [format_rational(x) for x in pm.grid],
        "dims": list(pm.dims),
        "step_maps": [matrix_to_json(m) for m in pm.step_maps],
        "colimit_dim": pm.colimit_dim,
        "colimit_maps": [matrix_to_json(m) for m in pm.colimit_maps],
    })
    return doc


def module_from_json(doc: dict) -> PersistenceModule:
    """Decode a persistence module.  Shapes are checked; validity is not."""
    f = _field(doc)
    grid = rationals_from_json(_req(doc, "grid"), "grid value")
    dims = [_count(d, "dimension") for d in _req(doc, "dims")]
    cdim = _count(_req(doc, "colimit_dim"), "colimit_dim")
    steps = _req(doc, "step_maps")
    cmaps = _req(doc, "colimit_maps")
    if len(dims) != len(grid):
        raise SchemaError(f"{len(dims)} dims for {len(grid)} grid values")
    if not isinstance(steps, list) or len(steps) != max(len(grid) - 1, 0):
        raise SchemaError("need one step map per consecutive pair of grid values")
    if not isinstance(cmaps, list) or len(cmaps) != len(grid):
        raise SchemaError("need one colimit map per grid value")
    step_maps = tuple(matrix_from_json(m, f, (dims[i + 1], dims[i])) for i, m in enumerate(steps))
    colimit_maps = tuple(matrix_from_json(m, f, (cdim, dims[i])) for i, m in enumerate(cmaps))
    return PersistenceModule(grid, tuple(dims), step_maps, cdim, colimit_maps, f,
                             doc.get("unit"))


# gapped modules -----------------------------------------------------------

def gapped_to_json(gm: GappedModule) -> dict:
    doc: dict[str, Any] = {"field": gm.field.value}
    if gm.unit is not None:
        doc["unit"] = gm.unit
    doc.update({
        "lambda": format_rational(gm.lam),
        "spectrum": [format_rational(x) for x in gm.spectrum],
        "grid": [format_rational(x) for x in gm.grid],
        "dims": list(gm.dims),
        "maps": [{"from": format_rational(gm.grid[i]), "to": format_rational(gm.grid[j]),
                  "matrix": matrix_to_json(m)} for (i, j), m in sorted(gm.maps.items())],
        "colimit_dim": gm.colimit_dim,
        "colimit_maps": [matrix_to_json(m) for m in gm.colimit_maps],
    })
    return doc


def gapped_from_json(doc: dict) -> GappedModule:
    f = _field(doc)
    lam = _rat(_req(doc, "lambda"), "lambda")
    spectrum = rationals_from_json(doc.get("spectrum", []), "spectrum value")
    grid = rationals_from_json(_req(doc, "grid"), "grid value")
    dims = [_count(d, "dimension") for d in _req(doc, "dims")]
    cdim = _count(_req(doc, "colimit_dim"), "colimit_dim")
    if len(dims) != len(grid):
        raise SchemaError(f"{len(dims)} dims for {len(grid)} grid values")
    where = {x: k for k, x in enumerate(grid)}
    maps = {}
    raw = _req(doc, "maps")
    if not isinstance(raw, list):
        raise SchemaError("maps must be a list of {from, to, matrix} objects")
    for item in raw:
        a, b = _rat(_req(item, "from"), "map source"), _rat(_req(item, "to"), "map target")
        if a not in where or b not in where:
            raise SchemaError(f"map {a} -> {b} between non-grid values")
        i, j = where[a], where[b]
        maps[(i, j)] = matrix_from_json(_req(item, "matrix"), f, (dims[j], dims[i]))
    cmaps = _req(doc, "colimit_maps")
    if not isinstance(cmaps, list) or len(cmaps) != len(grid):
        raise SchemaError("need one colimit map per grid value")
    colimit_maps = tuple(matrix_from_json(m, f, (cdim, dims[i])) for i, m in enumerate(cmaps))
    return GappedModule(lam, spectrum, grid, tuple(dims), maps, cdim, colimit_maps, f,
                        doc.get("unit"))


def is_gapped_doc(doc) -> bool:
    return isinstance(doc, dict) and "lambda" in doc


# barcodes -----------------------------------------------------------------

def barcode_to_json(bc: Barcode) -> dict:
    doc: dict[str, Any] = {}
    if bc.unit is not None:
        doc["unit"] = bc.unit
    doc["bars"] = [{"birth": format_rational(b.birth),
                    "death": "colimit" if b.is_colimit else format_rational(b.death),
                    "mult": b.multiplicity} for b in bc.bars]
    return doc


def barcode_from_json(doc: dict) -> Barcode:
    bars = _req(doc, "bars")
    if not isinstance(bars, list):
        raise SchemaError("bars must be a list")
    out = []
    for item in bars:
        birth = _rat(_req(item, "birth"), "birth")
        d = _req(item, "death")
        death = COLIMIT if d == "colimit" else _rat(d, "death")
        mult = item.get("mult", 1) if isinstance(item, dict) else 1
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise SchemaError(f"multiplicity must be a positive integer, got {mult!r}")
        try:
            out.append(Interval(birth, death, mult))
        except ValueError as e:
            raise SchemaError(str(e)) from e
    return Barcode(tuple(out), doc.get("unit"))


# sequences and envelopes --------------------------------------------------

def sequence_to_json(seq: GappedSequence) -> dict:
    return {"lambda_prime": format_rational(seq.lambda_prime),
            "origin_index": seq.origin_index,
            "values": [format_rational(x) for x in seq.values]}


def sequence_from_json(doc: dict) -> GappedSequence:
    values = rationals_from_json(_req(doc, "values"), "sequence value")
    lp = _rat(_req(doc, "lambda_prime"), "lambda_prime")
    origin = _count(doc.get("origin_index", 0), "origin_index")
    try:
        return GappedSequence(values, lp, origin)
    except ValueError as e:
        raise SchemaError(str(e)) from e


def envelope_to_json(h: ContactEnvelope) -> dict:
    return {"breakpoints": [format_rational(x) for x in h.breakpoints],
            "max_env": [format_rational(x) for x in h.max_env],
            "min_env": [format_rational(x) for x in h.min_env],
            "spectrum": [format_rational(x) for x in h.spectrum]}


def envelope_from_json(doc: dict) -> ContactEnvelope:
    try:
        return ContactEnvelope(rationals_from_json(_req(doc, "breakpoints"), "breakpoint"),
                               rationals_from_json(_req(doc, "max_env"), "max_env value"),
                               rationals_from_json(_req(doc, "min_env"), "min_env value"),
                               rationals_from_json(doc.get("spectrum", []), "spectrum value"))
    except SchemaError:
        raise
    except ValueError as e:
        raise SchemaError(str(e)) from e


# text ----------------------------------------------------------------------

def dumps(doc) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from e


def _reject_float(text):
    raise SchemaError(f"floating point literal {text} is not exact; use a \"p/q\" string")

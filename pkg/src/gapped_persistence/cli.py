"""Command-line front end over the JSON formats.

Exit status: 0 on success, 1 when an input is structurally invalid (a
machine-readable violation report is printed), 2 on parse, schema or I/O
errors.  Every input path may be ``-`` for standard input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import contact, s2
from .exact import ShapeError, format_rational
from .gapped import (GappedModule, check_gapped, full_sequence, gapped_spectral_invariant,
                     restrict, shift_gapped, validate_gapped)
from .persistence import (Barcode, PersistenceModule, ValidationError, Violation, barcode, dual,
                          shift_values, spectral_invariant, validate, verify_interleaving)
from .bottleneck import bottleneck_distance
from .serialization import (SchemaError, barcode_from_json, barcode_to_json, dumps,
                            envelope_from_json, gapped_from_json, gapped_to_json, is_gapped_doc,
                            loads, matrix_from_json, module_from_json, module_to_json,
                            rationals_from_json, sequence_from_json)


class Failure(Exception):
    """Validation-level failure carrying a report; maps to exit status 1."""

    def __init__(self, report: dict):
        super().__init__(report.get("message", ""))
        self.report = report


def _violation(v: Violation) -> Failure:
    return Failure({"ok": False, "violation": v.to_dict()})


# input helpers --------------------------------------------------------------

def _read(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return loads(text)


def _load_any(path: str):
    doc = _read(path)
    if is_gapped_doc(doc):
        return gapped_from_json(doc)
    return module_from_json(doc)


def _checked(obj):
    v = validate_gapped(obj) if isinstance(obj, GappedModule) else validate(obj)
    if v is not None:
        raise _violation(v)
    return obj


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _parse_class(text: str, dim: int) -> tuple:
    text = text.strip()
    if text == "0":
        return (0,) * dim
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != dim:
        raise Failure({"ok": False, "message":
                       f"class {text!r} has {len(parts)} coordinates, colimit dimension is {dim}"})
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"bad class coordinates {text!r}") from None


def _totally_ordered(obj, seq_path: Optional[str]) -> PersistenceModule:
    """Persistence module for ``barcode``: a module as is, or a gapped restriction."""
    if isinstance(obj, PersistenceModule):
        if seq_path is not None:
            raise Failure({"ok": False, "message": "--sequence applies to gapped modules only"})
        return obj
    if seq_path is not None:
        seq = sequence_from_json(_read(seq_path))
    else:
        seq = full_sequence(obj)
        if seq.lambda_prime < obj.lam:
            raise Failure({"ok": False, "message":
                           "grid is not totally ordered under the gap order; pass --sequence"})
    try:
        return restrict(obj, seq)
    except ValueError as e:
        raise Failure({"ok": False, "message": str(e)}) from e


# commands -------------------------------------------------------------------

def cmd_validate(args):
    obj = _load_any(args.module)
    v = validate_gapped(obj) if isinstance(obj, GappedModule) else validate(obj)
    if v is not None:
        raise _violation(v)
    return {"ok": True}


def cmd_barcode(args):
    obj = _checked(_load_any(args.module))
    return barcode_to_json(barcode(_totally_ordered(obj, args.sequence)))


def cmd_spectral(args):
    obj = _checked(_load_any(args.module))
    results = []
    for text in args.classes:
        a = _parse_class(text, obj.colimit_dim)
        if isinstance(obj, GappedModule):
            c = gapped_spectral_invariant(obj, a, cross_check=args.cross_check)
        else:
            c = spectral_invariant(obj, a)
        results.append({"class": text, "value": format_rational(c)})
    if len(results) == 1:
        return results[0]["value"]
    return results


def _load_barcode(path: str) -> Barcode:
    doc = _read(path)
    if isinstance(doc, dict) and "bars" in doc:
        return barcode_from_json(doc)
    obj = _checked(gapped_from_json(doc) if is_gapped_doc(doc) else module_from_json(doc))
    return barcode(_totally_ordered(obj, None))


def cmd_bottleneck(args):
    return format_rational(bottleneck_distance(_load_barcode(args.first),
                                               _load_barcode(args.second)))


def cmd_restrict(args):
    gm = _load_any(args.module)
    if not isinstance(gm, GappedModule):
        raise Failure({"ok": False, "message": "restrict expects a gapped module"})
    _checked(gm)
    seq = sequence_from_json(_read(args.sequence))
    try:
        return module_to_json(restrict(gm, seq, index=args.index))
    except ValueError as e:
        raise Failure({"ok": False, "message": str(e)}) from e


def cmd_dual(args):
    obj = _checked(_load_any(args.module))
    if isinstance(obj, GappedModule):
        obj = _totally_ordered(obj, None)
    return module_to_json(dual(obj))


def cmd_shift(args):
    obj = _checked(_load_any(args.module))
    if isinstance(obj, GappedModule):
        return gapped_to_json(shift_gapped(obj, args.by))
    return module_to_json(shift_values(obj, args.by))


def cmd_interleave(args):
    v = _checked(module_from_json(_read(args.first)))
    w = _checked(module_from_json(_read(args.second)))
    doc = _read(args.morphisms)
    d = args.delta_steps
    if not isinstance(doc, dict) or not isinstance(doc.get("phi"), list) \
            or not isinstance(doc.get("psi"), list):
        raise SchemaError("morphisms file needs lists 'phi' and 'psi'")
    if v.grid != w.grid:
        raise Failure({"ok": False, "message": "interleaving verification needs a shared grid"})
    count = max(len(v.grid) - d, 0)
    if len(doc["phi"]) != count or len(doc["psi"]) != count:
        raise Failure({"ok": False, "message": f"expected {count} morphisms in each family"})
    phi = [matrix_from_json(m, v.field, (w.dims[i + d], v.dims[i]))
           for i, m in enumerate(doc["phi"])]
    psi = [matrix_from_json(m, v.field, (v.dims[i + d], w.dims[i]))
           for i, m in enumerate(doc["psi"])]
    try:
        bad = verify_interleaving(v, w, d, phi, psi)
    except ValueError as e:
        raise Failure({"ok": False, "message": str(e)}) from e
    if bad is not None:
        raise _violation(bad)
    return {"ok": True}


def cmd_fixture(args):
    try:
        spec = s2.S2FixtureSpec(max(args.degree, 1), args.max_m, args.epsilon)
        gm = s2.build_s2_fixture(spec, args.degree)
    except ValueError as e:
        raise Failure({"ok": False, "message": str(e)}) from e
    return gapped_to_json(check_gapped(gm))


def cmd_quasistate(args):
    doc = _read(args.input)
    if not isinstance(doc, dict):
        raise SchemaError("quasistate input must be a JSON object")
    if "ctilde" in doc:
        ctilde = list(_rats_or_fail(doc["ctilde"]))
    else:
        cs = _rats_or_fail(doc.get("c"))
        if "envelope" in doc:
            ob = contact.oscbar(envelope_from_json(doc["envelope"]))
        else:
            ob = _rats_or_fail([doc.get("oscbar", "0")])[0]
        ctilde = [contact.tilde_c(c, ob) for c in cs]
    try:
        bracket = contact.fekete_limit(ctilde)
    except contact.NotSubadditiveError as e:
        raise Failure({"ok": False, "violation": {
            "constraint": "subadditivity", "message": str(e), "where": list(e.pair)}}) from e
    except ValueError as e:
        raise Failure({"ok": False, "message": str(e)}) from e
    return {"ctilde": [format_rational(x) for x in ctilde],
            "limit": format_rational(bracket.limit),
            "current": format_rational(bracket.current)}


def _rats_or_fail(xs):
    if not isinstance(xs, list):
        raise SchemaError("expected a list of exact rationals")
    return rationals_from_json(xs, "value")


# output -----------------------------------------------------------------------

def _pretty(result) -> str:
    if isinstance(result, str):
        return result + "\n"
    if isinstance(result, dict) and "bars" in result:
        rows = [(b["birth"], b["death"], f"x{b['mult']}") for b in result["bars"]]
        head = f"unit: {result['unit']}\n" if "unit" in result else ""
        if not rows:
            return head + "(empty barcode)\n"
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        return head + "".join(f"[{b:>{w0}}, {d:>{w1}}]  {m}\n" for b, d, m in rows)
    if isinstance(result, dict) and "grid" in result:
        lines = [f"field: {result['field']}"]
        if "lambda" in result:
            lines.append(f"lambda: {result['lambda']}")
        w = max([len(g) for g in result["grid"]] + [4])
        lines.append(f"{'grid':>{w}}  dim")
        lines += [f"{g:>{w}}  {d}" for g, d in zip(result["grid"], result["dims"])]
        lines.append(f"{'colim':>{w}}  {result['colimit_dim']}")
        return "\n".join(lines) + "\n"
    if isinstance(result, list) and all(isinstance(r, dict) and "class" in r for r in result):
        w = max(len(r["class"]) for r in result)
        return "".join(f"{r['class']:>{w}}  {r['value']}\n" for r in result)
    if isinstance(result, dict):
        w = max(len(k) for k in result)
        return "".join(f"{k:>{w}}  {json.dumps(v, sort_keys=True)}\n"
                       for k, v in sorted(result.items()))
    return dumps(result)


def _emit(result, args) -> None:
    if getattr(args, "unit", None) and isinstance(result, dict) and (
            "bars" in result or "grid" in result):
        result = dict(result, unit=args.unit)
    text = _pretty(result) if args.pretty else dumps(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    common.add_argument("--out", metavar="FILE", help="write the result here instead of stdout")
    common.add_argument("--unit", help="unit label carried into module and barcode outputs")

    p = argparse.ArgumentParser(prog="gapped-persist",
                                description="Exact gapped persistence computations on JSON data.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    q = sub.add_parser("validate", parents=[common], help="check a (gapped) module")
    q.add_argument("module")
    q.set_defaults(run=cmd_validate)

    q = sub.add_parser("barcode", parents=[common], help="interval decomposition")
    q.add_argument("module")
    q.add_argument("--sequence", metavar="FILE", help="restrict a gapped module along this sequence")
    q.set_defaults(run=cmd_barcode)

    q = sub.add_parser("spectral", parents=[common], help="spectral invariants of colimit classes")
    q.add_argument("module")
    q.add_argument("--class", dest="classes", action="append", required=True, metavar="A",
                   help="comma-separated coordinates, or 0 for the zero class; repeatable")
    q.add_argument("--cross-check", action="store_true",
                   help="also search normalized restrictions and compare")
    q.set_defaults(run=cmd_spectral)

    q = sub.add_parser("bottleneck", parents=[common], help="bottleneck distance")
    q.add_argument("first")
    q.add_argument("second")
    q.set_defaults(run=cmd_bottleneck)

    q = sub.add_parser("restrict", parents=[common], help="restrict a gapped module")
    q.add_argument("module")
    q.add_argument("--sequence", metavar="FILE", required=True)
    q.add_argument("--index", choices=["value", "position"], default="value")
    q.set_defaults(run=cmd_restrict)

    q = sub.add_parser("dual", parents=[common], help="dual module over the negated grid")
    q.add_argument("module")
    q.set_defaults(run=cmd_dual)

    q = sub.add_parser("shift", parents=[common], help="translate all parameter values")
    q.add_argument("module")
    q.add_argument("--by", type=_rational_arg, required=True)
    q.set_defaults(run=cmd_shift)

    q = sub.add_parser("interleave-verify", parents=[common],
                       help="check supplied interleaving morphisms")
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("--morphisms", metavar="FILE", required=True,
                   help='JSON object {"phi": [...], "psi": [...]}')
    q.add_argument("--delta-steps", type=int, required=True)
    q.set_defaults(run=cmd_interleave)

    q = sub.add_parser("fixture", parents=[common], help="generate built-in fixtures")
    q.add_argument("name", choices=["s2"])
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--max-m", type=int, default=8)
    q.add_argument("--epsilon", type=_rational_arg, default=Fraction(1, 100))
    q.set_defaults(run=cmd_fixture)

    q = sub.add_parser("quasistate", parents=[common],
                       help="Fekete bracket of balanced spectral invariants")
    q.add_argument("input", help='{"ctilde": [...]} or {"c": [...], "oscbar" | "envelope": ...}')
    q.set_defaults(run=cmd_quasistate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "delta_steps", 0) < 0:
        parser.error("--delta-steps must be non-negative")
    try:
        result = args.run(args)
        _emit(result, args)
        return 0
    except Failure as e:
        sys.stdout.write(dumps(e.report))
        return 1
    except ValidationError as e:
        sys.stdout.write(dumps({"ok": False, "violation": e.violation.to_dict()}))
        return 1
    except (SchemaError, ShapeError, UnicodeDecodeError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (TypeError, KeyError, AttributeError, IndexError) as e:
        # structurally malformed input that slipped past the schema checks
        sys.stderr.write(f"error: malformed input ({type(e).__name__}: {e})\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except ValueError as e:
        sys.stdout.write(dumps({"ok": False, "message": str(e)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())

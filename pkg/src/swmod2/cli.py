"""Command-line front end.

    swmod2 compute FILE [--m-max N] [--j-max N] [--json]
    swmod2 connect FILE [FILE2]
    swmod2 verify-product FILE [FILE2] [--j-max N] [--json]
    swmod2 obstruct FILE [--json]
    swmod2 families FILE [--j-max N] [--json]
    swmod2 twist FILE --a VECTOR

Exit codes: 0 success, 1 validation or hypothesis failure, 2 parse error,
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Any

from .classcalc import EquivariantSegre, QuadForm
from .consum import connect, verify_consistency
from .errors import ConsistencyError, InputError, MissingSegre, ParseError
from .f2ring import BaseAlgebra
from .families import (
    FamilyData,
    constraint_check,
    equivariant_euler_hplus,
    families_sw,
    families_sw_pin2,
    family_ring,
)
from .swspin import ManifoldData, compute_report, require_valid, smoothability_obstruction, twist_b2

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3

MANIFOLD_FIELDS = {"kind", "name", "b1", "b_plus", "sigma", "quad", "q2", "q3", "z2_rank", "z2_quad"}
FAMILY_FIELDS = {"kind", "name", "b_plus", "sigma", "b1", "base", "w", "segre"}


@dataclass
class InputDocument:
    kind: str
    payload: Any
    source: str = ""


class _DuplicateKey(Exception):
    def __init__(self, key: str):
        super().__init__(key)
        self.key = key


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _DuplicateKey(k)
        out[k] = v
    return out


def _line_of_repeat(text: str, key: str) -> int:
    """Line of the first repeated occurrence of a key (a best guess for nested objects)."""
    hits = [m.start() for m in re.finditer(re.escape(json.dumps(key)) + r"\s*:", text)]
    pos = hits[1] if len(hits) > 1 else (hits[0] if hits else 0)
    return text.count("\n", 0, pos) + 1


class _Reader:
    """Schema checks with a field path in every message."""

    def __init__(self, source: str):
        self.source = source

    def fail(self, where: str, msg: str):
        raise ParseError(f"{self.source}: field '{where}': {msg}")

    def obj(self, value, where: str, allowed: set, required: set) -> dict:
        if not isinstance(value, dict):
            self.fail(where, "expected an object")
        unknown = sorted(set(value) - allowed)
        if unknown:
            self.fail(f"{where}.{unknown[0]}" if where else unknown[0], "unknown field")
        for key in sorted(required):
            if key not in value:
                self.fail(f"{where}.{key}" if where else key, "missing")
        return value

    def int_(self, value, where: str, lo: int | None = None, hi: int | None = None) -> int:
        if not isinstance(value, int) or isinstance(value, bool):
            self.fail(where, f"expected an integer, got {value!r}")
        if lo is not None and value < lo or hi is not None and value > hi:
            self.fail(where, f"{value} outside {lo}..{hi}")
        return value

    def list_(self, value, where: str) -> list:
        if not isinstance(value, list):
            self.fail(where, "expected a list")
        return value

    def str_(self, value, where: str) -> str:
        if not isinstance(value, str):
            self.fail(where, "expected a string")
        return value

    def indices(self, value, where: str, size: int, n: int) -> tuple:
        vals = self.list_(value, where)
        if len(vals) != size:
            self.fail(where, f"expected {size} indices")
        idx = tuple(self.int_(v, f"{where}[{k}]", 1, n) for k, v in enumerate(vals))
        if list(idx) != sorted(set(idx)):
            self.fail(where, "indices must be strictly increasing")
        return idx

    def quad(self, value, where: str, n: int, bits: bool) -> dict:
        out = {}
        for k, entry in enumerate(self.list_(value, where)):
            at = f"{where}[{k}]"
            self.obj(entry, at, {"i", "c"}, {"i", "c"})
            key = self.indices(entry["i"], f"{at}.i", 4, n)
            c = self.int_(entry["c"], f"{at}.c", 0 if bits else None, 1 if bits else None)
            if key in out:
                self.fail(at, f"duplicate quad key {list(key)}")
            out[key] = c
        return out

    def table(self, value, where: str, arity: int, n: int) -> dict:
        out = {}
        for k, entry in enumerate(self.list_(value, where)):
            at = f"{where}[{k}]"
            row = self.list_(entry, at)
            if len(row) != arity + 1:
                self.fail(at, f"expected {arity} indices and a bit")
            key = self.indices(row[:arity], at, arity, n)
            if key in out:
                self.fail(at, f"duplicate entry {list(key)}")
            out[key] = self.int_(row[arity], f"{at}[{arity}]", 0, 1)
        return out

    def manifold(self, doc, where: str = "") -> ManifoldData:
        doc = self.obj(doc, where, MANIFOLD_FIELDS, {"name", "b1", "b_plus", "sigma"})
        p = (lambda f: f"{where}.{f}" if where else f)
        if "kind" in doc and doc["kind"] != "manifold":
            self.fail(p("kind"), "expected 'manifold'")
        b1 = self.int_(doc["b1"], p("b1"), 0)
        z2_rank = self.int_(doc["z2_rank"], p("z2_rank"), b1) if "z2_rank" in doc else None
        quad = self.quad(doc.get("quad", []), p("quad"), b1, bits=False)
        z2_quad = None
        if "z2_quad" in doc:
            z2_quad = self.quad(doc["z2_quad"], p("z2_quad"), b1 if z2_rank is None else z2_rank, bits=True)
        q2 = self.table(doc["q2"], p("q2"), 2, b1) if "q2" in doc else None
        q3 = self.table(doc["q3"], p("q3"), 3, b1) if "q3" in doc else None
        return ManifoldData(
            name=self.str_(doc["name"], p("name")),
            b1=b1,
            b_plus=self.int_(doc["b_plus"], p("b_plus")),
            sigma=self.int_(doc["sigma"], p("sigma")),
            quad=QuadForm(b1, quad),
            q2=q2,
            q3=q3,
            z2_rank=z2_rank,
            z2_quad=None if z2_quad is None else QuadForm(z2_rank if z2_rank is not None else b1, z2_quad),
        )

    def family(self, doc) -> FamilyData:
        doc = self.obj(doc, "", FAMILY_FIELDS, FAMILY_FIELDS - {"segre"})
        b_plus = self.int_(doc["b_plus"], "b_plus", 1)
        base_doc = self.obj(doc["base"], "base", {"basis", "unit", "mult"}, {"basis", "unit"})
        basis = []
        for k, entry in enumerate(self.list_(base_doc["basis"], "base.basis")):
            self.obj(entry, f"base.basis[{k}]", {"name", "deg"}, {"name", "deg"})
            basis.append((self.str_(entry["name"], f"base.basis[{k}].name"),
                          self.int_(entry["deg"], f"base.basis[{k}].deg", 0)))
        size = len(basis)
        if not size:
            self.fail("base.basis", "empty basis")
        unit = self.int_(base_doc["unit"], "base.unit", 1, size) - 1
        products = {}
        for k, entry in enumerate(self.list_(base_doc.get("mult", []), "base.mult")):
            at = f"base.mult[{k}]"
            row = self.list_(entry, at)
            if len(row) != 3:
                self.fail(at, "expected [i, j, [k, ...]]")
            i = self.int_(row[0], f"{at}[0]", 1, size) - 1
            j = self.int_(row[1], f"{at}[1]", 1, size) - 1
            cell = [self.int_(v, f"{at}[2]", 1, size) - 1 for v in self.list_(row[2], f"{at}[2]")]
            if (i, j) in products or (j, i) in products:
                self.fail(at, "duplicate product")
            products[i, j] = cell
        try:
            base = BaseAlgebra.from_products(basis, unit, products)
        except ValueError as exc:
            self.fail("base", str(exc))
        ring = family_ring(base)

        def elem(value, at):
            return ring.from_basis_indices(self.int_(v, f"{at}[{t}]", 1, size) - 1
                                           for t, v in enumerate(self.list_(value, at)))

        w = [elem(v, f"w[{k}]") for k, v in enumerate(self.list_(doc["w"], "w"))]
        segre = {}
        for n, entry in enumerate(self.list_(doc.get("segre", []), "segre")):
            at = f"segre[{n}]"
            self.obj(entry, at, {"k", "s", "t", "r"}, {"k", "s"})
            k = self.int_(entry["k"], f"{at}.k", 0)
            if k in segre:
                self.fail(at, f"duplicate Segre class k = {k}")
            parts = [elem(entry[f], f"{at}.{f}") if f in entry else None for f in ("s", "t", "r")]
            segre[k] = EquivariantSegre(k, *parts)
        return FamilyData(self.str_(doc["name"], "name"), base, b_plus,
                          self.int_(doc["sigma"], "sigma"), self.int_(doc["b1"], "b1", 0), w, segre)


def parse(path: str) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except _DuplicateKey as exc:
        raise ParseError(f"{path}: line {_line_of_repeat(text, exc.key)}: duplicate key {exc.key!r}") from exc
    reader = _Reader(path)
    if not isinstance(doc, dict):
        reader.fail("", "top level must be an object")
    kind = doc.get("kind")
    try:
        if kind == "manifold":
            return InputDocument(kind, reader.manifold(doc), path)
        if kind == "family":
            return InputDocument(kind, reader.family(doc), path)
        if kind == "pair":
            reader.obj(doc, "", {"kind", "x", "y"}, {"x", "y"})
            return InputDocument(kind, (reader.manifold(doc["x"], "x"), reader.manifold(doc["y"], "y")), path)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    reader.fail("kind", f"expected 'manifold', 'family' or 'pair', got {kind!r}")


def manifold_to_json(md: ManifoldData) -> dict:
    out: dict = {"kind": "manifold", "name": md.name, "b1": md.b1, "b_plus": md.b_plus, "sigma": md.sigma,
                 "quad": [{"i": list(k), "c": c} for k, c in md.quad.entries]}
    if md.q2 is not None:
        out["q2"] = [[*k, 1] for k in sorted(md.q2)]
    if md.q3 is not None:
        out["q3"] = [[*k, 1] for k in sorted(md.q3)]
    default_z2 = QuadForm(md.z2_rank, dict(md.quad.mod2().entries))
    if md.z2_rank != md.b1 or md.z2_quad != default_z2:
        out["z2_rank"] = md.z2_rank
        out["z2_quad"] = [{"i": list(k), "c": c % 2} for k, c in md.z2_quad.entries]
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _sw_label(m: int) -> str:
    return "SW(1)" if m == 0 else ("SW(x)" if m == 1 else f"SW(x^{m})")


def _pin2_label(a: int, j: int) -> str:
    parts = ([] if a == 0 else ["u" if a == 1 else f"u^{a}"]) + ([] if j == 0 else ["q" if j == 1 else f"q^{j}"])
    return f"SW_Pin2({'.'.join(parts) or '1'})"


def _manifolds(docs: list[InputDocument]) -> list[ManifoldData]:
    out = []
    for d in docs:
        if d.kind == "pair":
            out.extend(d.payload)
        elif d.kind == "manifold":
            out.append(d.payload)
        else:
            raise ParseError(f"{d.source}: expected a manifold or pair file, got {d.kind}")
    return out


def _two_manifolds(docs) -> tuple[ManifoldData, ManifoldData]:
    mds = _manifolds(docs)
    if len(mds) != 2:
        raise ParseError(f"expected two manifolds, got {len(mds)}")
    return mds[0], mds[1]


def cmd_compute(docs, args) -> tuple[str, int]:
    (md,) = _manifolds(docs)
    rep = compute_report(md, args.m_max, args.j_max)
    code = EXIT_INVALID if rep.diagnostics else EXIT_OK
    if args.json:
        return _dump({
            "name": rep.name, "b1": rep.b1, "b_plus": rep.b_plus, "sigma": rep.sigma,
            "diagnostics": rep.diagnostics,
            "sw": {_sw_label(m): str(v) for m, v in rep.basic.items()},
            "sw_pin2": {_pin2_label(a, j): (None if v is None else
                                             {"value": str(v.value), "exact_below": v.exact_below,
                                              "exact": v.exact})
                        for (a, j), v in sorted(rep.pin2.items(), key=lambda t: (t[0][1], t[0][0]))},
            "nonvanishing": None if rep.nonvanishing is None else
            {"value": rep.nonvanishing[0], "witness": rep.nonvanishing[1]},
            "obstruction": rep.obstruction.value,
        }), code
    lines = [f"manifold: {rep.name}", f"b1 = {rep.b1}, b_plus = {rep.b_plus}, sigma = {rep.sigma}"]
    if rep.diagnostics:
        lines += [f"invalid: {d}" for d in rep.diagnostics]
        return "\n".join(lines) + "\n", code
    lines += [f"{_sw_label(m)} = {v}" for m, v in rep.basic.items()]
    for (a, j), v in sorted(rep.pin2.items(), key=lambda t: (t[0][1], t[0][0])):
        lines.append(f"{_pin2_label(a, j)} = {'undetermined by the data' if v is None else v}")
    ok, why = rep.nonvanishing
    lines.append(f"nonvanishing: {'yes' if ok else 'no'} ({why})")
    lines.append(f"obstruction: {rep.obstruction.value}")
    return "\n".join(lines) + "\n", code


def cmd_connect(docs, args) -> tuple[str, int]:
    x, y = _two_manifolds(docs)
    return _dump(manifold_to_json(connect(x, y))), EXIT_OK


def cmd_verify(docs, args) -> tuple[str, int]:
    x, y = _two_manifolds(docs)
    j_max = 3 if args.j_max is None else args.j_max
    rep = verify_consistency(x, y, j_max)
    code = EXIT_OK if rep.all_passed else EXIT_INTERNAL
    if args.json:
        return _dump({"x": rep.x, "y": rep.y, "b_plus": rep.b_plus, "passed": rep.all_passed,
                      "rows": [{"a": r.a, "j": r.j, "passed": r.passed, "modulus": r.modulus,
                                "product": str(r.product.value), "direct": str(r.direct.value),
                                "detail": r.detail} for r in rep.rows]}), code
    lines = [f"verify-product: {rep.x} # {rep.y} (b_plus = {rep.b_plus})"]
    for r in rep.rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"a={r.a} j={r.j} {status} mod u^{r.modulus}: product {r.product.value}, "
                     f"direct {r.direct.value}" + (f" [{r.detail}]" if r.detail else ""))
    lines.append(rep.summary())
    return "\n".join(lines) + "\n", code


def cmd_obstruct(docs, args) -> tuple[str, int]:
    (md,) = _manifolds(docs)
    verdict = smoothability_obstruction(md.b1, md.b_plus, md.sigma, md.quad)
    if args.json:
        return _dump({"name": md.name, "verdict": verdict.value}), EXIT_OK
    return f"{md.name}: {verdict.value}\n", EXIT_OK


def _or_missing(fn, fd, arg) -> str:
    try:
        return str(fn(fd, arg))
    except MissingSegre as exc:
        return f"undetermined ({exc})"


def cmd_families(docs, args) -> tuple[str, int]:
    (doc,) = docs
    if doc.kind != "family":
        raise ParseError(f"{doc.source}: expected a family file")
    fd: FamilyData = doc.payload
    problems = constraint_check(fd)
    result: dict = {"name": fd.name, "b_plus": fd.b_plus, "sigma": fd.sigma, "b1": fd.b1,
                    "violations": problems}
    if not problems:
        result["euler_hplus"] = str(equivariant_euler_hplus(fd))
        if args.j_max is None:
            # past this j every Segre class involved is zero for degree reasons
            j_max = max(0, (fd.top_degree() + 2) // 4 - 1 - fd.sigma // 16)
        else:
            j_max = args.j_max
        result["sw_pin2"] = {_pin2_label(0, j): _or_missing(families_sw_pin2, fd, j) for j in range(j_max + 1)}
        if fd.w_class(fd.b_plus):
            result["sw"] = None
        else:
            result["sw"] = {_sw_label(2 * j): _or_missing(families_sw, fd, 2 * j) for j in range(j_max + 1)}
    code = EXIT_INVALID if problems else EXIT_OK
    if args.json:
        return _dump(result), code
    lines = [f"family: {fd.name}", f"b_plus = {fd.b_plus}, sigma = {fd.sigma}, b1 = {fd.b1}"]
    if problems:
        lines += [f"violation: {p}" for p in problems]
        return "\n".join(lines) + "\n", code
    lines.append(f"e(H+) = {result['euler_hplus']}")
    lines += [f"{k} = {v}" for k, v in result["sw_pin2"].items()]
    if result["sw"] is None:
        lines.append("SW: no chamber (w_b+ != 0)")
    else:
        lines += [f"{k} = {v}" for k, v in result["sw"].items()]
    return "\n".join(lines) + "\n", code


def _bit_vector(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        vals = json.loads(text)
    elif "," in text:
        vals = [int(t) for t in text.split(",")]
    else:
        vals = [int(t) for t in text]
    if any(v not in (0, 1) for v in vals):
        raise ParseError(f"--a must be a vector of bits, got {text!r}")
    return vals


def cmd_twist(docs, args) -> tuple[str, int]:
    (md,) = _manifolds(docs)
    if args.a is None:
        raise ParseError("twist needs --a")
    require_valid(md)
    return _dump(manifold_to_json(twist_b2(md, _bit_vector(args.a)))), EXIT_OK


COMMANDS = {
    "compute": (cmd_compute, 1),
    "connect": (cmd_connect, 2),
    "verify-product": (cmd_verify, 2),
    "obstruct": (cmd_obstruct, 1),
    "families": (cmd_families, 1),
    "twist": (cmd_twist, 1),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swmod2", description="Mod 2 Seiberg-Witten invariants of spin 4-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, max_files) in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("files", nargs="+" if max_files > 1 else 1, metavar="FILE")
        p.add_argument("--m-max", type=int, default=None)
        p.add_argument("--j-max", type=int, default=None)
        p.add_argument("--a", default=None, help="twist vector, e.g. 0,0,1")
        p.add_argument("--json", action="store_true")
    return parser


def run(docs: list[InputDocument], command: str, args) -> tuple[str, int]:
    handler, max_files = COMMANDS[command]
    if len(docs) > max_files:
        raise ParseError(f"{command} takes at most {max_files} files")
    try:
        return handler(docs, args)
    except InputError as exc:
        return f"error: {exc}\n", EXIT_INVALID
    except ConsistencyError as exc:
        return f"internal consistency failure: {exc}\n", EXIT_INTERNAL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        docs = [parse(path) for path in args.files]
        text, code = run(docs, args.command, args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    stream = sys.stdout if code in (EXIT_OK, EXIT_INVALID) else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

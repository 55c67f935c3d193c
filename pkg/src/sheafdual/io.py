"""Instance files: JSON objects with a ``kind`` tag and fixed field names.

    lattice        {kind, size, leq, labels}
    blo            {kind, size, leq, labels, operators}
    mv             {kind, lukasiewicz} | {kind, boolean} | {kind, labels, oplus, neg, [otimes, imp, meet, join]}
    site           {kind, order, labels, [tensor]}
    name           {kind, algebra, name}     name = [[child, value-label], ...]
    formula-suite  {kind, formulas}

Emission is canonical: keys in the order above, two-space indentation,
tables one row per line, scalar lists and names inline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import ParseError, SheafDualError
from .formula import format_formula, parse_formula
from .lattice import BLO, FiniteLattice, boolean_lattice, build_blo, build_lattice
from .mv import MVAlgebra, MVName, boolean_as_mv, lukasiewicz_chain, mv_from_tables
from .kripke import FiniteSite, build_site

KINDS = ("lattice", "blo", "mv", "site", "name", "formula-suite")
_KEY_ORDER = {
    "lattice": ("kind", "size", "leq", "labels"),
    "blo": ("kind", "size", "leq", "labels", "operators"),
    "mv": ("kind", "lukasiewicz", "boolean", "labels", "oplus", "neg", "otimes", "imp", "meet", "join"),
    "site": ("kind", "order", "labels", "tensor"),
    "name": ("kind", "algebra", "name"),
    "formula-suite": ("kind", "formulas"),
}
_INLINE = {"name", "algebra"}


@dataclass
class InstanceFile:
    kind: str
    payload: dict
    value: Any


# -------------------------------------------------------------- emission

def _scalar(v) -> str:
    return json.dumps(v, ensure_ascii=False)


def _inline(v) -> str:
    return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))


def _dump(value, indent: int, key=None) -> str:
    pad = "  " * indent
    if key in _INLINE:
        return _inline(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(f'{pad}  {_scalar(k)}: {_dump(v, indent + 1, k)}' for k, v in value.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(value, list):
        if all(not isinstance(v, (list, dict)) for v in value):
            return _inline(value)
        body = ",\n".join(pad + "  " + _dump(v, indent + 1) for v in value)
        return "[\n" + body + "\n" + pad + "]"
    return _scalar(value)


def dumps(obj) -> str:
    """Canonical text of a JSON-like object (dicts keep their insertion order)."""
    return _dump(obj, 0) + "\n"


def _order(kind, payload) -> dict:
    keys = _KEY_ORDER[kind]
    return {k: payload[k] for k in keys if k in payload}


def _bits(table):
    return [[1 if v else 0 for v in row] for row in table]


def name_to_json(x: MVName, L: MVAlgebra) -> list:
    return [[name_to_json(c, L), L.labels[v]] for c, v in x.entries]


def payload_of(obj, algebra_spec: dict = None) -> dict:
    """Canonical payload for a domain object."""
    if isinstance(obj, BLO) and obj.operators:
        L = obj.lattice
        return {"kind": "blo", "size": L.size, "leq": _bits(L.leq), "labels": list(L.labels),
                "operators": [list(f) for f in obj.operators]}
    if isinstance(obj, (FiniteLattice, BLO)):
        L = obj.lattice
        return {"kind": "lattice", "size": L.size, "leq": _bits(L.leq), "labels": list(L.labels)}
    if isinstance(obj, FiniteSite):
        p = {"kind": "site", "order": _bits(obj.leq), "labels": list(obj.labels)}
        if obj.tensor is not None and obj.size > 1:
            p["tensor"] = [list(r) for r in obj.tensor]
        return p
    if isinstance(obj, MVAlgebra):
        if obj.numeric is not None:
            return {"kind": "mv", "lukasiewicz": obj.size - 1}
        return {"kind": "mv", "labels": list(obj.labels), "oplus": [list(r) for r in obj.oplus],
                "neg": list(obj.neg), "otimes": [list(r) for r in obj.otimes],
                "imp": [list(r) for r in obj.imp], "meet": [list(r) for r in obj.meet],
                "join": [list(r) for r in obj.join]}
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], MVName):
        x, L = obj
        spec = algebra_spec or {k: v for k, v in payload_of(L).items() if k != "kind"}
        return {"kind": "name", "algebra": spec, "name": name_to_json(x, L)}
    if isinstance(obj, list):
        return {"kind": "formula-suite", "formulas": [format_formula(p) for p in obj]}
    raise TypeError(f"cannot emit {type(obj).__name__}")


def emit(obj) -> str:
    if isinstance(obj, InstanceFile):
        return dumps(_order(obj.kind, obj.payload))
    payload = payload_of(obj)
    return dumps(_order(payload["kind"], payload))


# --------------------------------------------------------------- parsing

def _locate(text: str, key: str):
    needle = json.dumps(key)
    pos = text.find(needle)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


class _Fail(Exception):
    def __init__(self, key, message):
        super().__init__(message)
        self.key = key
        self.message = message


def _need(payload, key, kind=None):
    if key not in payload:
        raise _Fail("kind", f"missing field {key!r}")
    v = payload[key]
    if kind is not None and not isinstance(v, kind):
        raise _Fail(key, f"field {key!r} has the wrong type")
    return v


def _table(payload, key, n=None):
    rows = _need(payload, key, list)
    if not all(isinstance(r, list) for r in rows):
        raise _Fail(key, f"{key!r} must be a list of rows")
    size = len(rows) if n is None else n
    if len(rows) != size or any(len(r) != size for r in rows):
        raise _Fail(key, f"{key!r} is not a square table of size {size}")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, int):
                raise _Fail(key, f"{key!r} entries must be integers")
    return rows


def _int_list(payload, key, n):
    row = _need(payload, key, list)
    if len(row) != n or any(isinstance(v, bool) or not isinstance(v, int) for v in row):
        raise _Fail(key, f"{key!r} must list {n} integers")
    return row


def _labels(payload, n):
    if "labels" not in payload:
        return None
    labels = _need(payload, "labels", list)
    if len(labels) != n or not all(isinstance(s, str) for s in labels):
        raise _Fail("labels", f"'labels' must list {n} strings")
    if len(set(labels)) != n:
        raise _Fail("labels", "labels must be distinct")
    return labels


def _mv_from(spec: dict) -> MVAlgebra:
    if "lukasiewicz" in spec:
        n = _need(spec, "lukasiewicz", int)
        if n < 1:
            raise _Fail("lukasiewicz", "'lukasiewicz' must be at least 1")
        return lukasiewicz_chain(n)
    if "boolean" in spec:
        k = _need(spec, "boolean", int)
        if not 0 <= k <= 4:
            raise _Fail("boolean", "'boolean' must be between 0 and 4")
        return boolean_as_mv(boolean_lattice(k))
    labels = _need(spec, "labels", list)
    n = len(labels)
    oplus = _table(spec, "oplus", n)
    neg = _int_list(spec, "neg", n)
    for key, rows in (("oplus", oplus), ("neg", [neg])):
        if any(not 0 <= v < n for r in rows for v in r):
            raise _Fail(key, f"{key!r} entries must be element indices")
    A = mv_from_tables(labels, oplus, neg)
    overrides = {}
    for key in ("otimes", "imp", "meet", "join"):
        if key in spec:
            rows = _table(spec, key, n)
            overrides[key] = tuple(tuple(r) for r in rows)
    if overrides:
        from dataclasses import replace
        A = replace(A, **overrides)
    return A


def _name_from(data, L: MVAlgebra) -> MVName:
    if not isinstance(data, list):
        raise _Fail("name", "a name is a list of [child, value] pairs")
    entries = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], str)):
            raise _Fail("name", "each name entry must be [child, value-label]")
        if item[1] not in L.labels:
            raise _Fail("name", f"unknown truth value {item[1]!r}")
        entries.append((_name_from(item[0], L), L.labels.index(item[1])))
    try:
        return MVName(entries)
    except ValueError as exc:
        raise _Fail("name", str(exc)) from exc


def _build(payload: dict):
    kind = _need(payload, "kind", str)
    if kind not in KINDS:
        raise _Fail("kind", f"unknown kind {kind!r}")
    unknown = [k for k in payload if k not in _KEY_ORDER[kind]]
    if unknown:
        raise _Fail(unknown[0], f"unexpected field {unknown[0]!r} for kind {kind!r}")
    if kind in ("lattice", "blo"):
        n = _need(payload, "size", int)
        leq = _table(payload, "leq", n)
        labels = _labels(payload, n)
        try:
            L = build_lattice(leq, labels)
        except ValueError as exc:
            raise _Fail("leq", str(exc)) from exc
        if kind == "lattice":
            return L
        ops = _need(payload, "operators", list)
        for f in ops:
            if not (isinstance(f, list) and len(f) == n
                    and all(isinstance(v, int) and 0 <= v < n for v in f)):
                raise _Fail("operators", f"each operator must list {n} element indices")
        return build_blo(L, ops)
    if kind == "mv":
        return _mv_from(payload)
    if kind == "site":
        order = _table(payload, "order")
        n = len(order)
        labels = _labels(payload, n)
        tensor = _table(payload, "tensor", n) if "tensor" in payload else None
        return build_site(order, tensor, labels)
    if kind == "name":
        spec = _need(payload, "algebra", dict)
        L = _mv_from(spec)
        return _name_from(_need(payload, "name", list), L), L
    formulas = _need(payload, "formulas", list)
    out = []
    for f in formulas:
        if not isinstance(f, str):
            raise _Fail("formulas", "formulas must be strings")
        try:
            out.append(parse_formula(f))
        except ParseError as exc:
            raise _Fail("formulas", f"formula {f!r}: {exc.message}") from exc
    return out


def parse(text: str) -> InstanceFile:
    """Parse an instance file; errors carry a line and column."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from exc
    if not isinstance(payload, dict):
        raise ParseError(1, 1, "top level must be an object")
    try:
        value = _build(payload)
    except _Fail as exc:
        line, col = _locate(text, exc.key)
        raise ParseError(line, col, exc.message) from exc
    except SheafDualError as exc:
        line, col = _locate(text, "operators" if payload.get("kind") == "blo" else "leq")
        exc.line, exc.column = line, col
        raise
    canonical = payload_of(value, payload.get("algebra") if payload.get("kind") == "name" else None)
    if payload.get("kind") == "mv":
        canonical = {k: payload[k] for k in _KEY_ORDER["mv"] if k in payload}
        if "lukasiewicz" not in payload and "boolean" not in payload:
            canonical["labels"] = list(value.labels)
    if payload.get("kind") == "blo" and canonical["kind"] == "lattice":
        canonical = {**canonical, "kind": "blo", "operators": [list(f) for f in value.operators]}
    return InstanceFile(payload["kind"], canonical, value)


def load(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())

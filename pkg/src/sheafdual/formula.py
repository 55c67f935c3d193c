"""Formulas of the set-theoretic language in prefix syntax.

    (mem x y)  (eq x y)  (and p q)  (or p q)  (imp p q)  (tensor p q)
    (not p)    (all v p) (ex v p)

Atoms take variable names only; values come from an environment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError


@dataclass(frozen=True)
class Mem:
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class All:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Ex:
    var: str
    body: "Formula"


Formula = Union[Mem, Eq, And, Or, Imp, Tensor, Not, All, Ex]

_ATOMS = {"mem": Mem, "eq": Eq}
_BINARY = {"and": And, "or": Or, "imp": Imp, "tensor": Tensor}
_QUANT = {"all": All, "ex": Ex}
_NAMES = {Mem: "mem", Eq: "eq", And: "and", Or: "or", Imp: "imp", Tensor: "tensor",
          Not: "not", All: "all", Ex: "ex"}
_TOKEN = re.compile(r"\s*(?:(\()|(\))|([A-Za-z_][A-Za-z0-9_']*))")


def _tokens(text):
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        if text[pos] in " \t\r\n":
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        start = m.start(m.lastindex)
        yield m.group(m.lastindex), line, start - line_start + 1
        pos = m.end()


def parse_formula(text: str) -> Formula:
    toks = list(_tokens(text))
    if not toks:
        raise ParseError(1, 1, "empty formula")
    k = 0

    def fail(msg):
        if k < len(toks):
            _, line, col = toks[k]
        else:
            line = text.count("\n") + 1
            col = len(text) - (text.rfind("\n") + 1) + 1
        raise ParseError(line, col, msg)

    def expect(tok):
        nonlocal k
        if k >= len(toks) or toks[k][0] != tok:
            fail(f"expected {tok!r}")
        k += 1

    def ident():
        nonlocal k
        if k >= len(toks) or toks[k][0] in "()":
            fail("expected a variable name")
        k += 1
        return toks[k - 1][0]

    def formula():
        nonlocal k
        expect("(")
        if k >= len(toks):
            fail("expected a connective")
        op = toks[k][0]
        if op in _ATOMS:
            k += 1
            node = _ATOMS[op](ident(), ident())
        elif op in _BINARY:
            k += 1
            node = _BINARY[op](formula(), formula())
        elif op == "not":
            k += 1
            node = Not(formula())
        elif op in _QUANT:
            k += 1
            node = _QUANT[op](ident(), formula())
        else:
            fail(f"unknown connective {op!r}")
        expect(")")
        return node

    node = formula()
    if k != len(toks):
        fail("trailing input")
    return node


def format_formula(phi: Formula) -> str:
    tag = _NAMES[type(phi)]
    if isinstance(phi, (Mem, Eq)):
        return f"({tag} {phi.left} {phi.right})"
    if isinstance(phi, Not):
        return f"(not {format_formula(phi.body)})"
    if isinstance(phi, (All, Ex)):
        return f"({tag} {phi.var} {format_formula(phi.body)})"
    return f"({tag} {format_formula(phi.left)} {format_formula(phi.right)})"


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, (Mem, Eq)):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (All, Ex)):
        return free_vars(phi.body) - {phi.var}
    return free_vars(phi.left) | free_vars(phi.right)


def uses_tensor(phi: Formula) -> bool:
    if isinstance(phi, Tensor):
        return True
    if isinstance(phi, (Mem, Eq)):
        return False
    if isinstance(phi, (Not, All, Ex)):
        return uses_tensor(phi.body)
    return uses_tensor(phi.left) or uses_tensor(phi.right)


def satisfies(phi: Formula, env: dict, domain) -> bool:
    """Classical satisfaction over hereditarily finite sets (nested frozensets).

    Quantifiers range over ``domain``; the tensor is read as conjunction.
    """
    if isinstance(phi, Mem):
        return env[phi.left] in env[phi.right]
    if isinstance(phi, Eq):
        return env[phi.left] == env[phi.right]
    if isinstance(phi, (And, Tensor)):
        return satisfies(phi.left, env, domain) and satisfies(phi.right, env, domain)
    if isinstance(phi, Or):
        return satisfies(phi.left, env, domain) or satisfies(phi.right, env, domain)
    if isinstance(phi, Imp):
        return not satisfies(phi.left, env, domain) or satisfies(phi.right, env, domain)
    if isinstance(phi, Not):
        return not satisfies(phi.body, env, domain)
    if isinstance(phi, All):
        return all(satisfies(phi.body, {**env, phi.var: d}, domain) for d in domain)
    if isinstance(phi, Ex):
        return any(satisfies(phi.body, {**env, phi.var: d}, domain) for d in domain)
    raise TypeError(f"not a formula: {phi!r}")


DEFAULT_SUITE = (
    "(mem x y)",
    "(eq x y)",
    "(eq x x)",
    "(not (mem x x))",
    "(or (mem x y) (not (mem x y)))",
    "(and (mem x y) (mem y x))",
    "(imp (mem x y) (mem x y))",
    "(imp (eq x y) (eq y x))",
    "(tensor (mem x y) (eq x x))",
    "(ex z (mem z y))",
    "(all z (imp (mem z x) (mem z y)))",
    "(ex z (and (mem z x) (mem z y)))",
    "(all z (or (mem z x) (not (mem z x))))",
    "(ex z (eq z x))",
    "(all z (imp (eq z x) (eq x z)))",
    "(not (ex z (and (mem z x) (not (mem z y)))))",
    "(imp (and (mem x y) (eq x z)) (mem z y))",
    "(or (eq x y) (mem y x))",
    "(all z (not (mem z z)))",
    "(ex z (or (mem z y) (eq z x)))",
)
"""Twenty formulas in the variables x, y, z (z bound or supplied)."""


def default_suite() -> list:
    return [parse_formula(s) for s in DEFAULT_SUITE]

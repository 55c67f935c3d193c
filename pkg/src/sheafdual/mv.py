"""Finite MV algebras and many-valued forcing over bounded name universes.

Elements of an algebra are indices ``0..n-1``; ``labels`` gives their printed
form.  A name is a finite function from names to algebra elements.  Truth
values of ``∈``, ``⊆`` and ``=`` are computed by mutual recursion on rank:

    ||x ∈ y|| = sup_{t ∈ dom y} ||x = t|| ⊗ y(t)
    ||x ⊆ y|| = inf_{t ∈ dom x} x(t) → ||t ∈ y||          (mode "standard")
    ||x ⊆ y|| = inf_{t ∈ dom x} x(t) ⊗ (1 → ||t ∈ y||)    (mode "paper-literal")
    ||x = y|| = ||x ⊆ y|| ⊗ ||y ⊆ x||

Quantifiers range over all names of rank at most R whose values lie in a chosen
value set and whose domains have at most a chosen size.  This is a bounded
approximation of quantification over the whole hierarchy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Optional

from . import config
from .errors import NotBoolean, RankOverflow, UniverseTooLarge
from .formula import And, All, Eq, Ex, Imp, Mem, Not, Or, Tensor, default_suite, satisfies
from .lattice import build_lattice, complement, is_boolean, is_distributive

MODES = ("standard", "paper-literal")
MAX_NAME_RANK = 16


# ---------------------------------------------------------------- algebras

@dataclass(frozen=True, eq=False)
class MVAlgebra:
    labels: tuple
    oplus: tuple
    neg: tuple
    otimes: tuple
    imp: tuple
    meet: tuple
    join: tuple
    zero: int
    one: int
    numeric: Optional[tuple] = None

    @property
    def size(self) -> int:
        return len(self.labels)

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def sup(self, values, start=None) -> int:
        acc = self.zero if start is None else start
        for v in values:
            acc = self.join[acc][v]
        return acc

    def inf(self, values) -> int:
        acc = self.one
        for v in values:
            acc = self.meet[acc][v]
        return acc

    @cached_property
    def is_boolean(self) -> bool:
        return all(self.otimes[a][a] == a for a in range(self.size))

    def __repr__(self):
        return f"MVAlgebra({list(self.labels)})"


def _fraction_label(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def lukasiewicz_chain(n: int) -> MVAlgebra:
    """The (n+1)-element Łukasiewicz chain {0, 1/n, ..., 1}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    vals = [Fraction(k, n) for k in range(n + 1)]
    idx = {v: k for k, v in enumerate(vals)}
    r = range(n + 1)

    def table(op):
        return tuple(tuple(idx[op(vals[a], vals[b])] for b in r) for a in r)

    return MVAlgebra(
        labels=tuple(_fraction_label(v) for v in vals),
        oplus=table(lambda a, b: min(Fraction(1), a + b)),
        neg=tuple(idx[1 - v] for v in vals),
        otimes=table(lambda a, b: max(Fraction(0), a + b - 1)),
        imp=table(lambda a, b: min(Fraction(1), 1 - a + b)),
        meet=table(min),
        join=table(max),
        zero=0,
        one=n,
        numeric=tuple(vals),
    )


def boolean_as_mv(B) -> MVAlgebra:
    """A Boolean lattice as an MV algebra: ⊕ = ∨, ⊗ = ∧, → material implication."""
    B = B.lattice
    if not is_boolean(B):
        raise NotBoolean("lattice is not Boolean")
    r = range(B.size)
    neg = tuple(complement(B, a) for a in r)
    A = MVAlgebra(
        labels=B.labels,
        oplus=B.join,
        neg=neg,
        otimes=B.meet,
        imp=tuple(tuple(B.join[neg[a]][b] for b in r) for a in r),
        meet=B.meet,
        join=B.join,
        zero=B.bottom,
        one=B.top,
    )
    report = validate_mv(A)
    assert report.passed, report.failures
    return A


def mv_from_tables(labels, oplus, neg) -> MVAlgebra:
    """Derive ⊗, →, ∧, ∨, 0 and 1 from ⊕ and ¬ by the usual definitions."""
    n = len(labels)
    r = range(n)
    oplus = tuple(tuple(row) for row in oplus)
    neg = tuple(neg)
    if len(oplus) != n or any(len(row) != n for row in oplus) or len(neg) != n:
        raise ValueError("operation tables must be total on the carrier")
    zeros = [z for z in r if all(oplus[x][z] == x for x in r)]
    if not zeros:
        raise ValueError("⊕ has no neutral element")
    zero = zeros[0]
    otimes = tuple(tuple(neg[oplus[neg[a]][neg[b]]] for b in r) for a in r)
    imp = tuple(tuple(oplus[neg[a]][b] for b in r) for a in r)
    join = tuple(tuple(oplus[neg[oplus[neg[a]][b]]][b] for b in r) for a in r)
    meet = tuple(tuple(neg[join[neg[a]][neg[b]]] for b in r) for a in r)
    return MVAlgebra(tuple(labels), oplus, neg, otimes, imp, meet, join, zero, neg[zero])


@dataclass
class MVReport:
    failures: dict = field(default_factory=dict)   # axiom -> first witness
    checked: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_mv(A: MVAlgebra) -> MVReport:
    """Check the MV axioms, the derived operations and residuation exhaustively."""
    rep = MVReport()
    r = range(A.size)
    o, n, z = A.oplus, A.neg, A.zero
    one = n[z]

    def check(name, pred, arity):
        rep.checked.append(name)
        for args in itertools.product(r, repeat=arity):
            if not pred(*args):
                rep.failures[name] = tuple(A.labels[i] for i in args)
                return

    check("oplus-associative", lambda a, b, c: o[o[a][b]][c] == o[a][o[b][c]], 3)
    check("oplus-commutative", lambda a, b: o[a][b] == o[b][a], 2)
    check("oplus-unit", lambda a: o[a][z] == a, 1)
    check("double-negation", lambda a: n[n[a]] == a, 1)
    check("absorbing-top", lambda a: o[a][one] == one, 1)
    check("lukasiewicz", lambda a, b: o[n[o[n[a]][b]]][b] == o[n[o[n[b]][a]]][a], 2)
    check("one-is-neg-zero", lambda: A.one == one, 0)
    check("otimes-definition", lambda a, b: A.otimes[a][b] == n[o[n[a]][n[b]]], 2)
    check("imp-definition", lambda a, b: A.imp[a][b] == o[n[a]][b], 2)
    check("join-definition", lambda a, b: A.join[a][b] == o[n[o[n[a]][b]]][b], 2)
    check("meet-definition", lambda a, b: A.meet[a][b] == n[A.join[n[a]][n[b]]], 2)
    check("residuation",
          lambda a, b, c: A.leq(A.otimes[a][b], c) == A.leq(a, A.imp[b][c]), 3)
    rep.checked.append("distributive-lattice-reduct")
    try:
        L = build_lattice([[A.leq(a, b) for b in r] for a in r])
        verdict = is_distributive(L)
        if not verdict.holds:
            rep.failures["distributive-lattice-reduct"] = tuple(A.labels[i] for i in verdict.witness)
        elif (L.bottom, L.top) != (A.zero, A.one):
            rep.failures["distributive-lattice-reduct"] = ("bounds",)
    except Exception as exc:  # order derived from ∧ is not a lattice order
        rep.failures["distributive-lattice-reduct"] = (str(exc),)
    return rep


def tampered(A: MVAlgebra, a: str, b: str, value: str) -> MVAlgebra:
    """Copy of A with one ⊗ entry (and its mirror) overwritten; for failure demos."""
    i, j, v = A.index(a), A.index(b), A.index(value)
    rows = [list(row) for row in A.otimes]
    rows[i][j] = rows[j][i] = v
    return replace(A, otimes=tuple(map(tuple, rows)))


# ------------------------------------------------------------------- names

class MVName:
    """A finite function from names to algebra elements, compared structurally."""

    __slots__ = ("entries", "rank", "sort_key", "_hash")

    def __init__(self, entries=()):
        merged = {}
        for child, value in entries:
            if not isinstance(child, MVName):
                raise TypeError("domain elements must be MVName")
            if child in merged and merged[child] != value:
                raise ValueError("conflicting values for one domain element")
            merged[child] = int(value)
        items = sorted(merged.items(), key=lambda kv: kv[0].sort_key)
        object.__setattr__(self, "entries", tuple(items))
        object.__setattr__(self, "rank", 1 + max((c.rank for c, _ in items), default=-1))
        key = (self.rank, tuple((c.sort_key, v) for c, v in items))
        object.__setattr__(self, "sort_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, *_):
        raise AttributeError("MVName is immutable")

    @property
    def domain(self) -> tuple:
        return tuple(c for c, _ in self.entries)

    def value(self, child: "MVName", default=None):
        for c, v in self.entries:
            if c == child:
                return v
        return default

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, MVName) and self._hash == other._hash
                                 and self.entries == other.entries)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __len__(self):
        return len(self.entries)

    def show(self, L: Optional[MVAlgebra] = None) -> str:
        def val(v):
            return L.labels[v] if L is not None else str(v)
        return "{" + ", ".join(f"{c.show(L)}:{val(v)}" for c, v in self.entries) + "}"

    def __repr__(self):
        return f"MVName({self.show()})"


EMPTY = MVName()


def canonical_name(s, L: MVAlgebra) -> MVName:
    """Name of a hereditarily finite set (nested frozensets) with every value 1."""
    return MVName((canonical_name(m, L), L.one) for m in s)


def von_neumann(k: int) -> frozenset:
    s = frozenset()
    for _ in range(k):
        s = s | {s}
    return s


def hf_sets(rank: int) -> list:
    """All hereditarily finite sets of rank below ``rank`` (V_rank), canonical order."""
    level = [frozenset()] if rank >= 1 else []
    for _ in range(rank - 1):
        level = [frozenset(c) for k in range(len(level) + 1)
                 for c in itertools.combinations(level, k)]
    return level


def universe_size(L: MVAlgebra, R: int, values=None, max_domain=None) -> int:
    nv = len(values) if values is not None else L.size
    count = 1
    for _ in range(R):
        cap = count if max_domain is None else min(count, max_domain)
        count = sum(comb(count, k) * nv ** k for k in range(cap + 1))
    return count


def names_upto(L: MVAlgebra, R: int, values=None, max_domain=None, budget=None) -> list:
    """All names of rank ≤ R with values in ``values`` and domains of size ≤ ``max_domain``."""
    values = tuple(sorted(set(range(L.size) if values is None else values)))
    limit = config.budget(budget)
    total = universe_size(L, R, values, max_domain)
    if total > limit:
        raise UniverseTooLarge(total, limit)
    level = [EMPTY]
    for _ in range(R):
        cap = len(level) if max_domain is None else min(len(level), max_domain)
        nxt = []
        for k in range(cap + 1):
            for dom in itertools.combinations(level, k):
                for vals in itertools.product(values, repeat=k):
                    nxt.append(MVName(zip(dom, vals)))
        level = sorted(set(nxt))
    return level


# ------------------------------------------------------------ truth values

class MVValuation:
    """Memoized truth values of atomic statements about names over one algebra.

    The memo tables are idempotent caches: concurrent writers for one key all
    store the same value.
    """

    def __init__(self, L: MVAlgebra, mode: str = "standard", max_rank: int = MAX_NAME_RANK):
        if mode not in MODES:
            raise ValueError(f"unknown subset mode {mode!r}")
        self.L = L
        self.mode = mode
        self.max_rank = max_rank
        self._mem: dict = {}
        self._sub: dict = {}
        self._eq: dict = {}

    def _guard(self, *names):
        for x in names:
            if x.rank > self.max_rank:
                raise RankOverflow(f"name of rank {x.rank} exceeds depth {self.max_rank}")

    def mem(self, x: MVName, y: MVName) -> int:
        key = (x, y)
        v = self._mem.get(key)
        if v is None:
            self._guard(x, y)
            L = self.L
            v = L.zero
            for t, yt in y.entries:
                v = L.join[v][L.otimes[self.eq(x, t)][yt]]
            self._mem[key] = v
        return v

    def sub(self, x: MVName, y: MVName) -> int:
        key = (x, y)
        v = self._sub.get(key)
        if v is None:
            self._guard(x, y)
            L = self.L
            v = L.one
            for t, xt in x.entries:
                inner = self.mem(t, y)
                if self.mode == "standard":
                    term = L.imp[xt][inner]
                else:
                    term = L.otimes[xt][L.imp[L.one][inner]]
                v = L.meet[v][term]
            self._sub[key] = v
        return v

    def eq(self, x: MVName, y: MVName) -> int:
        key = (x, y)
        v = self._eq.get(key)
        if v is None:
            v = self.L.otimes[self.sub(x, y)][self.sub(y, x)]
            self._eq[key] = v
            self._eq[(y, x)] = v
        return v

    def atomic(self, kind: str, x: MVName, y: MVName) -> int:
        if kind == "membership":
            return self.mem(x, y)
        if kind == "subset":
            return self.sub(x, y)
        if kind == "equality":
            return self.eq(x, y)
        raise ValueError(f"unknown atomic kind {kind!r}")


def atomic_value(kind: str, x: MVName, y: MVName, L: MVAlgebra, mode: str = "standard") -> int:
    return MVValuation(L, mode).atomic(kind, x, y)


class MVModel:
    """An algebra, a subset mode and a bounded quantifier universe."""

    def __init__(self, L: MVAlgebra, R: int = 2, mode: str = "standard", values=None,
                 max_domain=None, budget=None):
        self.L = L
        self.R = R
        self.mode = mode
        self.values = values
        self.max_domain = max_domain
        self.budget = budget
        self.valuation = MVValuation(L, mode)

    @cached_property
    def universe(self) -> list:
        return names_upto(self.L, self.R, self.values, self.max_domain, self.budget)

    def value(self, phi, env: dict) -> int:
        return self._eval(phi, env)

    def _eval(self, phi, env) -> int:
        L, val = self.L, self.valuation
        if isinstance(phi, Mem):
            return val.mem(env[phi.left], env[phi.right])
        if isinstance(phi, Eq):
            return val.eq(env[phi.left], env[phi.right])
        if isinstance(phi, Not):
            return L.neg[self._eval(phi.body, env)]
        if isinstance(phi, (All, Ex)):
            vals = (self._eval(phi.body, {**env, phi.var: u}) for u in self.universe)
            return L.inf(vals) if isinstance(phi, All) else L.sup(vals)
        a = self._eval(phi.left, env)
        b = self._eval(phi.right, env)
        if isinstance(phi, And):
            return L.meet[a][b]
        if isinstance(phi, Or):
            return L.join[a][b]
        if isinstance(phi, Imp):
            return L.imp[a][b]
        if isinstance(phi, Tensor):
            return L.otimes[a][b]
        raise TypeError(f"not a formula: {phi!r}")


def _needs_universe(phi) -> bool:
    if isinstance(phi, (All, Ex)):
        return True
    if isinstance(phi, (Mem, Eq)):
        return False
    if isinstance(phi, Not):
        return _needs_universe(phi.body)
    return _needs_universe(phi.left) or _needs_universe(phi.right)


def eval_formula(phi, env: dict, L: MVAlgebra, R: int = 2, mode: str = "standard",
                 values=None, max_domain=None, budget=None, model: MVModel = None) -> int:
    """Truth value of ``phi`` under ``env`` (variable -> MVName)."""
    if any(x.rank > R for x in env.values()):
        raise RankOverflow(f"environment name exceeds rank bound {R}")
    model = model or MVModel(L, R, mode, values, max_domain, budget)
    return model.value(phi, env)


# ------------------------------------------------------ filters and generics

@dataclass(frozen=True)
class MVFilter:
    algebra: MVAlgebra = field(compare=False, repr=False)
    carrier: frozenset
    proper: bool = True
    ultra: bool = False

    def __contains__(self, a) -> bool:
        return a in self.carrier

    def show(self) -> str:
        return "{" + ",".join(self.algebra.labels[a] for a in sorted(self.carrier)) + "}"


def _is_filter(L: MVAlgebra, S: frozenset) -> bool:
    if L.one not in S:
        return False
    for a in S:
        for b in range(L.size):
            if L.leq(a, b) and b not in S:
                return False
        for b in S:
            if L.otimes[a][b] not in S:
                return False
    return True


def enumerate_filters(L: MVAlgebra) -> list:
    """Every ⊗-closed upward-closed subset containing 1, with maximal proper ones flagged."""
    others = [a for a in range(L.size) if a != L.one]
    found = []
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            S = frozenset(extra) | {L.one}
            if _is_filter(L, S):
                found.append(S)
    proper = [S for S in found if L.zero not in S]
    out = []
    for S in found:
        is_proper = L.zero not in S
        ultra = is_proper and not any(S < T for T in proper)
        out.append(MVFilter(L, S, is_proper, ultra))
    out.sort(key=lambda F: (len(F.carrier), sorted(F.carrier)))
    return out


def ultrafilters(L: MVAlgebra) -> list:
    return [F for F in enumerate_filters(L) if F.ultra]


def interpret(x: MVName, G) -> frozenset:
    """x^G = {y^G : x(y) ∈ G}."""
    carrier = G.carrier if isinstance(G, MVFilter) else frozenset(G)
    return frozenset(interpret(y, carrier) for y, v in x.entries if v in carrier)


@dataclass
class GenericReport:
    ultrafilter: str
    mode: str
    pairs_checked: int = 0
    membership_failures: list = field(default_factory=list)
    equality_failures: list = field(default_factory=list)
    formulas_checked: int = 0
    formula_failures: list = field(default_factory=list)

    @property
    def membership_holds(self) -> bool:
        return not self.membership_failures

    @property
    def equality_holds(self) -> bool:
        return not self.equality_failures

    @property
    def formulas_hold(self) -> bool:
        return not self.formula_failures

    @property
    def holds(self) -> bool:
        return self.membership_holds and self.equality_holds and self.formulas_hold


def default_envs(names, k: int = 6) -> list:
    """Environments x, y over the first k names, with z = x."""
    head = list(names)[:k]
    return [{"x": a, "y": b, "z": a} for a in head for b in head]


def check_generic_theorems(L: MVAlgebra, names, G: MVFilter, formulas=None, envs=None,
                           model: MVModel = None, mode: str = "standard", R: int = 2,
                           max_failures: int = 20) -> GenericReport:
    """Compare x^G ∈ y^G, x^G = y^G and M[G] ⊨ φ against membership of truth values in G.

    Quantifiers on both sides range over the model's bounded universe and its
    interpretation respectively.
    """
    model = model or MVModel(L, R, mode)
    val = model.valuation
    names = list(names)
    rep = GenericReport(G.show(), model.mode)
    image = {x: interpret(x, G) for x in names}
    for x in names:
        for y in names:
            rep.pairs_checked += 1
            if (image[x] in image[y]) != (val.mem(x, y) in G):
                if len(rep.membership_failures) < max_failures:
                    rep.membership_failures.append((x, y))
            if (image[x] == image[y]) != (val.eq(x, y) in G):
                if len(rep.equality_failures) < max_failures:
                    rep.equality_failures.append((x, y))
    formulas = default_suite() if formulas is None else formulas
    envs = default_envs(names) if envs is None else envs
    domain = frozenset(interpret(u, G) for u in model.universe) if any(
        _needs_universe(p) for p in formulas) else frozenset()
    for phi in formulas:
        for env in envs:
            rep.formulas_checked += 1
            classical = satisfies(phi, {v: interpret(n, G) for v, n in env.items()}, domain)
            if classical != (model.value(phi, env) in G):
                if len(rep.formula_failures) < max_failures:
                    rep.formula_failures.append((phi, env))
    return rep


def forces(p: int, phi, env: dict, L: MVAlgebra, R: int = 2, mode: str = "standard",
           values=None, max_domain=None, budget=None, model: MVModel = None) -> bool:
    """p ⊩ φ: every ultrafilter containing p satisfies φ in the interpreted structure."""
    model = model or MVModel(L, R, mode, values, max_domain, budget)
    needs = _needs_universe(phi)
    for G in ultrafilters(L):
        if p not in G:
            continue
        domain = frozenset(interpret(u, G) for u in model.universe) if needs else frozenset()
        if not satisfies(phi, {v: interpret(n, G) for v, n in env.items()}, domain):
            return False
    return True


def forcing_lemma_check(L: MVAlgebra, formulas, envs, model: MVModel = None, R: int = 2) -> list:
    """For a Boolean algebra: p ⊩ φ iff p ≤ ||φ||.  Returns the disagreements."""
    model = model or MVModel(L, R)
    bad = []
    for phi in formulas:
        for env in envs:
            v = model.value(phi, env)
            for p in range(L.size):
                if forces(p, phi, env, L, model=model) != L.leq(p, v):
                    bad.append((p, phi, env))
    return bad


# ---------------------------------------------------------- axiom witnesses

def pair_name(a: MVName, b: MVName, L: MVAlgebra) -> MVName:
    return MVName([(a, L.one), (b, L.one)])


def separation_name(X: MVName, L: MVAlgebra) -> MVName:
    return MVName((t, L.one) for u in X.domain for t in u.domain)


def power_name(X: MVName, L: MVAlgebra) -> MVName:
    dom = X.domain
    choices = [[v for v in range(L.size) if L.leq(v, X.value(t))] for t in dom]
    return MVName((MVName(zip(dom, vals)), L.one) for vals in itertools.product(*choices))


def collection_name(X: MVName, phi, model: MVModel, u_var="u", v_var="v") -> MVName:
    """Union of sets S_u realizing sup_v ||φ(u, v)|| over the bounded universe."""
    L = model.L
    dom = set()
    for u in X.domain:
        target = L.sup(model.value(phi, {u_var: u, v_var: v}) for v in model.universe)
        acc = L.zero
        for v in model.universe:
            if acc == target:
                break
            w = model.value(phi, {u_var: u, v_var: v})
            if L.join[acc][w] != acc:
                acc = L.join[acc][w]
                dom.add(v)
    return MVName((v, L.one) for v in dom)


@dataclass
class AxiomReport:
    pairing: list = field(default_factory=list)      # (a, b, value)
    separation: list = field(default_factory=list)   # (X, Y, ||Y ⊆ X||)
    power: list = field(default_factory=list)        # (X, Y, value)
    collection: list = field(default_factory=list)   # (X, Y, value)

    def summary(self) -> dict:
        return {k: [row[-1] for row in getattr(self, k)]
                for k in ("pairing", "separation", "power", "collection")}


def axiom_witnesses(L: MVAlgebra, R: int = 2, mode: str = "standard", values=None,
                    max_domain: int = 2, budget=None, instances=None) -> AxiomReport:
    """Build the pairing, separation, power-set and collection witness names and evaluate them."""
    if R < 2:
        raise ValueError("R must be at least 2")
    model = MVModel(L, R, mode, values, max_domain, budget)
    val = model.valuation
    hat = lambda s: canonical_name(s, L)  # noqa: E731
    zero_, one_, two_ = hat(von_neumann(0)), hat(von_neumann(1)), hat(von_neumann(2))
    rep = AxiomReport()
    small = [zero_, one_]
    for a in small:
        for b in small:
            c = pair_name(a, b, L)
            rep.pairing.append((a, b, L.meet[val.mem(a, c)][val.mem(b, c)]))
    sep_inputs = instances or [two_, MVName([(one_, L.one)])]
    for X in sep_inputs:
        Y = separation_name(X, L)
        rep.separation.append((X, Y, val.sub(Y, X)))
    for X in ([one_] if instances is None else instances):
        Y = power_name(X, L)
        total = L.inf(L.imp[val.sub(u, X)][val.mem(u, Y)] for u in model.universe)
        rep.power.append((X, Y, total))
    phi = Mem("v", "u")
    for X in ([two_] if instances is None else instances):
        Y = collection_name(X, phi, model)
        total = L.one
        for u, xu in X.entries:
            some = L.sup(model.value(phi, {"u": u, "v": v}) for v in model.universe)
            inside = L.sup(L.otimes[yv][model.value(phi, {"u": u, "v": v})] for v, yv in Y.entries)
            total = L.meet[total][L.imp[xu][L.imp[some][inside]]]
        rep.collection.append((X, Y, total))
    return rep


# -------------------------------------------------------------------- L-sets

@dataclass(frozen=True, eq=False)
class LSet:
    algebra: MVAlgebra
    alpha: tuple          # alpha[x][y]
    points: tuple = ()    # optional labels of carrier elements

    @property
    def size(self) -> int:
        return len(self.alpha)


def lset_violations(X: LSet) -> list:
    """Failures of the bound, symmetry and triangle conditions (empty when X is an L-set)."""
    L, a, n = X.algebra, X.alpha, X.size
    out = []
    for x in range(n):
        for y in range(n):
            if not L.leq(a[x][y], L.meet[a[x][x]][a[y][y]]):
                out.append(("bound", x, y))
            if a[x][y] != a[y][x]:
                out.append(("symmetry", x, y))
            for z in range(n):
                if not L.leq(L.otimes[a[x][y]][L.imp[a[y][y]][a[y][z]]], a[x][z]):
                    out.append(("triangle", x, y, z))
    return out


def name_to_lset(u: MVName, L: MVAlgebra, mode: str = "standard",
                 valuation: MVValuation = None) -> LSet:
    """(dom u, δ) with δ(x, y) = ||x ∈ u ∧ x = y||."""
    val = valuation or MVValuation(L, mode)
    dom = u.domain
    alpha = tuple(tuple(L.meet[val.mem(x, u)][val.eq(x, y)] for y in dom) for x in dom)
    return LSet(L, alpha, dom)


def lset_to_name(X: LSet) -> MVName:
    """X* with dom = {ẋ}, ẋ(ẑ) = α(x, z), X*(ẋ) = α(x, x); points named by ordinals."""
    L = X.algebra
    hats = [canonical_name(von_neumann(k), L) for k in range(X.size)]
    dots = [MVName(zip(hats, X.alpha[x])) for x in range(X.size)]
    return MVName((dots[x], X.alpha[x][x]) for x in range(X.size))


@dataclass
class RoundTrip:
    injective: bool         # distinct points received distinct names
    surjective: bool
    alpha_preserved: bool
    mismatches: list

    @property
    def isomorphic(self) -> bool:
        """Isomorphic up to the equality predicate: α-indistinguishable points may merge."""
        return self.surjective and self.alpha_preserved


def lset_round_trip(X: LSet, mode: str = "standard") -> RoundTrip:
    """Compare X with the L-set of X* along x ↦ ẋ."""
    L = X.algebra
    back = name_to_lset(lset_to_name(X), L, mode)
    hats = [canonical_name(von_neumann(k), L) for k in range(X.size)]
    pos = {d: k for k, d in enumerate(back.points)}
    f = [pos[MVName(zip(hats, X.alpha[x]))] for x in range(X.size)]
    mismatches = [(x, y, L.labels[X.alpha[x][y]], L.labels[back.alpha[f[x]][f[y]]])
                  for x in range(X.size) for y in range(X.size)
                  if back.alpha[f[x]][f[y]] != X.alpha[x][y]]
    return RoundTrip(len(set(f)) == X.size, set(f) == set(range(back.size)),
                     not mismatches, mismatches)

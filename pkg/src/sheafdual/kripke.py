"""Kripke–Joyal forcing over finite poset sites.

A site is a finite poset, optionally carrying an integral commutative monoid
``tensor`` whose unit is the top point.  Names at a point I are
restriction-closed sets of pairs (J, b) with J ≤ I and b a name at J of lower
rank; they stand in for sub-presheaves of y(I) × V.

Formulas use the syntax of :mod:`sheafdual.formula`.  ``not p`` is ``p → ⊥``.
For ``tensor p q`` the witness J ranges over the points under I and the
environment is restricted along I ⊗ J ≤ I; ``tensor_scope="all"`` lets J range
over every point instead (J = top then gives back I).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from . import config
from .errors import TensorAxiomViolation, TensorUnavailable, UniverseTooLarge
from .formula import And, All, Eq, Ex, Imp, Mem, Not, Or, Tensor, format_formula, free_vars, uses_tensor
from .lattice import _normalize_leq, check_partial_order, is_distributive


@dataclass(frozen=True, eq=False)
class FiniteSite:
    leq: tuple
    tensor: Optional[tuple] = None
    labels: tuple = ()

    @property
    def size(self) -> int:
        return len(self.leq)

    @property
    def points(self) -> range:
        return range(self.size)

    def below(self, i: int) -> tuple:
        """Points J ≤ i, in index order."""
        return tuple(j for j in self.points if self.leq[j][i])

    @property
    def top(self) -> Optional[int]:
        tops = [t for t in self.points if all(self.leq[x][t] for x in self.points)]
        return tops[0] if tops else None

    @property
    def monoidal(self) -> bool:
        return self.tensor is not None

    def __repr__(self):
        return f"FiniteSite(points={list(self.labels)}, monoidal={self.monoidal})"


def build_site(order, tensor=None, labels=None) -> FiniteSite:
    leq = _normalize_leq(order)
    check_partial_order(leq)
    n = len(leq)
    labels = tuple(str(s) for s in (labels if labels is not None else range(n)))
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    if tensor is None and n == 1:
        tensor = ((0,),)
    if tensor is not None:
        tensor = tuple(tuple(int(v) for v in row) for row in tensor)
        _check_tensor(leq, tensor)
    return FiniteSite(leq, tensor, labels)


def _check_tensor(leq, t) -> None:
    n = len(leq)
    r = range(n)
    if len(t) != n or any(len(row) != n for row in t):
        raise TensorAxiomViolation("totality", ())
    if any(not 0 <= v < n for row in t for v in row):
        raise TensorAxiomViolation("range", ())
    tops = [x for x in r if all(leq[y][x] for y in r)]
    if not tops:
        raise TensorAxiomViolation("unit", ("no top point",))
    top = tops[0]
    for a in r:
        if t[a][top] != a or t[top][a] != a:
            raise TensorAxiomViolation("unit", (a,))
        for b in r:
            if t[a][b] != t[b][a]:
                raise TensorAxiomViolation("commutativity", (a, b))
            if not (leq[t[a][b]][a] and leq[t[a][b]][b]):
                raise TensorAxiomViolation("integrality", (a, b))
            for c in r:
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    raise TensorAxiomViolation("associativity", (a, b, c))
                if leq[a][b] and not leq[t[a][c]][t[b][c]]:
                    raise TensorAxiomViolation("monotonicity", (a, b, c))


def meet_tensor(leq) -> Optional[tuple]:
    """The meet table of a poset, or None when some pair has no meet in it."""
    n = len(leq)
    table = []
    for a in range(n):
        row = []
        for b in range(n):
            lower = [x for x in range(n) if leq[x][a] and leq[x][b]]
            greatest = [x for x in lower if all(leq[y][x] for y in lower)]
            if not greatest:
                return None
            row.append(greatest[0])
        table.append(tuple(row))
    return tuple(table)


def heyting_adapter(H) -> FiniteSite:
    """Site on the nonzero elements of a finite distributive lattice.

    The bottom element is dropped: a point for 0 would force every formula
    through the empty cover in sheaf semantics and has no role in presheaf
    forcing.  The tensor is ∧ when the nonzero elements are closed under meets
    (for instance on chains) and absent otherwise.
    """
    H = H.lattice
    verdict = is_distributive(H)
    if not verdict.holds:
        from .errors import NotDistributive
        raise NotDistributive(verdict.witness)
    keep = [x for x in range(H.size) if x != H.bottom] or [H.bottom]
    leq = tuple(tuple(H.leq[a][b] for b in keep) for a in keep)
    return build_site(leq, meet_tensor(leq), [H.labels[x] for x in keep])


# -------------------------------------------------------------------- names

class KJName:
    """A restriction-closed set of pairs (J, b) at a base point."""

    __slots__ = ("base", "entries", "rank", "sort_key", "_hash")

    def __init__(self, base: int, entries=()):
        entries = frozenset(entries)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "rank", 1 + max((b.rank for _, b in entries), default=-1))
        key = (self.rank, base, tuple(sorted((j, b.sort_key) for j, b in entries)))
        object.__setattr__(self, "sort_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, *_):
        raise AttributeError("KJName is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, KJName) and self._hash == other._hash
                                 and self.base == other.base and self.entries == other.entries)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def show(self, S: FiniteSite = None) -> str:
        lab = (lambda j: S.labels[j]) if S is not None else str
        parts = sorted(self.entries, key=lambda e: (e[0], e[1].sort_key))
        return "{" + ", ".join(f"({lab(j)},{b.show(S)})" for j, b in parts) + "}"

    def __repr__(self):
        return f"KJName@{self.base}{self.show()}"


def empty_name(I: int) -> KJName:
    return KJName(I)


def restrict(S: FiniteSite, a: KJName, J: int) -> KJName:
    """a.u for u: J ≤ base(a): the entries of a sitting at points under J."""
    if not S.leq[J][a.base]:
        raise ValueError(f"point {J} is not below the base {a.base}")
    if J == a.base:
        return a
    return KJName(J, ((K, c) for K, c in a.entries if S.leq[K][J]))


def is_restriction_closed(S: FiniteSite, a: KJName) -> bool:
    for J, b in a.entries:
        if not S.leq[J][a.base] or b.base != J:
            return False
        for K in S.below(J):
            if (K, restrict(S, b, K)) not in a.entries:
                return False
        if not is_restriction_closed(S, b):
            return False
    return True


def _downsets(items, below, limit, counter):
    """Subsets of ``items`` closed under ``below`` (items listed in a linear extension)."""
    pos = {it: k for k, it in enumerate(items)}
    preds = [[pos[p] for p in below(it)] for it in items]
    out = []

    def go(k, chosen):
        if k == len(items):
            counter[0] += 1
            if counter[0] > limit:
                raise UniverseTooLarge(counter[0], limit)
            out.append(frozenset(items[i] for i in chosen))
            return
        go(k + 1, chosen)
        if all(p in chosen for p in preds[k]):
            chosen.add(k)
            go(k + 1, chosen)
            chosen.discard(k)

    go(0, set())
    return out


def names_upto(S: FiniteSite, R: int, budget=None) -> list:
    """names[I] = every name at I of rank ≤ R, sorted canonically."""
    limit = config.budget(budget)
    counter = [0]
    depth = [len(S.below(i)) for i in S.points]
    level = [[empty_name(I)] for I in S.points]
    for _ in range(R):
        nxt = []
        for I in S.points:
            cands = [(J, b) for J in S.below(I) for b in level[J]]
            cands.sort(key=lambda e: (depth[e[0]], e[0], e[1].sort_key))

            def below(entry, _S=S):
                J, b = entry
                return [(K, restrict(_S, b, K)) for K in _S.below(J) if K != J]

            nxt.append(sorted(KJName(I, d) for d in _downsets(cands, below, limit, counter)))
        level = nxt
    return level


@dataclass
class Presheaf:
    """Finite sets F(p) with restriction maps F(p) → F(q) for q ≤ p."""
    site: FiniteSite
    sets: list            # sets[p] = list of elements
    maps: dict            # maps[(p, q)] = tuple of indices into sets[q]

    def check(self) -> list:
        S, bad = self.site, []
        for p in S.points:
            if self.maps[(p, p)] != tuple(range(len(self.sets[p]))):
                bad.append(("identity", p))
            for q in S.below(p):
                for r in S.below(q):
                    fpq, fqr, fpr = self.maps[(p, q)], self.maps[(q, r)], self.maps[(p, r)]
                    if any(fqr[fpq[x]] != fpr[x] for x in range(len(self.sets[p]))):
                        bad.append(("composition", p, q, r))
        return bad


def yoneda(S: FiniteSite, I: int) -> Presheaf:
    sets = [[()] if S.leq[J][I] else [] for J in S.points]
    maps = {(p, q): tuple(0 for _ in sets[p]) for p in S.points for q in S.below(p)}
    return Presheaf(S, sets, maps)


def name_presheaf(S: FiniteSite, R: int, budget=None) -> Presheaf:
    """The bounded name universe with restriction as its action."""
    sets = names_upto(S, R, budget)
    index = [{a: k for k, a in enumerate(level)} for level in sets]
    maps = {(p, q): tuple(index[q][restrict(S, a, q)] for a in sets[p])
            for p in S.points for q in S.below(p)}
    return Presheaf(S, sets, maps)


# ------------------------------------------------------------------ forcing

TENSOR_SCOPES = ("below", "all")


class KJForcing:
    """Memoized forcing relation over one site and one quantifier rank.

    The memo maps (point, formula, environment) to a boolean; it is an
    idempotent cache.
    """

    def __init__(self, S: FiniteSite, R: int = 1, tensor_scope: str = "below", budget=None):
        if tensor_scope not in TENSOR_SCOPES:
            raise ValueError(f"unknown tensor scope {tensor_scope!r}")
        self.S = S
        self.R = R
        self.tensor_scope = tensor_scope
        self.budget = budget
        self._universe = None
        self._memo: dict = {}

    @property
    def universe(self) -> list:
        if self._universe is None:
            self._universe = names_upto(self.S, self.R, self.budget)
        return self._universe

    def restrict_env(self, env: dict, J: int) -> dict:
        return {v: restrict(self.S, a, J) for v, a in env.items()}

    def forces(self, I: int, phi, env: dict) -> bool:
        if uses_tensor(phi) and not self.S.monoidal:
            raise TensorUnavailable("the site has no tensor")
        env = {v: env[v] for v in free_vars(phi)}
        for v, a in env.items():
            if a.base != I:
                env[v] = restrict(self.S, a, I)
        return self._forces(I, phi, env)

    def _forces(self, I, phi, env) -> bool:
        key = (I, phi, frozenset(env.items()))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._clause(I, phi, env)
            self._memo[key] = hit
        return hit

    def _keep(self, phi, env):
        fv = free_vars(phi)
        return {v: a for v, a in env.items() if v in fv}

    def _clause(self, I, phi, env) -> bool:
        S = self.S
        if isinstance(phi, Mem):
            return (I, env[phi.left]) in env[phi.right].entries
        if isinstance(phi, Eq):
            return env[phi.left] == env[phi.right]
        if isinstance(phi, And):
            return (self._forces(I, phi.left, self._keep(phi.left, env))
                    and self._forces(I, phi.right, self._keep(phi.right, env)))
        if isinstance(phi, Or):
            return (self._forces(I, phi.left, self._keep(phi.left, env))
                    or self._forces(I, phi.right, self._keep(phi.right, env)))
        if isinstance(phi, Imp):
            for J in S.below(I):
                envJ = self.restrict_env(env, J)
                if (self._forces(J, phi.left, self._keep(phi.left, envJ))
                        and not self._forces(J, phi.right, self._keep(phi.right, envJ))):
                    return False
            return True
        if isinstance(phi, Not):
            return not any(self._forces(J, phi.body, self.restrict_env(env, J)) for J in S.below(I))
        if isinstance(phi, All):
            for J in S.below(I):
                envJ = self._keep(phi, self.restrict_env(env, J))
                for a in self.universe[J]:
                    if not self._forces(J, phi.body, {**envJ, phi.var: a}):
                        return False
            return True
        if isinstance(phi, Ex):
            base = self._keep(phi, env)
            return any(self._forces(I, phi.body, {**base, phi.var: a}) for a in self.universe[I])
        if isinstance(phi, Tensor):
            if not S.monoidal:
                raise TensorUnavailable("the site has no tensor")
            both = And(phi.left, phi.right)
            witnesses = S.points if self.tensor_scope == "all" else S.below(I)
            for K in sorted({S.tensor[I][J] for J in witnesses}):
                if self._forces(K, both, self.restrict_env(env, K)):
                    return True
            return False
        raise TypeError(f"not a formula: {phi!r}")


def forces(S: FiniteSite, I: int, phi, env: dict, R: int = 1, tensor_scope: str = "below",
           engine: KJForcing = None) -> bool:
    engine = engine or KJForcing(S, R, tensor_scope)
    return engine.forces(I, phi, env)


def _spread(items, k):
    """At most k items, evenly spaced, always keeping the first and last."""
    items = list(items)
    if k is None or len(items) <= k:
        return items
    step = (len(items) - 1) / (k - 1)
    return [items[round(i * step)] for i in range(k)]


@dataclass
class PersistenceReport:
    checks: int = 0
    violations: list = field(default_factory=list)   # (formula, I, J, env)

    @property
    def holds(self) -> bool:
        return not self.violations


def persistence_check(S: FiniteSite, suite, R: int = 1, env_pool: Optional[int] = None,
                      engine: KJForcing = None, max_violations: int = 20) -> PersistenceReport:
    """I ⊩ φ(c) ⇒ J ⊩ φ(c.u) for all J ≤ I, over environments drawn from the universe.

    ``env_pool`` caps how many names per point feed each free variable.
    """
    engine = engine or KJForcing(S, R)
    rep = PersistenceReport()
    for phi in suite:
        if uses_tensor(phi) and not S.monoidal:
            continue
        fv = sorted(free_vars(phi))
        for I in S.points:
            pool = _spread(engine.universe[I], env_pool)
            for combo in itertools.product(pool, repeat=len(fv)):
                env = dict(zip(fv, combo))
                if not engine.forces(I, phi, env):
                    continue
                for J in S.below(I):
                    if J == I:
                        continue
                    rep.checks += 1
                    if not engine.forces(J, phi, engine.restrict_env(env, J)):
                        if len(rep.violations) < max_violations:
                            rep.violations.append((format_formula(phi), I, J, env))
    return rep


def excluded_middle_witness(S: FiniteSite):
    """A point I, formula φ and environment with I ⊮ φ ∨ ¬φ, or None if the site has none.

    Uses φ = (mem a b) with a empty and b = {(q, ∅)} for some q < I.
    """
    from .formula import parse_formula

    phi = parse_formula("(or (mem a b) (not (mem a b)))")
    engine = KJForcing(S, 0)
    for I in S.points:
        for q in S.below(I):
            if q == I:
                continue
            b = KJName(I, [(K, empty_name(K)) for K in S.below(q)])
            env = {"a": empty_name(I), "b": b}
            if not engine.forces(I, phi, env):
                return I, phi, env
    return None

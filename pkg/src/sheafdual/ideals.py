"""Ideals, congruences, quotients and the regularity notions built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from . import config
from .errors import BudgetExceeded, NotBLOIdeal, NotCongruence
from .lattice import (
    Homomorphism,
    build_blo,
    build_lattice,
    is_distributive,
    is_relatively_complemented,
    zd,
)


class Ideal:
    """A nonempty, downward closed, join-closed subset of a host algebra.

    ``blo_closed`` records whether the ideal lives among the operator-closed
    ideals; primality and maximality are computed on first access.
    """

    def __init__(self, host, carrier: Iterable[int], blo_closed: bool = True):
        self.host = host
        self.carrier = frozenset(carrier)
        self.blo_closed = blo_closed and bool(host.operators)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.host is other.host and self.carrier == other.carrier

    def __hash__(self):
        return hash(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(sorted(self.carrier))

    def __repr__(self):
        return "Ideal({" + ", ".join(self.host.labels[x] for x in sorted(self.carrier)) + "})"

    @property
    def generator(self) -> int:
        """Largest element; every ideal of a finite lattice is principal."""
        return _join_all(self.host, self.carrier)

    @property
    def is_proper(self) -> bool:
        return len(self.carrier) < self.host.size

    @cached_property
    def is_prime(self) -> bool:
        A = self.host
        if not self.is_proper:
            return False
        return all(x in self.carrier or y in self.carrier
                   for x in range(A.size) for y in range(A.size)
                   if A.meet[x][y] in self.carrier)

    @cached_property
    def is_maximal(self) -> bool:
        if not self.is_proper:
            return False
        return not any(other.is_proper and self.carrier < other.carrier
                       for other in enumerate_ideals(self.host, self.blo_closed))


def _join_all(A, xs) -> int:
    g = A.bottom
    for x in xs:
        g = A.join[g][x]
    return g


def principal_downset(A, a: int) -> frozenset:
    return frozenset(x for x in range(A.size) if A.leq[x][a])


def is_ideal(A, carrier, blo_closed: bool = True) -> bool:
    carrier = set(carrier)
    if not carrier:
        return False
    for x in carrier:
        if any(A.leq[y][x] and y not in carrier for y in range(A.size)):
            return False
        if any(A.join[x][y] not in carrier for y in carrier):
            return False
        if blo_closed and any(f[x] not in carrier for f in A.operators):
            return False
    return True


def make_ideal(A, carrier, blo_closed: bool = True) -> Ideal:
    if not is_ideal(A, carrier, blo_closed=False):
        raise ValueError(f"{sorted(carrier)} is not a lattice ideal")
    if blo_closed and not is_ideal(A, carrier, blo_closed=True):
        raise NotBLOIdeal(sorted(carrier))
    return Ideal(A, carrier, blo_closed)


def enumerate_ideals(A, blo_closed: bool = True) -> list:
    """All ideals (operator-closed ones when ``blo_closed``), by size then contents."""
    found = []
    for a in range(A.size):
        down = principal_downset(A, a)
        if blo_closed and any(not A.leq[f[a]][a] for f in A.operators):
            continue
        found.append(down)
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [Ideal(A, s, blo_closed) for s in found]


def ideal_generated(A, S: Iterable[int], blo_closed: bool = True) -> Ideal:
    """Least ideal containing S, closed under the operators when ``blo_closed``.

    Iterates on the generator: g ← g ∨ ⋁ f_i(g) until nothing changes, then
    takes the principal downset.  Sound because a downset ↓g is operator
    closed exactly when f_i(g) ≤ g for every i.
    """
    S = list(S)
    if not S:
        raise ValueError("generating set must be nonempty")
    g = _join_all(A, S)
    if blo_closed:
        while True:
            nxt = g
            for f in A.operators:
                nxt = A.join[nxt][f[nxt]]
            if nxt == g:
                break
            g = nxt
    return Ideal(A, principal_downset(A, g), blo_closed)


@dataclass(frozen=True)
class Congruence:
    """Partition of the host given as element → block index (blocks numbered by first element)."""

    host: object = field(compare=False, repr=False)
    partition: tuple

    @property
    def n_blocks(self) -> int:
        return max(self.partition) + 1 if self.partition else 0

    def blocks(self) -> list:
        out = [[] for _ in range(self.n_blocks)]
        for x, b in enumerate(self.partition):
            out[b].append(x)
        return [frozenset(b) for b in out]

    def related(self, x, y) -> bool:
        return self.partition[x] == self.partition[y]

    def zero_class(self) -> frozenset:
        b = self.partition[self.host.bottom]
        return frozenset(x for x, c in enumerate(self.partition) if c == b)

    def is_identity(self) -> bool:
        return self.n_blocks == self.host.size

    def is_universal(self) -> bool:
        return self.n_blocks <= 1

    def refines(self, other: "Congruence") -> bool:
        return all(other.partition[x] == other.partition[y]
                   for x in range(len(self.partition)) for y in range(x)
                   if self.partition[x] == self.partition[y])

    def __repr__(self):
        L = self.host
        return "Congruence(" + " | ".join(
            "{" + ",".join(L.labels[x] for x in sorted(b)) + "}" for b in self.blocks()) + ")"


def _normalize(labels) -> tuple:
    ids = {}
    return tuple(ids.setdefault(v, len(ids)) for v in labels)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def _close(A, uf: _UnionFind) -> Congruence:
    n = A.size
    changed = True
    while changed:
        changed = False
        for x in range(n):
            r = uf.find(x)
            if r == x:
                continue
            # x ~ r forces every unary polynomial image of x and r together
            for z in range(n):
                changed |= uf.union(A.meet[x][z], A.meet[r][z])
                changed |= uf.union(A.join[x][z], A.join[r][z])
            for f in A.operators:
                changed |= uf.union(f[x], f[r])
    return Congruence(A, _normalize(uf.find(x) for x in range(n)))


def congruence_generated(A, seed) -> Congruence:
    """Least congruence identifying the seed pairs.

    ``seed`` is either an Ideal (or any element set), whose members are all
    identified with 0, or an iterable of pairs.
    """
    uf = _UnionFind(A.size)
    if isinstance(seed, (Ideal, frozenset, set)):
        for x in seed:
            uf.union(x, A.bottom)
    else:
        for x, y in seed:
            uf.union(x, y)
    return _close(A, uf)


def identity_congruence(A) -> Congruence:
    return Congruence(A, tuple(range(A.size)))


def universal_congruence(A) -> Congruence:
    return Congruence(A, (0,) * A.size)


def check_congruence(A, theta: Congruence) -> None:
    p = theta.partition
    n = A.size
    for x in range(n):
        for y in range(n):
            if p[x] != p[y]:
                continue
            for z in range(n):
                if p[A.meet[x][z]] != p[A.meet[y][z]]:
                    raise NotCongruence(("meet", x, y, z))
                if p[A.join[x][z]] != p[A.join[y][z]]:
                    raise NotCongruence(("join", x, y, z))
            for i, f in enumerate(A.operators):
                if p[f[x]] != p[f[y]]:
                    raise NotCongruence((f"operator {i}", x, y))


def is_congruence(A, theta: Congruence) -> bool:
    try:
        check_congruence(A, theta)
    except NotCongruence:
        return False
    return True


def lattice_theta(L, I) -> Congruence:
    """a ≡ b iff a ∨ i = b ∨ i for some i in I (distributive hosts)."""
    I = sorted(I)
    n = L.size
    # for an ideal, "some i" can always be taken to be the generator g
    g = _join_all(L, I)
    theta = Congruence(L, _normalize(L.join[a][g] for a in range(n)))
    for a in range(n):
        for b in range(a):
            literal = any(L.join[a][i] == L.join[b][i] for i in I)
            assert theta.related(a, b) == literal, (a, b)
    check_congruence(L, theta)
    return theta


def quotient(A, theta: Congruence):
    """Quotient algebra with induced operations, and the projection onto it."""
    check_congruence(A, theta)
    blocks = theta.blocks()
    least = [_meet_all(A, b) for b in blocks]
    p = theta.partition
    k = len(blocks)
    leq = [[p[A.meet[least[i]][least[j]]] == i for j in range(k)] for i in range(k)]
    labels = [A.labels[m] for m in least]
    Q = build_lattice(leq, labels, distributive=is_distributive(A).holds)
    if A.operators:
        ops = [tuple(p[f[least[i]]] for i in range(k)) for f in A.operators]
        Q = build_blo(Q, ops)
    return Q, Homomorphism(A, Q, tuple(p))


def _meet_all(A, xs) -> int:
    m = A.top
    for x in xs:
        m = A.meet[m][x]
    return m


def join_congruences(A, *thetas) -> Congruence:
    uf = _UnionFind(A.size)
    for theta in thetas:
        first = {}
        for x, b in enumerate(theta.partition):
            uf.union(first.setdefault(b, x), x)
    return _close(A, uf)


def meet_congruences(A, s: Congruence, t: Congruence) -> Congruence:
    return Congruence(A, _normalize(zip(s.partition, t.partition)))


def congruence_lattice(A, budget: Optional[int] = None) -> list:
    """All congruences, as the join-closure of the principal ones.

    Sorted from the identity (most blocks) to the universal congruence.
    """
    budget = config.budget(budget)
    if A.size > config.MAX_SIZE:
        raise BudgetExceeded(config.MAX_SIZE, what=f"congruence lattice of a {A.size}-element host")
    found = {identity_congruence(A).partition: identity_congruence(A)}
    principal = []
    for a in range(A.size):
        for b in range(A.size):
            if a != b and A.leq[a][b]:
                theta = congruence_generated(A, [(a, b)])
                if theta.partition not in found:
                    found[theta.partition] = theta
                    principal.append(theta)
    frontier = list(principal)
    while frontier:
        nxt = []
        for theta in frontier:
            for p in principal:
                j = join_congruences(A, theta, p)
                if j.partition not in found:
                    found[j.partition] = j
                    nxt.append(j)
                    if len(found) > budget:
                        raise BudgetExceeded(budget, what="congruence lattice")
        frontier = nxt
    return sorted(found.values(), key=lambda t: (-t.n_blocks, t.partition))


def is_simple(A) -> bool:
    """Exactly two congruences; the one-element algebra is not simple."""
    return A.size >= 2 and len(congruence_lattice(A)) == 2


def maximal_congruences(A) -> list:
    cons = congruence_lattice(A)
    proper = [t for t in cons if not t.is_universal()]
    return [t for t in proper
            if not any(u is not t and t.refines(u) and u.partition != t.partition for u in proper)]


@dataclass(frozen=True)
class GratzerSchmidtReport:
    bijection: bool
    distributive: bool
    relatively_complemented: bool
    has_minimum: bool
    n_ideals: int
    n_congruences: int

    @property
    def conditions(self) -> bool:
        return self.distributive and self.relatively_complemented and self.has_minimum

    @property
    def theorem_holds(self) -> bool:
        return self.bijection == self.conditions


def gratzer_schmidt_check(L) -> GratzerSchmidtReport:
    """Compare the congruence → 0-class map with the three lattice conditions."""
    L = L.lattice
    ideals = {I.carrier for I in enumerate_ideals(L, blo_closed=False)}
    cons = congruence_lattice(L)
    zero_classes = [t.zero_class() for t in cons]
    bijection = len(set(zero_classes)) == len(zero_classes) and set(zero_classes) == ideals
    has_min = any(all(L.leq[z][x] for x in range(L.size)) for z in range(L.size))
    return GratzerSchmidtReport(
        bijection=bijection,
        distributive=is_distributive(L).holds,
        relatively_complemented=is_relatively_complemented(L).holds,
        has_minimum=has_min,
        n_ideals=len(ideals),
        n_congruences=len(cons),
    )


def is_regular_ideal(A, I) -> bool:
    """Ig(I ∩ Zd A) = I; raises NotBLOIdeal if I is not operator closed."""
    carrier = I.carrier if isinstance(I, Ideal) else frozenset(I)
    if not is_ideal(A, carrier, blo_closed=True):
        raise NotBLOIdeal(sorted(carrier))
    _, inc = zd(A)
    return ideal_generated(A, carrier & set(inc)).carrier == carrier


def zd_prime_ideals(A) -> list:
    """Prime ideals of Zd A as sets of host indices, in the order of the sublattice's ideals."""
    Z, inc = zd(A)
    return [frozenset(inc[k] for k in I.carrier)
            for I in enumerate_ideals(Z, blo_closed=False) if I.is_prime]


def zd_maximal_ideals(A) -> list:
    Z, inc = zd(A)
    return [frozenset(inc[k] for k in I.carrier)
            for I in enumerate_ideals(Z, blo_closed=False) if I.is_maximal]


@dataclass(frozen=True)
class Regularity:
    regular: bool
    strongly_regular: bool
    congruence_strongly_regular: bool
    witnesses: dict = field(default_factory=dict, compare=False)


def classify_regularity(A) -> Regularity:
    witnesses = {}
    regular = True
    for x in zd_prime_ideals(A):
        if not ideal_generated(A, x).is_prime:
            regular = False
            witnesses.setdefault("regular", sorted(x))
    strong = True
    cong_strong = True
    maximal = {t.partition for t in maximal_congruences(A)}
    for x in zd_maximal_ideals(A):
        if not ideal_generated(A, x).is_maximal:
            strong = False
            witnesses.setdefault("strongly_regular", sorted(x))
        if congruence_generated(A, x).partition not in maximal:
            cong_strong = False
            witnesses.setdefault("congruence_strongly_regular", sorted(x))
    return Regularity(regular, strong, cong_strong, witnesses)


@dataclass(frozen=True)
class StrongRegularityReport:
    strongly_regular: bool
    principal_ideals_from_zd: bool
    maximal_stalks_simple: bool
    relatively_complemented: bool

    @property
    def equivalent(self) -> bool:
        return self.strongly_regular == self.principal_ideals_from_zd == self.maximal_stalks_simple

    @property
    def theorem_holds(self) -> bool:
        """The equivalence is only claimed for relatively complemented hosts."""
        return self.equivalent or not self.relatively_complemented


def strong_regularity_equivalences(A) -> StrongRegularityReport:
    """Evaluate the three conditions; semisimplicity is read as simple stalks over maximal points."""
    _, inc = zd(A)
    zd_ideals = {ideal_generated(A, [z]).carrier for z in inc}
    principal = all(ideal_generated(A, [a]).carrier in zd_ideals for a in range(A.size))
    stalks_simple = all(is_simple(quotient(A, congruence_generated(A, x))[0])
                        for x in zd_maximal_ideals(A))
    return StrongRegularityReport(
        strongly_regular=classify_regularity(A).strongly_regular,
        principal_ideals_from_zd=principal,
        maximal_stalks_simple=stalks_simple,
        relatively_complemented=is_relatively_complemented(A).holds,
    )

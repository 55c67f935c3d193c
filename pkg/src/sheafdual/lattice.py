"""Finite bounded lattices, lattices with operators, and their homomorphisms.

Elements are the integers ``0..size-1``.  A lattice is given by its order
relation; meet and join tables are derived from it, never supplied.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

from . import config
from .errors import (
    BudgetExceeded,
    NotALattice,
    NotBounded,
    NotClosed,
    NotDistributive,
    NotHomomorphism,
    NotPartialOrder,
    OperatorAxiomViolation,
)


class Verdict(NamedTuple):
    holds: bool
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class FiniteLattice:
    size: int
    leq: tuple
    meet: tuple
    join: tuple
    bottom: int
    top: int
    labels: tuple

    # A plain lattice is a BLO with an empty operator family.
    @property
    def operators(self) -> tuple:
        return ()

    @property
    def lattice(self) -> "FiniteLattice":
        return self

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def down(self) -> tuple:
        """Bitmask of the principal downset of each element."""
        return tuple(sum(1 << z for z in range(self.size) if self.leq[z][x])
                     for x in range(self.size))

    @cached_property
    def up(self) -> tuple:
        return tuple(sum(1 << z for z in range(self.size) if self.leq[x][z])
                     for x in range(self.size))

    def __repr__(self):
        return f"FiniteLattice(size={self.size}, labels={list(self.labels)})"


@dataclass(frozen=True)
class BLO:
    """Bounded distributive lattice with a family of unary operators."""

    lattice: FiniteLattice
    operators: tuple = ()

    size = property(lambda self: self.lattice.size)
    leq = property(lambda self: self.lattice.leq)
    meet = property(lambda self: self.lattice.meet)
    join = property(lambda self: self.lattice.join)
    bottom = property(lambda self: self.lattice.bottom)
    top = property(lambda self: self.lattice.top)
    labels = property(lambda self: self.lattice.labels)
    down = property(lambda self: self.lattice.down)
    up = property(lambda self: self.lattice.up)

    def le(self, x, y):
        return self.lattice.leq[x][y]

    def label(self, x):
        return self.lattice.labels[x]

    def index(self, label):
        return self.lattice.labels.index(label)

    def __repr__(self):
        return (f"BLO(size={self.size}, labels={list(self.labels)}, "
                f"operators={[list(f) for f in self.operators]})")


@dataclass(frozen=True)
class Homomorphism:
    source: object
    target: object
    table: tuple

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.size))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """``other`` after ``self``."""
        return compose(other, self)


def compose(g: Homomorphism, h: Homomorphism) -> Homomorphism:
    """The composite ``g ∘ h`` (``h`` first)."""
    return Homomorphism(h.source, g.target, tuple(g.table[v] for v in h.table))


def identity(A) -> Homomorphism:
    return Homomorphism(A, A, tuple(range(A.size)))


def _normalize_leq(leq) -> tuple:
    rows = [list(r) for r in leq]
    n = len(rows)
    if n == 0:
        raise NotPartialOrder("nonempty", ())
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ValueError(f"order table is not square: row {i} has {len(r)} entries, expected {n}")
    return tuple(tuple(bool(v) for v in r) for r in rows)


def check_partial_order(leq) -> tuple:
    """Raise NotPartialOrder unless ``leq`` is reflexive, antisymmetric and transitive.

    Returns the downset and upset bitmasks of every element.
    """
    n = len(leq)
    for x in range(n):
        if not leq[x][x]:
            raise NotPartialOrder("reflexivity", (x,))
    for x, y in itertools.combinations(range(n), 2):
        if leq[x][y] and leq[y][x]:
            raise NotPartialOrder("antisymmetry", (x, y))
    down = [sum(1 << z for z in range(n) if leq[z][x]) for x in range(n)]
    up = [sum(1 << z for z in range(n) if leq[x][z]) for x in range(n)]
    for x in range(n):
        for y in range(n):
            if leq[x][y] and (down[x] & ~down[y]):
                z = next(z for z in range(n) if down[x] >> z & 1 and not leq[z][y])
                raise NotPartialOrder("transitivity", (z, x, y))
    return down, up


def build_lattice(leq: Sequence[Sequence], labels: Optional[Sequence[str]] = None,
                  distributive: bool = False, max_size: Optional[int] = None) -> FiniteLattice:
    """Validate an order relation and derive the lattice operations from it.

    Raises NotPartialOrder, NotALattice or NotBounded when the relation fails to
    describe a bounded lattice; with ``distributive=True`` also NotDistributive.
    """
    leq = _normalize_leq(leq)
    n = len(leq)
    max_size = config.MAX_SIZE if max_size is None else max_size
    if n > max_size:
        raise BudgetExceeded(max_size, what=f"lattice size {n}")
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    labels = tuple(str(s) for s in labels)
    if len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")

    down, up = check_partial_order(leq)

    everything = (1 << n) - 1
    bottoms = [x for x in range(n) if up[x] == everything]
    tops = [x for x in range(n) if down[x] == everything]
    if not bottoms or not tops:
        raise NotBounded("no global minimum or maximum")

    by_down = {m: x for x, m in enumerate(down)}
    by_up = {m: x for x, m in enumerate(up)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            lower = down[x] & down[y]
            # the meet is the lower bound whose downset is exactly the common lower bounds
            m = by_down.get(lower)
            if m is None:
                raise NotALattice("meet", (x, y))
            upper = up[x] & up[y]
            j = by_up.get(upper)
            if j is None:
                raise NotALattice("join", (x, y))
            meet[x][y] = meet[y][x] = m
            join[x][y] = join[y][x] = j

    L = FiniteLattice(n, leq, tuple(map(tuple, meet)), tuple(map(tuple, join)),
                      bottoms[0], tops[0], labels)
    for x in range(n):
        for y in range(n):
            if L.meet[x][L.join[x][y]] != x or L.join[x][L.meet[x][y]] != x:
                raise NotALattice("absorption", (x, y))
    if distributive:
        verdict = is_distributive(L)
        if not verdict.holds:
            raise NotDistributive(verdict.witness)
    return L


def chain(n: int, labels=None) -> FiniteLattice:
    """The n-element chain 0 < 1 < ... < n-1."""
    return build_lattice([[i <= j for j in range(n)] for i in range(n)], labels)


def boolean_lattice(k: int) -> FiniteLattice:
    """Subsets of a k-element set, elements ordered by bitmask value."""
    n = 1 << k
    labels = ["{" + ",".join(str(i) for i in range(k) if m >> i & 1) + "}" for m in range(n)]
    return build_lattice([[(a & b) == a for b in range(n)] for a in range(n)], labels)


def is_distributive(L) -> Verdict:
    """Check x∧(y∨z) = (x∧y)∨(x∧z) over all triples; witness is the first failing triple."""
    L = L.lattice
    meet, join = L.meet, L.join
    r = range(L.size)
    for x in r:
        mx = meet[x]
        for y in r:
            jy = join[y]
            for z in r:
                if mx[jy[z]] != join[mx[y]][mx[z]]:
                    return Verdict(False, (x, y, z))
    return Verdict(True)


def is_relatively_complemented(L) -> Verdict:
    L = L.lattice
    n = L.size
    for c in range(n):
        for d in range(n):
            if not L.leq[c][d]:
                continue
            interval = [x for x in range(n) if L.leq[c][x] and L.leq[x][d]]
            for a in interval:
                if not any(L.join[a][b] == d and L.meet[a][b] == c for b in interval):
                    return Verdict(False, (c, d, a))
    return Verdict(True)


def is_boolean(L) -> bool:
    L = L.lattice
    if not is_distributive(L).holds:
        return False
    return all(any(L.meet[x][y] == L.bottom and L.join[x][y] == L.top for y in range(L.size))
               for x in range(L.size))


def complement(L, x: int) -> Optional[int]:
    L = L.lattice
    for y in range(L.size):
        if L.meet[x][y] == L.bottom and L.join[x][y] == L.top:
            return y
    return None


def build_blo(L: FiniteLattice, operators: Sequence[Sequence[int]]) -> BLO:
    """Validate an operator family on a distributive lattice.

    Each operator must be normal, monotone, join-preserving and idempotent, and
    the dimension sets must satisfy Δ(x∧y) ⊆ Δx ∪ Δy.
    """
    L = L.lattice
    verdict = is_distributive(L)
    if not verdict.holds:
        raise NotDistributive(verdict.witness)
    n = L.size
    ops = []
    for i, f in enumerate(operators):
        f = tuple(int(v) for v in f)
        if len(f) != n:
            raise OperatorAxiomViolation(i, "totality", (len(f),))
        for x, v in enumerate(f):
            if not 0 <= v < n:
                raise OperatorAxiomViolation(i, "totality", (x,))
        if f[L.bottom] != L.bottom:
            raise OperatorAxiomViolation(i, "f(0)=0", (L.bottom,))
        if f[L.top] != L.top:
            raise OperatorAxiomViolation(i, "f(1)=1", (L.top,))
        for x in range(n):
            if f[f[x]] != f[x]:
                raise OperatorAxiomViolation(i, "idempotence", (x,))
        for x in range(n):
            for y in range(n):
                if L.leq[x][y] and not L.leq[f[x]][f[y]]:
                    raise OperatorAxiomViolation(i, "monotonicity", (x, y))
                if f[L.join[x][y]] != L.join[f[x]][f[y]]:
                    raise OperatorAxiomViolation(i, "join preservation", (x, y))
        ops.append(f)
    A = BLO(L, tuple(ops))
    deltas = [dimension_set(A, x) for x in range(n)]
    for x in range(n):
        for y in range(n):
            allowed = deltas[x] | deltas[y]
            extra = deltas[L.meet[x][y]] - allowed
            if extra:
                raise OperatorAxiomViolation(min(extra), "meet dimension condition", (x, y))
            extra = deltas[L.join[x][y]] - allowed
            # implied by join preservation; a failure here would be an internal error
            if extra:
                raise OperatorAxiomViolation(min(extra), "join dimension condition", (x, y))
    return A


def as_blo(A) -> BLO:
    return A if isinstance(A, BLO) else BLO(A.lattice, ())


def dimension_set(A, x: int) -> frozenset:
    return frozenset(i for i, f in enumerate(A.operators) if f[x] != x)


def _sublattice(A, carrier: Sequence[int]) -> FiniteLattice:
    L = A.lattice
    carrier = sorted(carrier)
    members = set(carrier)
    for x in carrier:
        for y in carrier:
            if L.meet[x][y] not in members:
                raise NotClosed(("meet", x, y))
            if L.join[x][y] not in members:
                raise NotClosed(("join", x, y))
    return build_lattice([[L.leq[x][y] for y in carrier] for x in carrier],
                         [L.labels[x] for x in carrier])


def zd(A) -> tuple:
    """Zero-dimensional part: the common fixed points of all operators.

    Returns ``(sublattice, inclusion)`` where ``inclusion[k]`` is the host index
    of the k-th element of the sublattice.
    """
    carrier = [x for x in range(A.size) if all(f[x] == x for f in A.operators)]
    return _sublattice(A, carrier), tuple(carrier)


def nr(A, J) -> tuple:
    """Neat reduct: elements fixed by every operator outside ``J``, keeping the J-operators.

    Returns ``(BLO, inclusion)``.  The retained operators are listed in
    increasing index order.  Raises NotClosed if a retained operator leaves
    the carrier.
    """
    J = sorted(set(J))
    k = len(A.operators)
    if any(not 0 <= j < k for j in J):
        raise ValueError(f"operator indices {J} not within 0..{k - 1}")
    outside = [f for i, f in enumerate(A.operators) if i not in J]
    carrier = [x for x in range(A.size) if all(f[x] == x for f in outside)]
    sub = _sublattice(A, carrier)
    position = {x: p for p, x in enumerate(carrier)}
    ops = []
    for j in J:
        f = A.operators[j]
        for x in carrier:
            if f[x] not in position:
                raise NotClosed(("operator", j, x))
        ops.append(tuple(position[f[x]] for x in carrier))
    return BLO(sub, tuple(ops)), tuple(carrier)


def check_homomorphism(h: Homomorphism) -> None:
    """Raise NotHomomorphism unless ``h`` preserves bounds, ∧, ∨ and shared operators."""
    A, B, t = h.source, h.target, h.table
    if len(t) != A.size or any(not 0 <= v < B.size for v in t):
        raise NotHomomorphism("totality", None)
    if t[A.bottom] != B.bottom:
        raise NotHomomorphism("bottom", (A.bottom,))
    if t[A.top] != B.top:
        raise NotHomomorphism("top", (A.top,))
    for x in range(A.size):
        for y in range(A.size):
            if t[A.meet[x][y]] != B.meet[t[x]][t[y]]:
                raise NotHomomorphism("meet", (x, y))
            if t[A.join[x][y]] != B.join[t[x]][t[y]]:
                raise NotHomomorphism("join", (x, y))
    for i, (f, g) in enumerate(zip(A.operators, B.operators)):
        for x in range(A.size):
            if t[f[x]] != g[t[x]]:
                raise NotHomomorphism(f"operator {i}", (x,))


def homomorphism(source, target, table) -> Homomorphism:
    h = Homomorphism(source, target, tuple(int(v) for v in table))
    check_homomorphism(h)
    return h


def is_homomorphism(h: Homomorphism) -> bool:
    try:
        check_homomorphism(h)
    except NotHomomorphism:
        return False
    return True


def enumerate_homomorphisms(A, B, bound: Optional[int] = None,
                            budget: Optional[int] = None) -> list:
    """All structure-preserving maps A → B, in lexicographic order of their tables.

    Operators of A are matched to the operators of B with the same index; B may
    carry more operators than A.  Raises BudgetExceeded once more than
    ``budget`` search nodes have been visited.
    """
    if len(A.operators) > len(B.operators):
        raise ValueError("target signature must include the source operators")
    budget = config.budget(budget)
    n = A.size
    # linear extension: assign elements after everything below them
    order = sorted(range(n), key=lambda x: (bin(A.down[x]).count("1"), x))
    pos = {x: k for k, x in enumerate(order)}
    # constraints checked when the last of their elements is assigned
    checks = [[] for _ in range(n)]
    for x in range(n):
        for y in range(x, n):
            for kind, z in (("m", A.meet[x][y]), ("j", A.join[x][y])):
                last = max((x, y, z), key=pos.__getitem__)
                checks[last].append((kind, x, y, z))
    for i, f in enumerate(A.operators):
        for x in range(n):
            last = max((x, f[x]), key=pos.__getitem__)
            checks[last].append(("f", i, x, f[x]))

    table = [None] * n
    results = []
    nodes = 0

    def consistent(x):
        for kind, a, b, c in checks[x]:
            if kind == "m":
                if table[c] != B.meet[table[a]][table[b]]:
                    return False
            elif kind == "j":
                if table[c] != B.join[table[a]][table[b]]:
                    return False
            elif table[c] != B.operators[a][table[b]]:
                return False
        return True

    def candidates(x):
        if A.bottom == A.top and B.bottom != B.top:
            return ()
        if x == A.bottom:
            return (B.bottom,)
        if x == A.top:
            return (B.top,)
        return range(B.size)

    def search(k):
        nonlocal nodes
        if bound is not None and len(results) >= bound:
            return
        if k == n:
            results.append(tuple(table))
            return
        x = order[k]
        for v in candidates(x):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(budget, what="homomorphism search")
            table[x] = v
            if consistent(x):
                search(k + 1)
            table[x] = None

    search(0)
    return [Homomorphism(A, B, t) for t in sorted(results)]


class NotEpi(NamedTuple):
    algebra: object
    f: Homomorphism
    g: Homomorphism


class NoWitnessUpTo(NamedTuple):
    k: int


def is_epi_upto(h: Homomorphism, k: int, class_filter=None, budget: Optional[int] = None):
    """Bounded search for a pair f ≠ g out of h's target with f∘h = g∘h.

    Test algebras are all lattices with at most ``k`` elements (up to
    isomorphism) that pass ``class_filter`` (default: distributive), equipped
    with every admissible operator family matching the target's signature.
    A NoWitnessUpTo result says nothing about larger test algebras.
    """
    from .enumeration import small_blos

    budget = config.budget(budget)
    B = h.target
    keep = class_filter or (lambda C: is_distributive(C).holds)
    for C in small_blos(k, len(B.operators), distributive=class_filter is None):
        if not keep(C):
            continue
        seen = {}
        for f in enumerate_homomorphisms(B, C, budget=budget):
            key = tuple(f.table[v] for v in h.table)
            if key in seen:
                return NotEpi(C, seen[key], f)
            seen[key] = f
    return NoWitnessUpTo(k)


def product(*algebras, max_size: Optional[int] = None):
    """Direct product with componentwise order and operators.

    Elements are indexed in lexicographic order of their coordinate tuples.
    All factors must carry the same number of operators.  Products of
    distributive lattices and of BLOs are again such, so the operator axioms
    are only re-verified for products within the default size bound.
    """
    if not algebras:
        return BLO(build_lattice([[True]], ["()"]), ())
    k = len(algebras[0].operators)
    if any(len(A.operators) != k for A in algebras):
        raise ValueError("factors must share a signature")
    elems = list(itertools.product(*(range(A.size) for A in algebras)))
    index = {e: i for i, e in enumerate(elems)}
    labels = ["(" + ",".join(A.labels[c] for A, c in zip(algebras, e)) + ")" for e in elems]
    leqs = [A.leq for A in algebras]
    leq = [[all(t[a][b] for t, a, b in zip(leqs, e, f)) for f in elems] for e in elems]
    L = build_lattice(leq, labels, max_size=max_size)
    ops = tuple(tuple(index[tuple(A.operators[i][c] for A, c in zip(algebras, e))] for e in elems)
                for i in range(k))
    if k and L.size <= config.MAX_SIZE:
        return build_blo(L, ops)
    return BLO(L, ops)

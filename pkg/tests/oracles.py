"""Brute-force reference computations used to cross-check the library.

Nothing here imports the package: every oracle works from raw order tables,
bitmasks or nested tuples, so agreement is evidence rather than tautology.
"""
from __future__ import annotations

import itertools


# ------------------------------------------------------------------ orders

def is_partial_order(leq) -> bool:
    n = len(leq)
    r = range(n)
    return (all(leq[x][x] for x in r)
            and not any(leq[x][y] and leq[y][x] for x in r for y in r if x != y)
            and all(leq[x][z] for x in r for y in r for z in r if leq[x][y] and leq[y][z]))


def _canonical(leq) -> tuple:
    n = len(leq)
    return min(tuple(leq[p[i]][p[j]] for i in range(n) for j in range(n))
               for p in itertools.permutations(range(n)))


def poset_count(n: int) -> int:
    """Posets on n points up to isomorphism.

    Every poset has a linear extension, so it suffices to try relations whose
    strict part lies above the diagonal, then dedupe by the lexicographically
    least relabelling.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for bits in range(1 << len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                leq[i][j] = True
        if is_partial_order(leq):
            seen.add(_canonical(leq))
    return len(seen)


def lattice_count(n: int) -> int:
    """Lattices with n elements up to isomorphism, by brute force over relations."""
    if n == 1:
        return 1
    pairs = [(i, j) for i in range(1, n - 1) for j in range(i + 1, n - 1)]
    seen = set()
    for bits in range(1 << len(pairs)):
        leq = [[i == j or i == 0 or j == n - 1 for j in range(n)] for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                leq[i][j] = True
        if is_partial_order(leq) and has_all_meets_and_joins(leq):
            seen.add(_canonical(leq))
    return len(seen)


def has_all_meets_and_joins(leq) -> bool:
    n = len(leq)
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            if not any(all(leq[w][z] for w in lower) for z in lower):
                return False
            if not any(all(leq[z][w] for w in upper) for z in upper):
                return False
    return True


def meet_join(leq):
    """Meet and join tables computed from scratch by scanning bounds."""
    n = len(leq)
    meet = [[None] * n for _ in range(n)]
    join = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            meet[x][y] = next(z for z in lower if all(leq[w][z] for w in lower))
            join[x][y] = next(z for z in upper if all(leq[z][w] for w in upper))
    return meet, join


def distributive(leq) -> bool:
    meet, join = meet_join(leq)
    r = range(len(leq))
    return all(meet[x][join[y][z]] == join[meet[x][y]][meet[x][z]] for x in r for y in r for z in r)


def join_irreducible(leq) -> list:
    """x ≠ 0 and x = a ∨ b forces x ∈ {a, b}."""
    n = len(leq)
    _, join = meet_join(leq)
    bottom = next(z for z in range(n) if all(leq[z][w] for w in range(n)))
    return [x for x in range(n) if x != bottom
            and all(x in (a, b) for a in range(n) for b in range(n) if join[a][b] == x)]


# ---------------------------------------------------------- ideals, congruences

def subsets(n):
    for m in range(1 << n):
        yield frozenset(i for i in range(n) if m >> i & 1)


def ideals(leq, operators=()) -> list:
    n = len(leq)
    _, join = meet_join(leq)
    out = []
    for S in subsets(n):
        if not S:
            continue
        if any(leq[y][x] and y not in S for x in S for y in range(n)):
            continue
        if any(join[x][y] not in S for x in S for y in S):
            continue
        if any(f[x] not in S for f in operators for x in S):
            continue
        out.append(S)
    return out


def prime_ideals(leq) -> list:
    n = len(leq)
    meet, _ = meet_join(leq)
    return [S for S in ideals(leq) if len(S) < n
            and all(x in S or y in S for x in range(n) for y in range(n) if meet[x][y] in S)]


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for k in range(len(part)):
            yield part[:k] + [[head] + part[k]] + part[k + 1:]


def congruences(leq, operators=()) -> list:
    """Every compatible partition, as a frozenset of frozenset blocks."""
    n = len(leq)
    meet, join = meet_join(leq)
    out = []
    for part in set_partitions(range(n)):
        block = {}
        for k, b in enumerate(part):
            for x in b:
                block[x] = k
        ok = True
        for x in range(n):
            for y in range(n):
                if block[x] != block[y]:
                    continue
                if any(block[meet[x][z]] != block[meet[y][z]] or block[join[x][z]] != block[join[y][z]]
                       for z in range(n)):
                    ok = False
                    break
                if any(block[f[x]] != block[f[y]] for f in operators):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(frozenset(b) for b in part))
    return out


# ---------------------------------------------------- Boolean-valued forcing

class BooleanNames:
    """Names over the Boolean algebra of subsets of ``atoms`` atoms, values as bitmasks.

    A name is a tuple of (child, mask) pairs sorted by child.  Truth values are
    computed by the textbook Boolean-valued recursion with ∧ = &, ∨ = |,
    ¬ = complement and a → b = ¬a ∨ b.
    """

    def __init__(self, atoms: int):
        self.full = (1 << atoms) - 1
        self._mem, self._sub = {}, {}

    def universe(self, rank: int, max_domain: int) -> list:
        level = [()]
        for _ in range(rank):
            nxt = set()
            for k in range(min(len(level), max_domain) + 1):
                for dom in itertools.combinations(level, k):
                    for vals in itertools.product(range(self.full + 1), repeat=k):
                        nxt.add(tuple(sorted(zip(dom, vals))))
            level = sorted(nxt)
        return level

    def mem(self, x, y) -> int:
        key = (x, y)
        if key not in self._mem:
            v = 0
            for t, yt in y:
                v |= self.eq(x, t) & yt
            self._mem[key] = v
        return self._mem[key]

    def sub(self, x, y) -> int:
        key = (x, y)
        if key not in self._sub:
            v = self.full
            for t, xt in x:
                v &= (self.full & ~xt) | self.mem(t, y)
            self._sub[key] = v
        return self._sub[key]

    def eq(self, x, y) -> int:
        return self.sub(x, y) & self.sub(y, x)

    def value(self, phi, env, universe) -> int:
        kind = type(phi).__name__
        if kind == "Mem":
            return self.mem(env[phi.left], env[phi.right])
        if kind == "Eq":
            return self.eq(env[phi.left], env[phi.right])
        if kind == "Not":
            return self.full & ~self.value(phi.body, env, universe)
        if kind in ("All", "Ex"):
            vals = [self.value(phi.body, {**env, phi.var: u}, universe) for u in universe]
            out = self.full if kind == "All" else 0
            for v in vals:
                out = out & v if kind == "All" else out | v
            return out
        a = self.value(phi.left, env, universe)
        b = self.value(phi.right, env, universe)
        if kind in ("And", "Tensor"):
            return a & b
        if kind == "Or":
            return a | b
        if kind == "Imp":
            return (self.full & ~a) | b
        raise TypeError(kind)


def mv_name_to_tuple(x) -> tuple:
    """Convert a library name (whose values are bitmask indices) to the oracle form."""
    return tuple(sorted((mv_name_to_tuple(c), v) for c, v in x.entries))


# ------------------------------------------------------ classical HF sets

def hf_universe(rank: int) -> list:
    """Hereditarily finite sets of rank < ``rank`` as nested frozensets."""
    level = {frozenset()}
    for _ in range(rank - 1):
        members = list(level)
        level = {frozenset(c) for k in range(len(members) + 1)
                 for c in itertools.combinations(members, k)}
    return sorted(level, key=lambda s: (len(repr(s)), repr(s)))


def classical(phi, env, domain) -> bool:
    kind = type(phi).__name__
    if kind == "Mem":
        return env[phi.left] in env[phi.right]
    if kind == "Eq":
        return env[phi.left] == env[phi.right]
    if kind == "Not":
        return not classical(phi.body, env, domain)
    if kind == "All":
        return all(classical(phi.body, {**env, phi.var: d}, domain) for d in domain)
    if kind == "Ex":
        return any(classical(phi.body, {**env, phi.var: d}, domain) for d in domain)
    a = classical(phi.left, env, domain)
    b = classical(phi.right, env, domain)
    return {"And": a and b, "Tensor": a and b, "Or": a or b, "Imp": (not a) or b}[kind]


# --------------------------------------------------------- Łukasiewicz chains

def lukasiewicz_closed_forms(n: int):
    """Integer-index tables for {0, 1/n, ..., 1}: a ⊕ b = min(n, a+b), etc."""
    r = range(n + 1)
    return {
        "oplus": [[min(n, a + b) for b in r] for a in r],
        "otimes": [[max(0, a + b - n) for b in r] for a in r],
        "imp": [[min(n, n - a + b) for b in r] for a in r],
        "neg": [n - a for a in r],
        "meet": [[min(a, b) for b in r] for a in r],
        "join": [[max(a, b) for b in r] for a in r],
    }

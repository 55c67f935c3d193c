"""Enumeration of small posets, lattices and BLOs up to isomorphism.

The distributive test corpus is built from Birkhoff's theorem: every finite
distributive lattice is the lattice of downsets of its poset of
join-irreducibles, so running through posets runs through the corpus.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx

from .errors import BudgetExceeded
from .lattice import BLO, FiniteLattice, build_lattice, is_distributive

MAX_CORPUS_POSET = 6


def _order_graph(leq) -> nx.DiGraph:
    n = len(leq)
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((x, y) for x in range(n) for y in range(n) if x != y and leq[x][y])
    return g


def dedupe_orders(orders):
    """Keep the first representative of every isomorphism class of order relations."""
    buckets = {}
    kept = []
    for leq in orders:
        g = _order_graph(leq)
        key = (len(leq), g.number_of_edges(), nx.weisfeiler_lehman_graph_hash(g, iterations=3))
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(g, h) for h in bucket):
            continue
        bucket.append(g)
        kept.append(leq)
    return kept


def _naturally_labelled_posets(n):
    """Posets on 0..n-1 in which i ≤ j implies i ≤ j as integers.

    Each new point is placed on top of a downset of the points before it, so
    every poset appears at least once (via any linear extension).
    """
    if n == 0:
        yield ()
        return
    for smaller in _naturally_labelled_posets(n - 1):
        m = n - 1
        for bits in range(1 << m):
            below = [i for i in range(m) if bits >> i & 1]
            if any(smaller[z][b] and not bits >> z & 1 for b in below for z in range(m)):
                continue
            rows = [list(r) + [bool(bits >> i & 1)] for i, r in enumerate(smaller)]
            rows.append([False] * m + [True])
            yield tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def posets(n: int) -> tuple:
    """All posets on exactly ``n`` points up to isomorphism, as order tables."""
    if n > 7:
        raise BudgetExceeded(7, what=f"poset enumeration on {n} points")
    return tuple(dedupe_orders(_naturally_labelled_posets(n)))


def downset_lattice(leq) -> FiniteLattice:
    """Lattice of downsets of a finite poset, ordered by inclusion.

    Downsets are listed by size, then by bitmask; labels spell out the points.
    """
    n = len(leq)
    masks = []
    for m in range(1 << n):
        if all(not (m >> y & 1) or all(m >> x & 1 for x in range(n) if leq[x][y])
               for y in range(n)):
            masks.append(m)
    masks.sort(key=lambda m: (bin(m).count("1"), m))
    labels = ["{" + ",".join(str(i) for i in range(n) if m >> i & 1) + "}" for m in masks]
    return build_lattice([[(a & b) == a for b in masks] for a in masks], labels)


def generate_corpus(max_poset_size: int, cumulative: bool = False) -> list:
    """Downset lattices of the posets on ``max_poset_size`` points.

    With ``cumulative=True`` every poset size from 1 up to the bound is
    included.  Lattices are deduplicated up to isomorphism and sorted by size,
    ties kept in enumeration order.
    """
    if max_poset_size > MAX_CORPUS_POSET:
        raise BudgetExceeded(MAX_CORPUS_POSET, what="corpus poset size")
    sizes = range(1, max_poset_size + 1) if cumulative else [max_poset_size]
    lattices = [downset_lattice(p) for n in sizes for p in posets(n)]
    kept = dedupe_orders([L.leq for L in lattices])
    keep_ids = {id(leq) for leq in kept}
    unique = [L for L in lattices if id(L.leq) in keep_ids]
    order = sorted(range(len(unique)), key=lambda i: (unique[i].size, i))
    return [unique[i] for i in order]


@lru_cache(maxsize=None)
def lattices_of_size(n: int) -> tuple:
    """All lattices with exactly ``n`` elements up to isomorphism.

    Brute force: bottom is 0, top is n-1, and the middle runs over all
    naturally labelled posets on n-2 points.
    """
    if n <= 0:
        return ()
    if n == 1:
        return (build_lattice([[True]]),)
    found = []
    for middle in _naturally_labelled_posets(n - 2):
        m = n - 2
        leq = [[False] * n for _ in range(n)]
        for x in range(n):
            leq[0][x] = True
            leq[x][n - 1] = True
        for i in range(m):
            for j in range(m):
                leq[i + 1][j + 1] = middle[i][j]
        try:
            found.append(build_lattice(leq))
        except Exception:
            continue
    kept = dedupe_orders([L.leq for L in found])
    ids = {id(k) for k in kept}
    return tuple(L for L in found if id(L.leq) in ids)


def lattices_upto(k: int) -> list:
    return [L for n in range(1, k + 1) for L in lattices_of_size(n)]


def admissible_operators(L: FiniteLattice) -> list:
    """Every unary table that is normal, monotone, join-preserving and idempotent."""
    n = L.size
    free = [x for x in range(n) if x not in (L.bottom, L.top)]
    found = []
    for values in itertools.product(range(n), repeat=len(free)):
        f = [0] * n
        f[L.bottom], f[L.top] = L.bottom, L.top
        for x, v in zip(free, values):
            f[x] = v
        if any(f[f[x]] != f[x] for x in range(n)):
            continue
        if any(f[L.join[x][y]] != L.join[f[x]][f[y]] for x in range(n) for y in range(n)):
            continue
        found.append(tuple(f))
    return found


def _meet_condition(L, ops) -> bool:
    deltas = [frozenset(i for i, f in enumerate(ops) if f[x] != x) for x in range(L.size)]
    return all(deltas[L.meet[x][y]] <= deltas[x] | deltas[y]
               for x in range(L.size) for y in range(L.size))


def small_blos(k: int, n_ops: int, distributive: bool = True):
    """Yield lattices (n_ops = 0) or BLOs with at most ``k`` elements, smallest first.

    BLOs are not reduced modulo lattice automorphisms, so isomorphic copies may repeat.
    """
    for L in lattices_upto(k):
        if distributive and not is_distributive(L).holds:
            continue
        if n_ops == 0:
            yield L
            continue
        if not is_distributive(L).holds:
            continue
        for ops in itertools.product(admissible_operators(L), repeat=n_ops):
            if _meet_condition(L, ops):
                yield BLO(L, tuple(ops))


def join_irreducibles(L) -> list:
    """Elements with exactly one lower cover (independent of any ideal machinery)."""
    L = L.lattice
    out = []
    for x in range(L.size):
        below = [y for y in range(L.size) if y != x and L.leq[y][x]]
        covers = [y for y in below if not any(z != y and L.leq[y][z] for z in below)]
        if len(covers) == 1:
            out.append(x)
    return out

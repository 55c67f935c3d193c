"""Dual sheaves of BLOs over the prime spectrum of their zero-dimensional part.

The base space is finite, hence discrete, so every choice of one stalk
element per point is a continuous section and the section algebra is the
full product of the stalks.  That is what makes the representation map
falsifiable: for the three-element chain it is injective but not onto.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from . import config
from .errors import BudgetExceeded, IllDefined, NotApplicable, NotBoolean
from .ideals import (
    Congruence,
    congruence_generated,
    ideal_generated,
    lattice_theta,
    meet_congruences,
    quotient,
)
from .lattice import (
    BLO,
    Homomorphism,
    check_homomorphism,
    enumerate_homomorphisms,
    identity,
    is_boolean,
    nr,
    product,
    zd,
)
from .priestley import PriestleySpace, spectrum

MODES = ("congruence", "ideal")


@dataclass(frozen=True, eq=False)
class Sheaf:
    """A finite base poset with one algebra (stalk) over each point."""

    order: tuple
    stalks: tuple

    @property
    def n_points(self) -> int:
        return len(self.stalks)

    @property
    def n_operators(self) -> int:
        return len(self.stalks[0].operators) if self.stalks else 0

    @property
    def gamma_size(self) -> int:
        return math.prod(G.size for G in self.stalks)

    def sections(self):
        """All sections in lexicographic order of their value tuples."""
        return itertools.product(*(range(G.size) for G in self.stalks))

    def section_index(self, s) -> int:
        k = 0
        for G, v in zip(self.stalks, s):
            k = k * G.size + v
        return k

    def zero(self) -> tuple:
        return tuple(G.bottom for G in self.stalks)

    def one(self) -> tuple:
        return tuple(G.top for G in self.stalks)

    def meet(self, s, t) -> tuple:
        return tuple(G.meet[a][b] for G, a, b in zip(self.stalks, s, t))

    def join(self, s, t) -> tuple:
        return tuple(G.join[a][b] for G, a, b in zip(self.stalks, s, t))

    def leq(self, s, t) -> bool:
        return all(G.leq[a][b] for G, a, b in zip(self.stalks, s, t))

    def apply(self, i, s) -> tuple:
        return tuple(G.operators[i][a] for G, a in zip(self.stalks, s))

    def support(self, s) -> frozenset:
        """[σ] = {x : σ(x) ≠ 0_x}."""
        return frozenset(x for x, (G, a) in enumerate(zip(self.stalks, s)) if a != G.bottom)

    def characteristic(self, U) -> tuple:
        return tuple(G.top if x in U else G.bottom for x, G in enumerate(self.stalks))


def one_point_sheaf(D) -> Sheaf:
    return Sheaf(((True,),), (D,))


@dataclass(frozen=True, eq=False)
class SheafTriple(Sheaf):
    """The dual (X, δ, π) of a BLO.

    ``points[x]`` is the prime ideal x of Nr_J A as a set of host elements,
    ``sigma[a][x]`` the image of a in the stalk over x.  The projection π
    sends a stalk element over x back to x, so it is implicit in the
    indexing.
    """

    host: object = None
    J: tuple = ()
    mode: str = "congruence"
    base: PriestleySpace = None
    points: tuple = ()
    congruences: tuple = ()
    projections: tuple = ()
    sigma: tuple = ()

    def pi(self, x: int, element: int) -> int:
        return x

    def section_of(self, a: int) -> tuple:
        return self.sigma[a]


def stalk_congruence(A, x, mode: str = "congruence") -> Congruence:
    if mode == "congruence":
        return congruence_generated(A, frozenset(x))
    if mode == "ideal":
        return lattice_theta(A, ideal_generated(A, x).carrier)
    raise ValueError(f"unknown stalk mode {mode!r}; expected one of {MODES}")


def build_sheaf(A, J=(), mode: str = "congruence") -> SheafTriple:
    """Dual sheaf of A over the spectrum of Nr_J A (J = () gives Zd A)."""
    J = tuple(sorted(set(J)))
    reduct, inc = nr(A, J)
    X = spectrum(reduct.lattice)
    points = tuple(frozenset(inc[k] for k in P.carrier) for P in X.points)
    congruences, stalks, projections = [], [], []
    for x in points:
        theta = stalk_congruence(A, x, mode)
        G, proj = quotient(A, theta)
        congruences.append(theta)
        stalks.append(G)
        projections.append(proj)
    sigma = tuple(tuple(p.table[a] for p in projections) for a in range(A.size))
    S = SheafTriple(order=X.order, stalks=tuple(stalks), host=A, J=J, mode=mode, base=X,
                    points=points, congruences=tuple(congruences),
                    projections=tuple(projections), sigma=sigma)
    check_sheaf(S)
    return S


def check_sheaf(S: SheafTriple) -> None:
    A = S.host
    for x in range(S.n_points):
        assert S.pi(x, S.sigma[A.bottom][x]) == x
    for a in range(A.size):
        for b in range(A.size):
            assert S.sigma[A.meet[a][b]] == S.meet(S.sigma[a], S.sigma[b]), (a, b)
            assert S.sigma[A.join[a][b]] == S.join(S.sigma[a], S.sigma[b]), (a, b)
        for i in range(len(A.operators)):
            assert S.sigma[A.operators[i][a]] == S.apply(i, S.sigma[a]), (i, a)


class SectionAlgebra:
    """Γ(X, δ): all sections of a finite sheaf with pointwise operations."""

    def __init__(self, sheaf: Sheaf):
        self.sheaf = sheaf

    @property
    def size(self) -> int:
        return self.sheaf.gamma_size

    def __contains__(self, s) -> bool:
        s = tuple(s)
        return len(s) == self.sheaf.n_points and all(
            0 <= v < G.size for G, v in zip(self.sheaf.stalks, s))

    def elements(self) -> list:
        return list(self.sheaf.sections())

    def certificate(self, s) -> Optional[tuple]:
        """Host elements a_x with σ_{a_x}(x) = s(x), one per point."""
        S = self.sheaf
        if not isinstance(S, SheafTriple):
            return None
        return tuple(next(a for a in range(S.host.size) if S.sigma[a][x] == v)
                     for x, v in enumerate(s))

    @cached_property
    def algebra(self):
        """The materialized product algebra; elements indexed as in ``elements()``."""
        limit = config.budget()
        if self.size > limit:
            raise BudgetExceeded(limit, what=f"section algebra of size {self.size}")
        return product(*self.sheaf.stalks, max_size=max(self.size, config.MAX_SIZE))


def sections(S: Sheaf) -> SectionAlgebra:
    return SectionAlgebra(S)


@dataclass(frozen=True)
class EtaDiagnosis:
    table: tuple            # a ↦ σ_a
    homomorphism: bool
    injective: bool
    injective_via_congruences: bool
    surjective: bool
    gamma_size: int
    image_size: int

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def eta(A, S: SheafTriple = None) -> EtaDiagnosis:
    """Diagnose η(a) = σ_a rather than assume it is an isomorphism."""
    S = S or build_sheaf(A)
    table = S.sigma
    hom = all(table[A.meet[a][b]] == S.meet(table[a], table[b])
              and table[A.join[a][b]] == S.join(table[a], table[b])
              for a in range(A.size) for b in range(A.size))
    hom = hom and table[A.bottom] == S.zero() and table[A.top] == S.one()
    hom = hom and all(table[f[a]] == S.apply(i, table[a])
                      for i, f in enumerate(A.operators) for a in range(A.size))
    image = set(table)
    common = None
    for theta in S.congruences:
        common = theta if common is None else meet_congruences(A, common, theta)
    via_congruences = (A.size <= 1) if common is None else common.is_identity()
    return EtaDiagnosis(
        table=table,
        homomorphism=hom,
        injective=len(image) == A.size,
        injective_via_congruences=via_congruences,
        surjective=len(image) == S.gamma_size,
        gamma_size=S.gamma_size,
        image_size=len(image),
    )


def eta_homomorphism(A, S: SheafTriple) -> Homomorphism:
    G = sections(S).algebra
    return Homomorphism(A, G, tuple(S.section_index(s) for s in S.sigma))


@dataclass(frozen=True)
class StoneReport:
    n_points: int
    stalk_sizes: tuple
    isomorphism: bool

    @property
    def holds(self) -> bool:
        return self.isomorphism and all(k == 2 for k in self.stalk_sizes)


def stone_specialize(B) -> StoneReport:
    """Boolean case: every stalk should be the two-element algebra and η an isomorphism."""
    if not is_boolean(B):
        raise NotBoolean("lattice is not Boolean")
    S = build_sheaf(BLO(B.lattice, ()))
    d = eta(S.host, S)
    return StoneReport(S.n_points, tuple(G.size for G in S.stalks), d.isomorphism)


@dataclass(frozen=True, eq=False)
class SheafMorphism:
    """(λ, μ) from ``source`` to ``target``: λ maps source points to target points,
    μ[y] is a homomorphism from the target stalk over λ(y) to the source stalk over y."""

    source: Sheaf
    target: Sheaf
    lam: tuple
    mu: tuple

    def key(self) -> tuple:
        return self.lam, tuple(m.table for m in self.mu)

    def __eq__(self, other):
        return isinstance(other, SheafMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def check_sheaf_morphism(H: SheafMorphism) -> None:
    Y, X = H.source, H.target
    for y in range(Y.n_points):
        for z in range(Y.n_points):
            if Y.order[y][z]:
                assert X.order[H.lam[y]][H.lam[z]], ("λ not monotone", y, z)
        m = H.mu[y]
        assert m.source is X.stalks[H.lam[y]] and m.target is Y.stalks[y], y
        check_homomorphism(m)


def identity_sheaf_morphism(S: Sheaf) -> SheafMorphism:
    return SheafMorphism(S, S, tuple(range(S.n_points)), tuple(identity(G) for G in S.stalks))


def compose_sheaf(H: SheafMorphism, K: SheafMorphism) -> SheafMorphism:
    """H ∘ K (K first)."""
    from .lattice import compose

    lam = tuple(H.lam[K.lam[z]] for z in range(K.source.n_points))
    mu = tuple(compose(K.mu[z], H.mu[K.lam[z]]) for z in range(K.source.n_points))
    return SheafMorphism(K.source, H.target, lam, mu)


def dual_of_hom_sheaf(h: Homomorphism, SA: SheafTriple = None, SB: SheafTriple = None,
                      mode: str = "congruence") -> SheafMorphism:
    """h^d = (h*, h°) from the dual of h's target to the dual of its source.

    h*(y) = h⁻¹(y) ∩ Nr_J A and h°(y, a/θ(h*(y))) = h(a)/θ(y); raises
    IllDefined if either formula fails to produce a point or a map.
    """
    A, B = h.source, h.target
    SA = SA or build_sheaf(A, mode=mode)
    SB = SB or build_sheaf(B, J=SA.J, mode=SA.mode)
    _, inc = nr(A, SA.J)
    reduct = set(inc)
    index = {P: i for i, P in enumerate(SA.points)}
    lam, mu = [], []
    for y, Q in enumerate(SB.points):
        pre = frozenset(a for a in reduct if h.table[a] in Q)
        if pre not in index:
            raise IllDefined(("h* does not land on a point", y, sorted(pre)))
        x = index[pre]
        theta_a, theta_b = SA.congruences[x], SB.congruences[y]
        table = [None] * SA.stalks[x].size
        for a in range(A.size):
            blk, img = theta_a.partition[a], theta_b.partition[h.table[a]]
            if table[blk] is None:
                table[blk] = img
            elif table[blk] != img:
                raise IllDefined(("stalk map", y, a))
        m = Homomorphism(SA.stalks[x], SB.stalks[y], tuple(table))
        check_homomorphism(m)
        lam.append(x)
        mu.append(m)
    H = SheafMorphism(SB, SA, tuple(lam), tuple(mu))
    check_sheaf_morphism(H)
    return H


class SectionMap:
    """Γ(H): sections of H's target → sections of H's source, (Γ(H)σ)(y) = μ_y(σ(λy))."""

    def __init__(self, H: SheafMorphism):
        self.H = H

    def __call__(self, s) -> tuple:
        H = self.H
        return tuple(H.mu[y].table[s[H.lam[y]]] for y in range(H.source.n_points))

    def table(self) -> tuple:
        return tuple(self(s) for s in self.H.target.sections())


def gamma_of_morphism(H: SheafMorphism, verify: bool = True) -> SectionMap:
    g = SectionMap(H)
    if verify:
        X = H.target
        secs = list(X.sections())
        for s in secs:
            for i in range(X.n_operators):
                assert g(X.apply(i, s)) == H.source.apply(i, g(s))
            for t in secs:
                assert g(X.meet(s, t)) == H.source.meet(g(s), g(t))
                assert g(X.join(s, t)) == H.source.join(g(s), g(t))
        assert g(X.zero()) == H.source.zero() and g(X.one()) == H.source.one()
    return g


def gamma_homomorphism(H: SheafMorphism) -> Homomorphism:
    g = SectionMap(H)
    src, tgt = sections(H.target).algebra, sections(H.source).algebra
    h = Homomorphism(src, tgt, tuple(H.source.section_index(g(s)) for s in H.target.sections()))
    check_homomorphism(h)
    return h


@dataclass(frozen=True)
class DoubleDualVerdict:
    isomorphism: bool
    squares_checked: int
    natural: bool


def hom_double_dual_check(A, targets=None) -> DoubleDualVerdict:
    """A ≅ Γ over the Stone space of Zd A, and naturality on sampled squares.

    For every h: A → B with B in ``targets`` (default: A itself) we check
    Γ(h^d) ∘ η_A = η_B ∘ h.  Raises NotApplicable unless Zd A is Boolean.
    """
    Z, _ = zd(A)
    if not is_boolean(Z):
        raise NotApplicable("zero-dimensional part is not Boolean")
    SA = build_sheaf(A)
    iso = eta(A, SA).isomorphism
    checked = 0
    natural = True
    for B in (targets if targets is not None else [A]):
        if not is_boolean(zd(B)[0]):
            continue
        SB = SA if B is A else build_sheaf(B)
        for h in enumerate_homomorphisms(A, B):
            g = SectionMap(dual_of_hom_sheaf(h, SA, SB))
            checked += 1
            if any(g(SA.sigma[a]) != SB.sigma[h.table[a]] for a in range(A.size)):
                natural = False
    return DoubleDualVerdict(iso, checked, natural)


@dataclass(frozen=True)
class RegularIdealReport:
    n_opens: int
    n_regular: int
    n_regular_fixed_point_reading: int
    bijection: bool
    order_isomorphism: bool

    @property
    def holds(self) -> bool:
        return self.bijection and self.order_isomorphism


def _ideal_closure(S: Sheaf, g: tuple) -> tuple:
    while True:
        nxt = g
        for i in range(S.n_operators):
            nxt = S.join(nxt, S.apply(i, nxt))
        if nxt == g:
            return g
        g = nxt


def regular_ideal_open_iso(S: Sheaf, budget: Optional[int] = None) -> RegularIdealReport:
    """Check that J ↦ U[J] and U ↦ J[U] are inverse order isomorphisms.

    Ideals of the finite algebra Γ are the downsets ↓g with f_i(g) ≤ g.
    An ideal is regular when it is generated by its members from the
    zero-dimensional part of Γ, taken here to be the characteristic sections
    (0 or 1 in every stalk).  The count under the literal reading, with the
    operator fixed points of Γ as its zero-dimensional part, is reported
    alongside.
    """
    budget = config.budget(budget)
    if S.gamma_size > budget:
        raise BudgetExceeded(budget, what=f"section algebra of size {S.gamma_size}")
    secs = list(S.sections())
    n = S.n_points
    opens = [frozenset(U) for k in range(n + 1) for U in itertools.combinations(range(n), k)]
    chars = [S.characteristic(U) for U in opens]
    fixed = [s for s in secs if all(S.apply(i, s) == s for i in range(S.n_operators))]
    ideal_gens = [g for g in secs if all(S.leq(S.apply(i, g), g) for i in range(S.n_operators))]

    def generated(members):
        g = S.zero()
        for s in members:
            g = S.join(g, s)
        return _ideal_closure(S, g)

    regular = [g for g in ideal_gens if generated(c for c in chars if S.leq(c, g)) == g]
    literal = [g for g in ideal_gens if generated(c for c in fixed if S.leq(c, g)) == g]

    def J_of(U):
        # generator of {σ : [σ] ⊆ U}
        return generated(s for s in secs if S.support(s) <= U)

    def U_of(g):
        # supports grow with σ, so the union over ↓g is the support of g
        return S.support(g)

    regular_set = set(regular)
    bijection = (all(U_of(J_of(U)) == U and J_of(U) in regular_set for U in opens)
                 and all(J_of(U_of(g)) == g for g in regular)
                 and len(regular) == len(opens))
    order_iso = all(S.leq(g, h) == (U_of(g) <= U_of(h)) for g in regular for h in regular)
    return RegularIdealReport(len(opens), len(regular), len(literal), bijection, order_iso)


@dataclass(frozen=True)
class MonoReport:
    lambda_injective: bool
    mu_surjective: bool
    categorical_mono: bool
    witness: Optional[tuple] = None

    @property
    def structural_mono(self) -> bool:
        return self.lambda_injective and self.mu_surjective

    @property
    def agree(self) -> bool:
        return self.structural_mono == self.categorical_mono


def is_mono_sheaf(H: SheafMorphism, k: int, budget: Optional[int] = None) -> MonoReport:
    """Structural conditions versus a bounded search for K1 ≠ K2 with H∘K1 = H∘K2.

    Test sheaves are one-point sheaves over algebras with at most ``k``
    elements.  Over a finite discrete base a morphism from a larger test
    sheaf splits into one-point pieces, so these suffice for the bound.
    """
    from .enumeration import small_blos

    Y = H.source
    lam_inj = len(set(H.lam)) == len(H.lam)
    mu_surj = all(m.is_surjective() for m in H.mu)
    witness = None
    for D in small_blos(k, Y.n_operators):
        seen = {}
        for y in range(Y.n_points):
            for f in enumerate_homomorphisms(Y.stalks[y], D, budget=budget):
                composite = (H.lam[y], tuple(f.table[v] for v in H.mu[y].table))
                if composite in seen and seen[composite] != (y, f.table):
                    witness = (D, seen[composite], (y, f.table))
                    break
                seen[composite] = (y, f.table)
            if witness:
                break
        if witness:
            break
    return MonoReport(lam_inj, mu_surj, witness is None, witness)

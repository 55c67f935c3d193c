"""Prime spectra of finite distributive lattices and the duality with downset lattices.

In the finite case the Priestley topology is discrete, so a space is just the
inclusion order on prime ideals together with the basic sets N_a.  Points
are prime ideals, never prime filters.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDistributive, NotHomomorphism, NotIsomorphism
from .ideals import enumerate_ideals
from .lattice import FiniteLattice, Homomorphism, build_lattice, check_homomorphism, is_distributive


@dataclass(frozen=True, eq=False)
class PriestleySpace:
    host: FiniteLattice
    points: tuple            # Ideal objects, canonical order
    order: tuple             # order[i][j]: points[i] ⊆ points[j]
    basis: tuple             # basis[a] = frozenset of point indices P with a ∉ P
    topology: str = "discrete"

    @property
    def n_points(self) -> int:
        return len(self.points)

    def is_downset(self, U) -> bool:
        return all(i in U for j in U for i in range(self.n_points) if self.order[i][j])

    def downsets(self) -> list:
        """All downward closed point sets, by size then contents."""
        n = self.n_points
        found = []
        for m in range(1 << n):
            U = frozenset(i for i in range(n) if m >> i & 1)
            if self.is_downset(U):
                found.append(U)
        found.sort(key=lambda U: (len(U), sorted(U)))
        return found

    def point_label(self, i) -> str:
        return "{" + ",".join(self.host.labels[x] for x in sorted(self.points[i].carrier)) + "}"


def spectrum(L) -> PriestleySpace:
    L = L.lattice
    verdict = is_distributive(L)
    if not verdict.holds:
        raise NotDistributive(verdict.witness)
    points = tuple(I for I in enumerate_ideals(L, blo_closed=False) if I.is_prime)
    order = tuple(tuple(p.carrier <= q.carrier for q in points) for p in points)
    basis = tuple(frozenset(i for i, P in enumerate(points) if a not in P.carrier)
                  for a in range(L.size))
    X = PriestleySpace(L, points, order, basis)
    check_space(X)
    return X


def check_space(X: PriestleySpace) -> None:
    """Assert the point, basis and separation invariants."""
    L = X.host
    everything = frozenset(range(X.n_points))
    for P in X.points:
        assert P.is_prime, P
    assert X.basis[L.bottom] == frozenset()
    assert X.basis[L.top] == everything
    for a in range(L.size):
        assert X.is_downset(X.basis[a]), a
        for b in range(L.size):
            assert X.basis[L.meet[a][b]] == X.basis[a] & X.basis[b], (a, b)
            assert X.basis[L.join[a][b]] == X.basis[a] | X.basis[b], (a, b)
    for i in range(X.n_points):
        for j in range(X.n_points):
            if not X.order[i][j]:
                # a basic downward clopen set containing j but not i
                assert any(j in U and i not in U for U in X.basis), (i, j)


def clopen_downsets(X: PriestleySpace) -> FiniteLattice:
    sets = X.downsets()
    labels = ["{" + ",".join(X.point_label(i) for i in sorted(U)) + "}" for U in sets]
    return build_lattice([[U <= V for V in sets] for U in sets], labels)


def duality_unit(L) -> Homomorphism:
    """The map a ↦ N_a into the clopen downsets of the spectrum; raises NotIsomorphism on failure."""
    L = L.lattice
    X = spectrum(L)
    sets = X.downsets()
    index = {U: k for k, U in enumerate(sets)}
    D = clopen_downsets(X)
    h = Homomorphism(L, D, tuple(index[X.basis[a]] for a in range(L.size)))
    try:
        check_homomorphism(h)
    except NotHomomorphism as exc:
        raise NotIsomorphism(exc.witness) from exc
    if not h.is_injective():
        raise NotIsomorphism("not injective")
    if not h.is_surjective():
        raise NotIsomorphism("not surjective")
    return h


@dataclass(frozen=True, eq=False)
class PointMap:
    source: PriestleySpace
    target: PriestleySpace
    table: tuple

    def __call__(self, i):
        return self.table[i]

    def __eq__(self, other):
        return isinstance(other, PointMap) and self.table == other.table

    def __hash__(self):
        return hash(self.table)


def dual_of_hom(h: Homomorphism, X: PriestleySpace = None, Y: PriestleySpace = None) -> PointMap:
    """P ↦ h⁻¹(P), from Spec(target) to Spec(source)."""
    check_homomorphism(h)
    X = X or spectrum(h.source)
    Y = Y or spectrum(h.target)
    index = {P.carrier: i for i, P in enumerate(X.points)}
    table = []
    for Q in Y.points:
        pre = frozenset(a for a in range(h.source.size) if h.table[a] in Q.carrier)
        if pre not in index:
            raise AssertionError(f"preimage {sorted(pre)} is not a prime ideal")
        table.append(index[pre])
    f = PointMap(Y, X, tuple(table))
    for i in range(Y.n_points):
        for j in range(Y.n_points):
            if Y.order[i][j]:
                assert X.order[f(i)][f(j)], (i, j)
    return f


def dual_of_point_map(f: PointMap) -> Homomorphism:
    """U ↦ f⁻¹(U), from downsets of f's target to downsets of its source."""
    Y, X = f.source, f.target
    for i in range(Y.n_points):
        for j in range(Y.n_points):
            if Y.order[i][j] and not X.order[f(i)][f(j)]:
                raise ValueError(f"point map is not monotone at {(i, j)}")
    down_x, down_y = X.downsets(), Y.downsets()
    index = {U: k for k, U in enumerate(down_y)}
    table = tuple(index[frozenset(i for i in range(Y.n_points) if f(i) in U)] for U in down_x)
    h = Homomorphism(clopen_downsets(X), clopen_downsets(Y), table)
    check_homomorphism(h)
    return h


def naturality_holds(h: Homomorphism) -> bool:
    """Check η_M ∘ h = D(h*) ∘ η_L, i.e. the double dual of h transported by the units is h."""
    from .lattice import compose

    unit_l = duality_unit(h.source)
    unit_m = duality_unit(h.target)
    double = dual_of_point_map(dual_of_hom(h))
    return compose(unit_m, h).table == compose(double, unit_l).table

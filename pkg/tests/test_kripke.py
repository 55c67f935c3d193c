import itertools
import pathlib

import pytest

import sheafdual

from oracles import classical, hf_universe
from sheafdual.enumeration import downset_lattice, posets
from sheafdual.errors import TensorAxiomViolation, TensorUnavailable, UniverseTooLarge
from sheafdual.formula import default_suite, free_vars, parse_formula, uses_tensor
from sheafdual.io import load
from sheafdual.kripke import (KJForcing, KJName, build_site, empty_name, excluded_middle_witness,
                              forces, heyting_adapter, is_restriction_closed, meet_tensor,
                              name_presheaf, names_upto, persistence_check, restrict, yoneda)
from sheafdual.lattice import boolean_lattice, chain

DATA = pathlib.Path(sheafdual.__file__).parent / "data"
CHAIN2 = ((True, True), (False, True))     # q < p
Q, P = 0, 1


def chain_site():
    return build_site(CHAIN2, meet_tensor(CHAIN2), ["q", "p"])


def to_set(a):
    return frozenset(to_set(b) for _, b in a.entries)


# ------------------------------------------------------------------ sites

def test_one_point_site_has_trivial_tensor():
    S = build_site([[True]])
    assert S.monoidal and S.tensor == ((0,),) and S.top == 0


def test_chain_and_lukasiewicz_sites():
    S = chain_site()
    assert S.tensor == ((0, 0), (0, 1)) and S.top == P
    L3 = build_site([[1, 1, 1], [0, 1, 1], [0, 0, 1]], [[0, 0, 0], [0, 0, 1], [0, 1, 2]])
    assert L3.tensor[1][1] == 0 and L3.monoidal


@pytest.mark.parametrize("tensor, axiom", [
    ([[0, 1], [1, 1]], "unit"),
    ([[0, 0], [1, 1]], "unit"),
    ([[0, 0, 0], [0, 1, 1], [0, 1, 2]], None),
])
def test_tensor_axioms(tensor, axiom):
    order = CHAIN2 if len(tensor) == 2 else [[1, 1, 1], [0, 1, 1], [0, 0, 1]]
    if axiom is None:
        build_site(order, tensor)
        return
    with pytest.raises(TensorAxiomViolation) as err:
        build_site(order, tensor)
    assert err.value.axiom == axiom


def test_tensor_must_be_integral_and_associative():
    order = [[1, 1, 1], [0, 1, 1], [0, 0, 1]]
    with pytest.raises(TensorAxiomViolation) as err:
        build_site(order, [[0, 0, 0], [0, 2, 1], [0, 1, 2]])
    assert err.value.axiom == "integrality"


def test_v_site_has_no_tensor():
    S = load(DATA / "site_v.json").value
    assert not S.monoidal and meet_tensor(S.leq) is None
    with pytest.raises(TensorUnavailable):
        forces(S, 2, parse_formula("(tensor (eq x x) (eq x x))"), {"x": empty_name(2)})


# ------------------------------------------------------------------ names

def test_name_counts():
    S = chain_site()
    assert [len(level) for level in names_upto(S, 0)] == [1, 1]
    assert [len(level) for level in names_upto(S, 1)] == [2, 3]
    one = build_site([[True]])
    assert [len(level) for level in names_upto(one, 2)] == [4]


def test_rank_one_names_are_downsets_of_principal_downsets():
    for order in posets(3) + posets(2):
        S = build_site(order)
        level = names_upto(S, 1)
        for I in S.points:
            below = [[S.leq[a][b] for b in S.below(I)] for a in S.below(I)]
            assert len(level[I]) == downset_lattice(below).size


def test_restriction_examples():
    S = chain_site()
    b = KJName(P, [(Q, empty_name(Q))])
    assert restrict(S, b, Q) == KJName(Q, [(Q, empty_name(Q))])
    assert restrict(S, b, P) is b
    with pytest.raises(ValueError):
        restrict(S, empty_name(Q), P)
    assert is_restriction_closed(S, b)
    assert not is_restriction_closed(S, KJName(P, [(P, empty_name(P))]))


def test_restriction_is_functorial():
    for order in posets(3):
        S = build_site(order)
        for I, level in enumerate(names_upto(S, 2)):
            for a in level:
                assert is_restriction_closed(S, a)
                for J in S.below(I):
                    for K in S.below(J):
                        assert restrict(S, restrict(S, a, J), K) == restrict(S, a, K)


def test_presheaves():
    S = build_site([[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert name_presheaf(S, 1).check() == []
    y = yoneda(S, 1)
    assert [len(s) for s in y.sets] == [1, 1, 0] and y.check() == []


def test_universe_budget():
    S = build_site([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(UniverseTooLarge):
        names_upto(S, 3, budget=50)


# ---------------------------------------------------------------- forcing

def test_one_point_site_is_classical():
    S = build_site([[True]])
    R = 2
    engine = KJForcing(S, R)
    names = engine.universe[0]
    domain = [to_set(a) for a in names]
    assert sorted(domain, key=repr) == sorted(hf_universe(R + 1), key=repr)
    for phi in default_suite():
        fv = sorted(free_vars(phi))
        for combo in itertools.product(names, repeat=len(fv)):
            env = dict(zip(fv, combo))
            want = classical(phi, {v: to_set(a) for v, a in env.items()}, domain)
            assert engine.forces(0, phi, env) == want


def test_chain_example():
    S = chain_site()
    b = KJName(P, [(Q, empty_name(Q))])
    env = {"a": empty_name(P), "b": b}
    mem = parse_formula("(mem a b)")
    assert not forces(S, P, mem, env)
    assert forces(S, Q, mem, env)
    assert not forces(S, P, parse_formula("(or (mem a b) (not (mem a b)))"), env)
    assert forces(S, P, parse_formula("(not (not (mem a b)))"), env)


def test_tensor_on_meet_site_is_weaker_than_conjunction():
    S = chain_site()
    b = KJName(P, [(Q, empty_name(Q))])
    env = {"a": empty_name(P), "b": b}
    assert forces(S, P, parse_formula("(tensor (mem a b) (mem a b))"), env)
    assert not forces(S, P, parse_formula("(and (mem a b) (mem a b))"), env)


def test_tensor_scopes_differ_only_by_witness_range():
    S = chain_site()
    env = {"x": empty_name(Q)}
    phi = parse_formula("(tensor (eq x x) (eq x x))")
    for scope in ("below", "all"):
        assert forces(S, Q, phi, env, tensor_scope=scope)
    with pytest.raises(ValueError):
        KJForcing(S, 1, tensor_scope="nowhere")


def test_persistence_on_small_sites():
    suite = default_suite()
    for n in (1, 2, 3):
        for order in posets(n):
            try:
                S = build_site(order, meet_tensor(order))
            except TensorAxiomViolation:
                S = build_site(order)
            rep = persistence_check(S, suite, R=1)
            assert rep.holds, rep.violations[:1]


def test_persistence_skips_tensor_on_plain_sites():
    S = load(DATA / "site_v.json").value
    rep = persistence_check(S, default_suite(), R=1)
    assert rep.holds
    assert any(uses_tensor(p) for p in default_suite())


def test_heyting_adapter():
    S = heyting_adapter(chain(3))
    assert S.size == 2 and S.labels == ("1", "2") and S.monoidal
    T = heyting_adapter(boolean_lattice(2))
    assert T.size == 3 and not T.monoidal
    assert heyting_adapter(chain(1)).size == 1


def test_excluded_middle():
    found = excluded_middle_witness(heyting_adapter(chain(3)))
    assert found is not None
    I, phi, env = found
    assert not forces(heyting_adapter(chain(3)), I, phi, env)
    assert excluded_middle_witness(heyting_adapter(chain(2))) is None
    assert excluded_middle_witness(build_site([[True]])) is None
